#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "kcl/error.hpp"
#include "kcl/functional_graph.hpp"
#include "kcl/measure_space.hpp"
#include "kcl/operator_core.hpp"

namespace kcl {

/// Outcome of a bounded search: a definite value, or nothing found up to the
/// search bound (which is evidence, not proof, of an infinite value).
struct Verdict {
  bool finite = false;
  std::size_t value = 0;  // the answer when finite, the search bound otherwise

  static Verdict Finite(std::size_t k) { return {true, k}; }
  static Verdict Undetermined(std::size_t kmax) { return {false, kmax}; }

  std::string str() const {
    return finite ? "Finite(" + std::to_string(value) + ")"
                  : "Undetermined(" + std::to_string(value) + ")";
  }
  bool operator==(const Verdict&) const = default;
};

namespace detail {

inline AtomicMeasure push_once(const Transformation& tau, const AtomicMeasure& m) {
  AtomicMeasure out{m.space, std::vector<Rational>(m.mass.size(), Rational(0))};
  for (Atom y = 0; y < m.mass.size(); ++y) out.mass[tau(y)] += m.mass[y];
  return out;
}

inline AtomicMeasure base_measure(const Transformation& tau) {
  return AtomicMeasure{tau.space(), tau.space()->weights()};
}

inline PointSet image_once(const Transformation& tau, const PointSet& s) {
  PointSet out;
  for (Atom x : s) out.insert(tau(x));
  return out;
}

}  // namespace detail

/// First k in [1, kmax] with mu_k and mu_{k+1} equivalent.
inline Verdict ascent_via_measures(const Transformation& tau, std::size_t kmax) {
  if (!is_nonsingular(tau))
    throw error(errc::nonsingularity_violated, "ascent characterization needs a nonsingular map");
  auto current = detail::push_once(tau, detail::base_measure(tau));
  for (std::size_t k = 1; k <= kmax; ++k) {
    auto next = detail::push_once(tau, current);
    if (measures_equivalent(current, next)) return Verdict::Finite(k);
    current = std::move(next);
  }
  return Verdict::Undetermined(kmax);
}

struct DescentVerdict {
  std::optional<std::size_t> injective_from;  // N_inj; empty when not found up to kmax
  Verdict descent;
};

/// Smallest N in [0, kmax] such that tau maps R(tau^N) one-one into itself;
/// the descent is max(N, 1) under the k >= 1 convention.
inline DescentVerdict descent_via_injectivity(const Transformation& tau, std::size_t kmax) {
  if (!tau.space()->all_positive())
    throw error(errc::positive_weight_required, "injectivity criterion needs every atom to have positive weight");
  PointSet range;
  for (Atom x = 0; x < tau.size(); ++x) range.insert(x);
  for (std::size_t n = 0; n <= kmax; ++n) {
    auto next = detail::image_once(tau, range);
    bool invariant = std::includes(range.begin(), range.end(), next.begin(), next.end());
    // tau is one-one on `range` iff it does not shrink it
    if (invariant && next.size() == range.size())
      return {n, Verdict::Finite(std::max<std::size_t>(n, 1))};
    range = std::move(next);
  }
  return {std::nullopt, Verdict::Undetermined(kmax)};
}

/// Which sufficient conditions for ascent 1 apply to tau.
struct CorollaryReport {
  bool measure_preserving = false;
  bool surjective_expanding = false;  // onto, and mu(tau^{-1}{x}) >= mu{x} at every atom
  Verdict ascent;

  bool any_applies() const { return measure_preserving || surjective_expanding; }
  std::string summary() const {
    if (!any_applies()) return "no corollary applicable";
    std::string s;
    if (measure_preserving) s += "measure-preserving";
    if (surjective_expanding) s += std::string(s.empty() ? "" : ", ") + "surjective-expanding";
    return s + ": ascent " + ascent.str();
  }
};

inline CorollaryReport corollary_checks(const Transformation& tau) {
  CorollaryReport r;
  r.measure_preserving = is_measure_preserving(tau);
  if (is_surjective(tau)) {
    auto pre = preimage_weights(tau);
    r.surjective_expanding = true;
    for (Atom x = 0; x < tau.size(); ++x)
      if (pre[x] < tau.space()->weight(x)) r.surjective_expanding = false;
  }
  r.ascent = ascent_via_measures(tau, std::max<std::size_t>(tau.size(), 1));
  if (r.any_applies() && r.ascent != Verdict::Finite(1))
    throw error(errc::corollary_violation, r.summary());
  return r;
}

/// Exact check of f_{tau^k} = (d mu_k / d mu_{k+1}) f_{tau^{k+1}} and its
/// mirror image on the common support of mu_k and mu_{k+1}. Only meaningful
/// when the two measures are equivalent.
inline bool chain_rule_holds(const Transformation& tau, std::size_t k) {
  auto mk = pushforward(tau, k);
  auto mk1 = pushforward(tau, k + 1);
  auto fk = density(mk);
  auto fk1 = density(mk1);
  for (Atom x = 0; x < tau.size(); ++x) {
    if (fk1.value[x] > 0 && fk.value[x] != (mk.mass[x] / mk1.mass[x]) * fk1.value[x]) return false;
    if (fk.value[x] > 0 && fk1.value[x] != (mk1.mass[x] / mk.mass[x]) * fk.value[x]) return false;
  }
  return true;
}

/// Omega_k: the zero set of f_{tau^k}.
struct KernelSupport {
  std::size_t k = 0;
  PointSet zero_set;
};

inline KernelSupport kernel_support(const Transformation& tau, std::size_t k) {
  auto f = rn_derivative(tau, k);
  KernelSupport s{k, {}};
  for (Atom x = 0; x < tau.size(); ++x)
    if (f.value[x] == 0) s.zero_set.insert(x);
  return s;
}

/// Standing hypotheses of the infinite-ascent criterion, checked per atom.
struct Hypotheses {
  bool nonsingular = false;
  bool surjective = false;
  bool positive_preimages = false;  // mu{x} > 0 implies mu(tau^{-1}{x}) > 0
  bool all_positive_weights = false;
};

inline Hypotheses hypotheses_of(const Transformation& tau) {
  Hypotheses h;
  h.nonsingular = is_nonsingular(tau);
  h.surjective = is_surjective(tau);
  h.all_positive_weights = tau.space()->all_positive();
  auto pre = preimage_weights(tau);
  h.positive_preimages = true;
  for (Atom x = 0; x < tau.size(); ++x)
    if (tau.space()->weight(x) > 0 && pre[x] == 0) h.positive_preimages = false;
  return h;
}

struct ChainRecord {
  std::size_t k = 0;
  PointSet zero_set;     // Omega_k
  PointSet image;        // R(tau^k)
  PointSet support;      // support of mu_k
  std::size_t nullity = 0;  // dim N(C^k) on L^phi
  std::size_t rank = 0;     // dim R(C^k) on L^phi
};

struct ChainReport {
  std::size_t kmax = 0;
  Hypotheses hypotheses;
  std::vector<ChainRecord> records;  // k = 0..kmax
  Verdict ascent_theorem;
  std::optional<DescentVerdict> descent_theorem;  // empty when a null atom exists
  std::size_t ascent_oracle = 0;
  std::size_t descent_oracle = 0;
  std::size_t tail_height = 0;
  std::size_t riesz_p = 0;
  std::size_t riesz_kernel_dim = 0;
  std::size_t riesz_range_dim = 0;
  std::optional<bool> chain_rule;  // at the first equivalent pair, when found
  bool consistent = true;
  std::vector<std::string> inconsistencies;
};

/// Runs the measure-theoretic criteria and the matrix oracle side by side and
/// records every disagreement.
///
/// The oracle works on the positive-weight atoms: C_tau acts on classes of
/// functions equal mu-a.e., so null atoms carry no dimensions.
inline ChainReport consistency_report(const Transformation& tau, std::size_t kmax) {
  if (!is_nonsingular(tau))
    throw error(errc::nonsingularity_violated, "consistency report needs a nonsingular map");
  if (kmax < 1) throw error(errc::invalid_parameter, "kmax must be at least 1");
  const auto& space = *tau.space();

  ChainReport r;
  r.kmax = kmax;
  r.hypotheses = hypotheses_of(tau);
  auto flag = [&r](std::string what) {
    r.consistent = false;
    r.inconsistencies.push_back(std::move(what));
  };

  auto quotient = restrict_to_positive(tau);
  auto qm = matrix_of(quotient);
  auto dims = chain_dims(qm, std::max(kmax, qm.size() + 2));
  r.ascent_oracle = detail::first_stable_index(dims.nullity);
  r.descent_oracle = detail::first_stable_index(dims.rank);
  r.tail_height = tail_height(quotient);

  r.ascent_theorem = ascent_via_measures(tau, kmax);
  if (space.all_positive()) r.descent_theorem = descent_via_injectivity(tau, kmax);

  PointSet positive;
  for (Atom x = 0; x < space.size(); ++x)
    if (space.weight(x) > 0) positive.insert(x);

  PointSet range;
  for (Atom x = 0; x < space.size(); ++x) range.insert(x);
  auto mu_k = detail::base_measure(tau);
  std::size_t prev_zero = 0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    ChainRecord rec;
    rec.k = k;
    rec.image = range;
    rec.support = mu_k.support();
    auto f = density(mu_k);
    for (Atom x = 0; x < space.size(); ++x)
      if (f.value[x] == 0) rec.zero_set.insert(x);
    rec.nullity = dims.nullity[k];
    rec.rank = dims.rank[k];

    PointSet complement;
    std::set_difference(positive.begin(), positive.end(), rec.zero_set.begin(), rec.zero_set.end(),
                        std::inserter(complement, complement.end()));
    if (complement != rec.support) flag("k=" + std::to_string(k) + ": complement of Omega_k != support(mu_k)");
    std::size_t zero_positive = rec.zero_set.size() - (space.size() - positive.size());
    if (rec.nullity != zero_positive)
      flag("k=" + std::to_string(k) + ": nullity " + std::to_string(rec.nullity) +
           " != |Omega_k on positive atoms| " + std::to_string(zero_positive));
    if (k > 0 && rec.zero_set.size() < prev_zero)
      flag("k=" + std::to_string(k) + ": Omega_k shrank");
    prev_zero = rec.zero_set.size();
    if (space.all_positive() && rec.support != rec.image)
      flag("k=" + std::to_string(k) + ": support(mu_k) != R(tau^k)");

    r.records.push_back(std::move(rec));
    range = detail::image_once(tau, range);
    mu_k = detail::push_once(tau, mu_k);
  }

  auto compare = [&](const char* what, const Verdict& v, std::size_t oracle) {
    if (v.finite ? v.value != oracle : oracle <= v.value)
      flag(std::string(what) + ": theorem " + v.str() + " vs oracle " + std::to_string(oracle));
  };
  compare("ascent", r.ascent_theorem, r.ascent_oracle);
  if (r.descent_theorem) compare("descent", r.descent_theorem->descent, r.descent_oracle);
  if (r.ascent_oracle != r.descent_oracle)
    flag("oracle ascent " + std::to_string(r.ascent_oracle) + " != oracle descent " +
         std::to_string(r.descent_oracle));
  if (std::max<std::size_t>(1, r.tail_height) != r.ascent_oracle)
    flag("tail height " + std::to_string(r.tail_height) + " disagrees with ascent " +
         std::to_string(r.ascent_oracle));

  try {
    auto d = riesz_decomposition(qm);
    r.riesz_p = d.p;
    r.riesz_kernel_dim = d.kernel_basis.size();
    r.riesz_range_dim = d.range_basis.size();
  } catch (const error& e) {
    flag(e.what());
  }

  if (r.ascent_theorem.finite) {
    r.chain_rule = chain_rule_holds(tau, r.ascent_theorem.value);
    if (!*r.chain_rule) flag("chain rule fails at k=" + std::to_string(r.ascent_theorem.value));
  }
  return r;
}

inline ChainReport consistency_report(const Transformation& tau) {
  return consistency_report(tau, std::max<std::size_t>(tau.size(), 1));
}

inline void require_consistent(const ChainReport& r) {
  if (!r.consistent) throw error(errc::inconsistency_found, r.inconsistencies.front());
}

}  // namespace kcl
