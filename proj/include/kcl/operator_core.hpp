#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kcl/error.hpp"
#include "kcl/exact_matrix.hpp"
#include "kcl/measure_space.hpp"
#include "kcl/orlicz.hpp"
#include "kcl/rational.hpp"

namespace kcl {

/// Exact matrix of the composition operator f -> f o tau on a finite space.
/// Entry (x, y) is 1 when tau(x) = y, so (M f)(x) = f(tau(x)).
struct OperatorMatrix {
  Transformation map;
  Matrix<Rational> entries;

  std::size_t size() const noexcept { return entries.rows(); }
};

inline OperatorMatrix matrix_of(const Transformation& tau) {
  const std::size_t n = tau.size();
  Matrix<Rational> m(n, n);
  for (Atom x = 0; x < n; ++x) m(x, tau(x)) = 1;
  return OperatorMatrix{tau, std::move(m)};
}

namespace detail {

inline Matrix<std::int64_t> integer_entries(const OperatorMatrix& m) {
  Matrix<std::int64_t> out(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (denominator(m.entries(i, j)) != 1)
        throw error(errc::invalid_parameter, "operator matrix has a non-integral entry");
      out(i, j) = numerator(m.entries(i, j)).convert_to<std::int64_t>();
    }
  return out;
}

}  // namespace detail

/// Kernel and range dimensions of M^k for k = 0..kmax.
struct ChainDims {
  std::vector<std::size_t> nullity;
  std::vector<std::size_t> rank;
};

// Powers are formed by integer matrix products and ranked by fraction-free
// elimination; nothing here looks at the map itself.
inline ChainDims chain_dims(const OperatorMatrix& m, std::size_t kmax) {
  const std::size_t n = m.size();
  auto base = detail::integer_entries(m);
  auto power = Matrix<std::int64_t>::identity(n);
  ChainDims out;
  for (std::size_t k = 0; k <= kmax; ++k) {
    if (k > 0) power = power * base;
    std::size_t r = rank(power);
    out.rank.push_back(r);
    out.nullity.push_back(n - r);
  }
  return out;
}

inline ChainDims chain_dims(const OperatorMatrix& m) { return chain_dims(m, m.size()); }

namespace detail {

// First k >= 1 with seq[k] == seq[k+1]. A monotone chain of dimensions in
// [0, n] stabilizes by k = n, so n + 1 terms past k = 0 always suffice.
inline std::size_t first_stable_index(const std::vector<std::size_t>& seq) {
  for (std::size_t k = 1; k + 1 < seq.size(); ++k)
    if (seq[k] == seq[k + 1]) return k;
  throw error(errc::decomposition_failure, "dimension chain did not stabilize");
}

}  // namespace detail

/// Smallest k >= 1 with N(M^k) = N(M^{k+1}).
inline std::size_t ascent_oracle(const OperatorMatrix& m) {
  return detail::first_stable_index(chain_dims(m, m.size() + 2).nullity);
}

/// Smallest k >= 1 with R(M^k) = R(M^{k+1}).
inline std::size_t descent_oracle(const OperatorMatrix& m) {
  return detail::first_stable_index(chain_dims(m, m.size() + 2).rank);
}

/// X = N(M^p) (+) R(M^p) with M nilpotent on the first summand and invertible
/// on the second.
struct RieszDecomposition {
  std::size_t p = 0;
  std::vector<std::vector<Rational>> kernel_basis;
  std::vector<std::vector<Rational>> range_basis;
};

namespace detail {

inline Matrix<Rational> power_of(const Matrix<Rational>& m, std::size_t k) {
  auto out = Matrix<Rational>::identity(m.rows());
  for (std::size_t i = 0; i < k; ++i) out = out * m;
  return out;
}

inline std::vector<std::vector<Rational>> apply_all(const Matrix<Rational>& m,
                                                    const std::vector<std::vector<Rational>>& vs) {
  std::vector<std::vector<Rational>> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(m * v);
  return out;
}

inline std::vector<std::vector<Rational>> concat(std::vector<std::vector<Rational>> a,
                                                 const std::vector<std::vector<Rational>>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// span(extra) is contained in span(basis).
inline bool spans_contain(const std::vector<std::vector<Rational>>& basis,
                          const std::vector<std::vector<Rational>>& extra, std::size_t n) {
  auto r = rank(Matrix<Rational>::from_columns(basis, n));
  return rank(Matrix<Rational>::from_columns(concat(basis, extra), n)) == r;
}

}  // namespace detail

inline RieszDecomposition riesz_decomposition(const OperatorMatrix& m) {
  const std::size_t n = m.size();
  auto fail = [](const std::string& why) { throw error(errc::decomposition_failure, why); };

  RieszDecomposition d;
  d.p = ascent_oracle(m);
  if (descent_oracle(m) != d.p)
    fail("ascent " + std::to_string(d.p) + " != descent " + std::to_string(descent_oracle(m)));

  auto mp = detail::power_of(m.entries, d.p);
  d.kernel_basis = nullspace_basis(mp);
  d.range_basis = column_space_basis(mp);

  if (d.kernel_basis.size() + d.range_basis.size() != n) fail("dimensions do not add up to n");
  if (n > 0 && rank(Matrix<Rational>::from_columns(detail::concat(d.kernel_basis, d.range_basis), n)) != n)
    fail("N(M^p) and R(M^p) do not form a direct sum");

  // Nilpotent on V: V is invariant and M^p kills it.
  if (!d.kernel_basis.empty()) {
    if (!detail::spans_contain(d.kernel_basis, detail::apply_all(m.entries, d.kernel_basis), n))
      fail("N(M^p) is not invariant under M");
    for (const auto& v : detail::apply_all(mp, d.kernel_basis))
      for (const auto& c : v)
        if (c != 0) fail("(M restricted to N(M^p))^p is not zero");
  }
  // Invertible on W: W is invariant and M is injective on it.
  if (!d.range_basis.empty()) {
    auto image_of_range = detail::apply_all(m.entries, d.range_basis);
    if (!detail::spans_contain(d.range_basis, image_of_range, n))
      fail("R(M^p) is not invariant under M");
    if (rank(Matrix<Rational>::from_columns(image_of_range, n)) != d.range_basis.size())
      fail("M restricted to R(M^p) is singular");
  }
  return d;
}

/// Least K with mu(tau^{-1}(A)) <= K mu(A) for all A: the largest value of
/// f_tau on the positive-weight atoms.
inline Rational boundedness_constant(const Transformation& tau) {
  auto f = rn_derivative(tau, 1);
  const auto& space = *tau.space();
  Rational k = 0;
  for (Atom x = 0; x < space.size(); ++x)
    if (space.weight(x) > 0) k = std::max(k, f.value[x]);
  return k;
}

/// The composition operator applied to a function: (C_tau f)(x) = f(tau(x)).
inline SpaceFunction compose(const Transformation& tau, const SpaceFunction& f) {
  SpaceFunction g{f.space, std::vector<double>(f.value.size(), 0.0)};
  for (Atom x = 0; x < g.value.size(); ++x) g.value[x] = f.value[tau(x)];
  return g;
}

/// f lies in N(C_tau^k) = L^phi(Omega_k), Omega_k the zero set of f_{tau^k}.
///
/// Decided from the Radon-Nikodym derivative and cross-checked against
/// M^k f = 0 on the positive-weight atoms.
inline bool kernel_membership(const Transformation& tau, std::size_t k, const SpaceFunction& f) {
  const auto& space = *tau.space();
  auto density = rn_derivative(tau, k);
  bool by_measure = true;
  for (Atom x = 0; x < space.size(); ++x)
    if (space.weight(x) > 0 && density.value[x] > 0 && f.value[x] != 0.0) by_measure = false;

  auto mk = detail::power_of(matrix_of(tau).entries, k);
  bool by_matrix = true;
  for (Atom x = 0; x < space.size(); ++x) {
    if (space.weight(x) == 0) continue;
    double v = 0.0;
    for (Atom y = 0; y < space.size(); ++y)
      if (mk(x, y) != 0) v += to_double(mk(x, y)) * f.value[y];
    if (v != 0.0) by_matrix = false;
  }
  if (by_measure != by_matrix)
    throw error(errc::inconsistency_found, "kernel membership differs between density and matrix routes");
  return by_measure;
}

}  // namespace kcl
