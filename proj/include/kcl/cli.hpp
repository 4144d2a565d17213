#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "kcl/chain_analysis.hpp"
#include "kcl/error.hpp"
#include "kcl/measure_space.hpp"
#include "kcl/operator_core.hpp"
#include "kcl/orlicz.hpp"
#include "kcl/symbolic_space.hpp"

namespace kcl::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kInputError = 2;

struct SpaceAndMap {
  SpaceRef space;
  Transformation map;
};

namespace detail {

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace detail

/// Reads the space file format:
///   {"points": ["1", ...], "weights": ["1", "3/2", ...], "map": {"1": "2", ...}}
inline SpaceAndMap parse_space_file(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw error(errc::parse_error, "line " + std::to_string(detail::line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw error(errc::parse_error, "top level must be an object");
  for (const char* field : {"points", "weights", "map"})
    if (!doc.contains(field)) throw error(errc::parse_error, std::string("missing field '") + field + "'");

  const auto& jpoints = doc["points"];
  const auto& jweights = doc["weights"];
  const auto& jmap = doc["map"];
  if (!jpoints.is_array()) throw error(errc::parse_error, "field 'points' must be an array");
  if (!jweights.is_array()) throw error(errc::parse_error, "field 'weights' must be an array");
  if (!jmap.is_object()) throw error(errc::parse_error, "field 'map' must be an object");

  std::vector<std::string> points;
  for (std::size_t i = 0; i < jpoints.size(); ++i) {
    if (!jpoints[i].is_string())
      throw error(errc::parse_error, "field 'points[" + std::to_string(i) + "]' must be a string");
    points.push_back(jpoints[i].get<std::string>());
  }
  std::vector<Rational> weights;
  for (std::size_t i = 0; i < jweights.size(); ++i) {
    const auto& w = jweights[i];
    std::string field = "weights[" + std::to_string(i) + "]";
    try {
      if (w.is_string()) weights.push_back(parse_rational(w.get<std::string>()));
      else if (w.is_number_integer()) weights.push_back(Rational(w.get<std::int64_t>()));
      else throw error(errc::parse_error, "must be a string such as \"3/2\"");
    } catch (const error& e) {
      throw error(e.code(), "field '" + field + "': " + e.message());
    }
  }
  std::map<std::string, std::string> assignment;
  for (const auto& [from, to] : jmap.items()) {
    if (!to.is_string()) throw error(errc::parse_error, "field 'map." + from + "' must be a string");
    assignment.emplace(from, to.get<std::string>());
  }
  try {
    auto space = new_space(std::move(points), std::move(weights));
    auto map = new_map(space, assignment);
    return {space, std::move(map)};
  } catch (const error& e) {
    throw error(e.code(), "in space file: " + e.message());
  }
}

inline std::string serialize_space(const Transformation& tau) {
  const auto& space = *tau.space();
  nlohmann::ordered_json doc;
  doc["points"] = space.points();
  auto weights = nlohmann::ordered_json::array();
  for (const auto& w : space.weights()) weights.push_back(to_string(w));
  doc["weights"] = weights;
  auto map = nlohmann::ordered_json::object();
  for (Atom x = 0; x < space.size(); ++x) map[space.name(x)] = space.name(tau(x));
  doc["map"] = map;
  return doc.dump(2) + "\n";
}

/// Uniform draw from [0, bound) by rejection, so campaigns do not depend on
/// the standard library's distribution implementation.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

/// Functional graph on points "1".."n" with unit weights; each image is an
/// independent uniform choice.
inline Transformation random_functional_graph(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::string> points;
  for (std::size_t i = 1; i <= n; ++i) points.push_back(std::to_string(i));
  auto space = new_space(std::move(points), std::vector<Rational>(n, Rational(1)));
  std::vector<Atom> a(n);
  for (auto& y : a) y = draw_below(rng, n);
  return Transformation(space, std::move(a));
}

/// Uniform random permutation on "1".."n" with unit weights (Fisher-Yates).
inline Transformation random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::string> points;
  for (std::size_t i = 1; i <= n; ++i) points.push_back(std::to_string(i));
  auto space = new_space(std::move(points), std::vector<Rational>(n, Rational(1)));
  std::vector<Atom> a(n);
  for (Atom i = 0; i < n; ++i) a[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(a[i - 1], a[draw_below(rng, i)]);
  return Transformation(space, std::move(a));
}

enum class Command { analyze, oracle, norm, witness, campaign };

struct AnalysisRequest {
  Command command = Command::analyze;
  std::optional<std::string> space_path;
  std::optional<std::string> map_spec;
  std::optional<std::string> phi;
  std::vector<double> function_values;
  std::optional<std::size_t> kmax;
  std::size_t depth = 10;
  std::optional<std::uint64_t> bound;
  std::optional<std::size_t> truncate;
  std::size_t graph_size = 12;
  std::size_t count = 1000;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::string set_str(const DiscreteMeasureSpace& space, const PointSet& s) {
  std::string out = "{";
  bool first = true;
  for (Atom x : s) {
    if (!first) out += ",";
    out += space.name(x);
    first = false;
  }
  return out + "}";
}

inline const char* yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::parse_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SpaceAndMap load(const AnalysisRequest& req) {
  if (!req.space_path) throw error(errc::parse_error, "--space is required");
  return parse_space_file(read_file(*req.space_path));
}

inline void write_space(std::ostream& out, const Transformation& tau) {
  const auto& space = *tau.space();
  out << "== space ==\n";
  out << "atoms: " << space.size() << "\n";
  out << "weights:";
  for (Atom x = 0; x < space.size(); ++x) out << " " << space.name(x) << "=" << to_string(space.weight(x));
  out << "\nmap:";
  for (Atom x = 0; x < space.size(); ++x) out << " " << space.name(x) << "->" << space.name(tau(x));
  out << "\n";
}

inline std::string vector_str(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + ")";
}

inline int analyze(const AnalysisRequest& req, std::ostream& out) {
  auto [space, tau] = load(req);
  std::size_t kmax = req.kmax.value_or(std::max<std::size_t>(space->size(), 1));
  auto report = consistency_report(tau, kmax);
  auto corollary = corollary_checks(tau);

  write_space(out, tau);
  const auto& h = report.hypotheses;
  out << "== hypotheses ==\n";
  out << "nonsingular: " << yes_no(h.nonsingular) << "\n";
  out << "surjective: " << yes_no(h.surjective) << "\n";
  out << "positive sets have positive preimages: " << yes_no(h.positive_preimages) << "\n";
  out << "all atoms positive: " << yes_no(h.all_positive_weights) << "\n";
  out << "measure preserving: " << yes_no(corollary.measure_preserving) << "\n";
  out << "corollaries: " << corollary.summary() << "\n";

  out << "== chain ==\n";
  out << "k\tOmega_k\tR(tau^k)\tsupp(mu_k)\tnullity\trank\n";
  for (const auto& rec : report.records)
    out << rec.k << "\t" << set_str(*space, rec.zero_set) << "\t" << set_str(*space, rec.image) << "\t"
        << set_str(*space, rec.support) << "\t" << rec.nullity << "\t" << rec.rank << "\n";

  out << "== verdicts ==\n";
  out << "ascent (measure equivalence): " << report.ascent_theorem.str() << "\n";
  if (report.descent_theorem) {
    const auto& d = *report.descent_theorem;
    out << "descent (injectivity on ranges): " << d.descent.str();
    if (d.injective_from) out << ", one-one from N=" << *d.injective_from;
    out << "\n";
  } else {
    out << "descent (injectivity on ranges): not applicable (null atom present)\n";
  }
  out << "ascent (kernel chain): " << report.ascent_oracle << "\n";
  out << "descent (range chain): " << report.descent_oracle << "\n";
  out << "tail height: " << report.tail_height << "\n";
  out << "riesz decomposition: p=" << report.riesz_p << " dim N=" << report.riesz_kernel_dim
      << " dim R=" << report.riesz_range_dim << "\n";
  if (report.chain_rule) out << "chain rule at first equivalent pair: " << (*report.chain_rule ? "holds" : "FAILS") << "\n";

  out << "== consistency ==\n";
  if (report.consistent) out << "consistent\n";
  for (const auto& msg : report.inconsistencies) out << "INCONSISTENT: " << msg << "\n";

  out << "== trailer ==\n";
  out << "ascent_theorem=" << (report.ascent_theorem.finite ? std::to_string(report.ascent_theorem.value) : "undetermined") << "\n";
  if (report.descent_theorem) {
    const auto& d = report.descent_theorem->descent;
    out << "descent_theorem=" << (d.finite ? std::to_string(d.value) : "undetermined") << "\n";
    if (report.descent_theorem->injective_from) out << "n_inj=" << *report.descent_theorem->injective_from << "\n";
  }
  out << "ascent_oracle=" << report.ascent_oracle << "\n";
  out << "descent_oracle=" << report.descent_oracle << "\n";
  out << "tail_height=" << report.tail_height << "\n";
  out << "riesz_p=" << report.riesz_p << "\n";
  out << "consistent=" << (report.consistent ? "true" : "false") << "\n";
  return report.consistent ? kOk : kViolation;
}

inline int oracle(const AnalysisRequest& req, std::ostream& out) {
  auto [space, tau] = load(req);
  auto m = matrix_of(tau);
  std::size_t kmax = req.kmax.value_or(space->size());
  auto dims = chain_dims(m, kmax);
  auto d = riesz_decomposition(m);
  write_space(out, tau);
  out << "== chain ==\n";
  out << "k\tnullity\trank\n";
  for (std::size_t k = 0; k <= kmax; ++k) out << k << "\t" << dims.nullity[k] << "\t" << dims.rank[k] << "\n";
  out << "== riesz decomposition ==\n";
  out << "p=" << d.p << "\n";
  out << "kernel basis (" << d.kernel_basis.size() << "):\n";
  for (const auto& v : d.kernel_basis) out << "  " << vector_str(v) << "\n";
  out << "range basis (" << d.range_basis.size() << "):\n";
  for (const auto& v : d.range_basis) out << "  " << vector_str(v) << "\n";
  out << "== trailer ==\n";
  out << "ascent_oracle=" << ascent_oracle(m) << "\n";
  out << "descent_oracle=" << descent_oracle(m) << "\n";
  out << "riesz_p=" << d.p << "\n";
  out << "riesz_kernel_dim=" << d.kernel_basis.size() << "\n";
  out << "riesz_range_dim=" << d.range_basis.size() << "\n";
  return kOk;
}

inline std::string fmt_double(double v) {
  std::ostringstream s;
  s.precision(15);
  s << v;
  return s.str();
}

inline int norm(const AnalysisRequest& req, std::ostream& out) {
  auto [space, tau] = load(req);
  if (!req.phi) throw error(errc::parse_error, "--phi is required");
  auto phi = parse_orlicz(*req.phi);
  if (req.function_values.size() != space->size())
    throw error(errc::length_mismatch, "--f has " + std::to_string(req.function_values.size()) +
                                           " values for " + std::to_string(space->size()) + " atoms");
  SpaceFunction f{space, req.function_values};
  double mod = modular(phi, f);
  double lux = luxemburg_norm(phi, f);
  double ame = amemiya_norm(phi, f);
  auto d2 = delta2_check(phi);
  auto tf = compose(tau, f);
  out << "== norm ==\n";
  out << "phi: " << phi.spec() << "\n";
  out << "modular: " << fmt_double(mod) << "\n";
  out << "luxemburg: " << fmt_double(lux) << "\n";
  out << "amemiya: " << fmt_double(ame) << "\n";
  out << "delta2: " << (d2.holds ? "holds, K=" + fmt_double(d2.K) : "fails, witness x=" + fmt_double(d2.witness_x)) << "\n";
  out << "C_tau f modular: " << fmt_double(modular(phi, tf)) << "\n";
  out << "C_tau f luxemburg: " << fmt_double(luxemburg_norm(phi, tf)) << "\n";
  bool contraction_ok = true;
  if (is_nonsingular(tau)) {
    double k = to_double(boundedness_constant(tau));
    contraction_ok = modular(phi, tf) <= k * mod + 1e-9;
    out << "boundedness constant: " << to_string(boundedness_constant(tau)) << "\n";
  }
  bool sandwich = lux <= ame + 1e-9 && ame <= 2 * lux + 1e-9;
  out << "== trailer ==\n";
  out << "modular=" << fmt_double(mod) << "\n";
  out << "luxemburg=" << fmt_double(lux) << "\n";
  out << "amemiya=" << fmt_double(ame) << "\n";
  out << "delta2=" << (d2.holds ? "holds" : "fails") << "\n";
  out << "norm_sandwich=" << (sandwich ? "true" : "false") << "\n";
  out << "modular_contraction=" << (contraction_ok ? "true" : "false") << "\n";
  return sandwich && contraction_ok ? kOk : kViolation;
}

inline int witness(const AnalysisRequest& req, std::ostream& out) {
  if (!req.map_spec) throw error(errc::parse_error, "--map is required");
  auto sigma = parse_symbolic(*req.map_spec);
  auto search = witness_sequence(sigma, req.depth, req.bound);
  bool verified = verify_witnesses(sigma, search.sequence);
  out << "== witness ==\n";
  out << "map: " << sigma.spec() << "\n";
  out << "surjective: " << yes_no(sigma.is_surjective()) << "\n";
  for (const auto& [k, n] : search.sequence.entries) out << "k=" << k << " n_k=" << n << "\n";
  if (search.found)
    out << "evidence of infinite ascent up to depth " << req.depth << "\n";
  else
    out << "no witness within bound at k=" << *search.not_found_at << "\n";
  if (req.truncate) {
    auto m = truncated_matrix(sigma, *req.truncate);
    auto dims = chain_dims(m, *req.truncate + 1);
    out << "truncated nullity chain (n=" << *req.truncate << "):";
    for (auto v : dims.nullity) out << " " << v;
    out << "\n";
  }
  out << "== trailer ==\n";
  out << "found=" << (search.found ? "true" : "false") << "\n";
  out << "depth=" << req.depth << "\n";
  if (search.not_found_at) out << "not_found_at=" << *search.not_found_at << "\n";
  out << "verified=" << (verified ? "true" : "false") << "\n";
  return verified ? kOk : kViolation;
}

inline int campaign(const AnalysisRequest& req, std::ostream& out) {
  if (req.graph_size < 1) throw error(errc::invalid_parameter, "--n must be at least 1");
  std::mt19937_64 rng(req.seed);
  std::size_t consistent = 0;
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < req.count; ++i) {
    std::size_t n = 1 + draw_below(rng, req.graph_size);
    auto tau = random_functional_graph(n, rng);
    auto report = consistency_report(tau);
    if (report.consistent) {
      ++consistent;
    } else {
      std::string map;
      for (Atom x = 0; x < n; ++x) map += (x ? " " : "") + std::to_string(x + 1) + "->" + std::to_string(tau(x) + 1);
      failures.push_back("graph " + std::to_string(i) + " [" + map + "]: " + report.inconsistencies.front());
    }
  }
  out << "== campaign ==\n";
  out << "seed: " << req.seed << "\n";
  out << "max atoms: " << req.graph_size << "\n";
  out << consistent << "/" << req.count << " consistent\n";
  for (const auto& f : failures) out << "INCONSISTENT: " << f << "\n";
  out << "== trailer ==\n";
  out << "count=" << req.count << "\n";
  out << "consistent=" << consistent << "\n";
  out << "seed=" << req.seed << "\n";
  return failures.empty() ? kOk : kViolation;
}

}  // namespace detail

/// Executes one request. Returns 0 on success, 1 when a consistency or
/// property violation was found, 2 on input errors (reported on `err`).
inline int run(const AnalysisRequest& req, std::ostream& out, std::ostream& err) {
  try {
    switch (req.command) {
      case Command::analyze: return detail::analyze(req, out);
      case Command::oracle: return detail::oracle(req, out);
      case Command::norm: return detail::norm(req, out);
      case Command::witness: return detail::witness(req, out);
      case Command::campaign: return detail::campaign(req, out);
    }
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case errc::corollary_violation:
      case errc::inconsistency_found:
      case errc::decomposition_failure: return kViolation;
      default: return kInputError;
    }
  }
  return kInputError;
}

/// Seed for campaigns: KCL_SEED overrides the command-line value.
inline std::uint64_t effective_seed(std::uint64_t flag_value) {
  if (const char* env = std::getenv("KCL_SEED"); env && *env) {
    try {
      return kcl::detail::parse_natural(env, "KCL_SEED");
    } catch (const error&) {
      throw error(errc::parse_error, std::string("KCL_SEED='") + env + "' is not a nonnegative integer");
    }
  }
  return flag_value;
}

}  // namespace kcl::cli
