#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kcl/error.hpp"
#include "kcl/measure_space.hpp"
#include "kcl/rational.hpp"

namespace kcl {

enum class OrliczFamily { power, power_log, exp_minus_linear, custom };

/// A convex Orlicz function phi on [0, inf).
///
/// The shipped families are
///   power(p)          x^p,              p > 1
///   power_log(p)      x^p * ln(1 + x),  p >= 1
///   exp_minus_linear  e^x - x - 1
/// A custom phi can be registered with make_custom_orlicz; it is spot-checked
/// numerically for the Orlicz axioms at registration.
class OrliczFunction {
 public:
  OrliczFamily family() const noexcept { return family_; }
  const std::optional<Rational>& exponent() const noexcept { return p_exact_; }

  double operator()(double x) const {
    if (x <= 0) return 0.0;
    switch (family_) {
      case OrliczFamily::power: return std::pow(x, p_);
      case OrliczFamily::power_log: return std::pow(x, p_) * std::log1p(x);
      case OrliczFamily::exp_minus_linear: return std::expm1(x) - x;
      case OrliczFamily::custom: return custom_(x);
    }
    return 0.0;
  }

  // ln(phi(x)) for x > 0, finite well past the point where phi(x) overflows.
  double log_value(double x) const {
    switch (family_) {
      case OrliczFamily::power: return p_ * std::log(x);
      case OrliczFamily::power_log: return p_ * std::log(x) + std::log(std::log1p(x));
      case OrliczFamily::exp_minus_linear:
        if (x < 30.0) return std::log(std::expm1(x) - x);
        return x + std::log1p(-(x + 1.0) * std::exp(-x));
      case OrliczFamily::custom: return std::log(custom_(x));
    }
    return 0.0;
  }

  // Whether phi(2x) <= K phi(x) is known to hold for the family as a whole.
  bool delta2_structural() const noexcept {
    switch (family_) {
      case OrliczFamily::power:
      case OrliczFamily::power_log: return true;
      case OrliczFamily::exp_minus_linear: return false;
      case OrliczFamily::custom: return custom_delta2_;
    }
    return false;
  }

  std::string spec() const {
    switch (family_) {
      case OrliczFamily::power: return "power:" + to_string(*p_exact_);
      case OrliczFamily::power_log: return "powerlog:" + to_string(*p_exact_);
      case OrliczFamily::exp_minus_linear: return "expml";
      case OrliczFamily::custom: return "custom:" + custom_name_;
    }
    return {};
  }

  friend OrliczFunction make_orlicz(OrliczFamily, std::optional<Rational>);
  friend OrliczFunction make_custom_orlicz(std::string, std::function<double(double)>, bool);

 private:
  OrliczFunction() = default;

  OrliczFamily family_ = OrliczFamily::power;
  std::optional<Rational> p_exact_;
  double p_ = 2.0;
  std::function<double(double)> custom_;
  std::string custom_name_;
  bool custom_delta2_ = false;
};

namespace detail {

// Numeric spot-check of the Orlicz axioms: phi(0) = 0, positivity, monotonicity,
// midpoint convexity on a log grid, and phi(x)/x strictly increasing across
// widely separated scales (the two limit conditions).
inline void spot_check_orlicz(const OrliczFunction& phi) {
  auto fail = [&](const std::string& why) {
    throw error(errc::invalid_parameter, phi.spec() + " is not an Orlicz function: " + why);
  };
  if (phi(0.0) != 0.0) fail("phi(0) != 0");
  constexpr int kGrid = 64;
  double prev = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    double a = std::pow(10.0, -4.0 + 6.0 * i / kGrid);
    double b = std::pow(10.0, -4.0 + 6.0 * (i + 1) / kGrid);
    double fa = phi(a), fb = phi(b), fm = phi(0.5 * (a + b));
    if (!(fa > 0.0)) fail("phi(x) <= 0 at x > 0");
    if (fa < prev) fail("phi decreases");
    if (fm > 0.5 * (fa + fb) * (1.0 + 1e-12)) fail("midpoint convexity fails");
    prev = fa;
  }
  double r_small = phi(1e-6) / 1e-6, r_one = phi(1.0), r_big = phi(1e6) / 1e6;
  if (!(r_small < r_one && r_one < r_big)) fail("phi(x)/x is not strictly increasing");
}

}  // namespace detail

inline OrliczFunction make_orlicz(OrliczFamily family, std::optional<Rational> p = std::nullopt) {
  OrliczFunction phi;
  phi.family_ = family;
  switch (family) {
    case OrliczFamily::power:
      if (!p || *p <= 1)
        throw error(errc::invalid_parameter, "power(p) requires p > 1");
      break;
    case OrliczFamily::power_log:
      if (!p || *p < 1)
        throw error(errc::invalid_parameter, "power_log(p) requires p >= 1");
      break;
    case OrliczFamily::exp_minus_linear:
      if (p) throw error(errc::invalid_parameter, "exp_minus_linear takes no parameter");
      break;
    case OrliczFamily::custom:
      throw error(errc::invalid_parameter, "use make_custom_orlicz for custom functions");
  }
  if (p) {
    phi.p_exact_ = *p;
    phi.p_ = to_double(*p);
  }
  detail::spot_check_orlicz(phi);
  return phi;
}

/// Registers a user phi. `delta2_holds` is the caller's attestation that phi
/// satisfies the Delta2 condition for all x > 0.
inline OrliczFunction make_custom_orlicz(std::string name, std::function<double(double)> phi_fn,
                                         bool delta2_holds) {
  OrliczFunction phi;
  phi.family_ = OrliczFamily::custom;
  phi.custom_ = std::move(phi_fn);
  phi.custom_name_ = std::move(name);
  phi.custom_delta2_ = delta2_holds;
  detail::spot_check_orlicz(phi);
  return phi;
}

/// Parses `power:<p>`, `powerlog:<p>` or `expml`.
inline OrliczFunction parse_orlicz(std::string_view text) {
  if (text == "expml") return make_orlicz(OrliczFamily::exp_minus_linear);
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw error(errc::parse_error, "unknown phi specifier '" + std::string(text) + "'");
  auto head = text.substr(0, colon);
  auto p = parse_rational(text.substr(colon + 1));
  if (head == "power") return make_orlicz(OrliczFamily::power, p);
  if (head == "powerlog") return make_orlicz(OrliczFamily::power_log, p);
  throw error(errc::parse_error, "unknown phi family '" + std::string(head) + "'");
}

/// The unique x >= 0 with phi(x) = y, by bisection after geometric bracketing.
inline double phi_inverse(const OrliczFunction& phi, double y) {
  if (y <= 0.0) return 0.0;
  double hi = 1.0;
  while (phi(hi) < y) hi *= 2.0;
  double lo = hi;
  while (lo > std::numeric_limits<double>::min() && phi(lo) >= y) lo *= 0.5;
  if (phi(lo) >= y) return lo;
  // phi(lo) < y <= phi(hi)
  for (int i = 0; i < 2000; ++i) {
    double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (phi(mid) < y) lo = mid; else hi = mid;
    if (hi - lo <= 1e-16 * hi) break;
  }
  return 0.5 * (lo + hi);
}

/// Real-valued function on the atoms of a space.
struct SpaceFunction {
  SpaceRef space;
  std::vector<double> value;

  SpaceFunction scaled(double c) const {
    SpaceFunction g{space, value};
    for (auto& v : g.value) v *= c;
    return g;
  }
};

inline SpaceFunction indicator(const SpaceRef& space, const PointSet& set) {
  SpaceFunction f{space, std::vector<double>(space->size(), 0.0)};
  for (Atom x : set) f.value.at(x) = 1.0;
  return f;
}

/// I_phi(f) = sum phi(|f(x)|) mu{x}.
inline double modular(const OrliczFunction& phi, const SpaceFunction& f) {
  const auto& space = *f.space;
  double sum = 0.0;
  for (Atom x = 0; x < space.size(); ++x) {
    if (space.weight(x) == 0 || f.value[x] == 0.0) continue;
    sum += phi(std::abs(f.value[x])) * to_double(space.weight(x));
  }
  return sum;
}

namespace detail {

// f vanishes mu-a.e.
inline bool is_null_function(const SpaceFunction& f) {
  for (Atom x = 0; x < f.value.size(); ++x)
    if (f.value[x] != 0.0 && f.space->weight(x) > 0) return false;
  return true;
}

inline double modular_scaled(const OrliczFunction& phi, const SpaceFunction& f, double c) {
  const auto& space = *f.space;
  double sum = 0.0;
  for (Atom x = 0; x < space.size(); ++x) {
    if (space.weight(x) == 0 || f.value[x] == 0.0) continue;
    sum += phi(c * std::abs(f.value[x])) * to_double(space.weight(x));
  }
  return sum;
}

}  // namespace detail

/// inf { k > 0 : I_phi(|f| / k) <= 1 }.
inline double luxemburg_norm(const OrliczFunction& phi, const SpaceFunction& f) {
  if (detail::is_null_function(f)) return 0.0;
  auto fits = [&](double k) { return detail::modular_scaled(phi, f, 1.0 / k) <= 1.0; };
  double hi = 1.0;
  while (!fits(hi)) hi *= 2.0;
  double lo = hi;
  while (fits(lo)) lo *= 0.5;
  // lo fails, hi fits
  // Runs to adjacent doubles, well inside the 1e-12 absolute target.
  for (int i = 0; i < 2000; ++i) {
    double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (fits(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

/// inf over k > 0 of (1 + I_phi(k f)) / k.
///
/// The norm is positively homogeneous, so f is first rescaled to unit
/// Luxemburg norm; golden-section search then runs on log k over
/// [1e-9, 1e9] once a coarse probe shows the minimum is interior.
inline double amemiya_norm(const OrliczFunction& phi, const SpaceFunction& f) {
  if (detail::is_null_function(f)) return 0.0;
  const double scale = luxemburg_norm(phi, f);
  auto h = [&](double t) {
    double k = std::exp(t);
    return (1.0 + detail::modular_scaled(phi, f, k / scale)) / k;
  };
  const double t_lo = std::log(1e-9), t_hi = std::log(1e9);
  constexpr int kProbes = 64;
  std::array<double, kProbes + 1> probe{};
  int best = 0;
  for (int i = 0; i <= kProbes; ++i) {
    probe[i] = h(t_lo + (t_hi - t_lo) * i / kProbes);
    if (probe[i] < probe[best]) best = i;
  }
  if (best == 0 || best == kProbes)
    throw error(errc::bracket_failure, "no interior minimum of (1 + I(kf))/k for " + phi.spec());
  double a = t_lo + (t_hi - t_lo) * (best - 1) / kProbes;
  double b = t_lo + (t_hi - t_lo) * (best + 1) / kProbes;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double hc = h(c), hd = h(d);
  double best_value = std::min({probe[best], hc, hd});
  for (int i = 0; i < 300 && b - a > 1e-13; ++i) {
    if (hc <= hd) {
      b = d; d = c; hd = hc;
      c = b - inv_phi * (b - a);
      hc = h(c);
    } else {
      a = c; c = d; hc = hd;
      d = a + inv_phi * (b - a);
      hd = h(d);
    }
    best_value = std::min({best_value, hc, hd});
  }
  return scale * best_value;
}

struct Delta2Report {
  bool holds = false;
  double K = 0.0;              // observed sup of phi(2x)/phi(x) on the grid (may be inf)
  double log_sup_ratio = 0.0;  // ln of the observed sup, finite even when K overflows
  double witness_x = 0.0;      // grid point attaining the sup
  bool structural = false;     // family-level verdict
};

/// Delta2 test: phi(2x) <= K phi(x) for all x > 0.
///
/// The family decides structurally; a 512-point log grid on [1e-8, 1e8]
/// supplies the K estimate and, on failure, the witness x.
inline Delta2Report delta2_check(const OrliczFunction& phi) {
  constexpr int kGrid = 512;
  constexpr double kThreshold = 1e9;
  Delta2Report r;
  r.structural = phi.delta2_structural();
  r.log_sup_ratio = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    double x = std::pow(10.0, -8.0 + 16.0 * i / (kGrid - 1));
    double lr = phi.log_value(2.0 * x) - phi.log_value(x);
    if (lr > r.log_sup_ratio) {
      r.log_sup_ratio = lr;
      r.witness_x = x;
    }
  }
  r.K = std::exp(r.log_sup_ratio);
  r.holds = r.structural && r.log_sup_ratio <= std::log(kThreshold);
  return r;
}

/// ||chi_A|| = 1 / phi^{-1}(1 / mu(A)).
inline double indicator_norm(const OrliczFunction& phi, const Rational& measure_of_a) {
  if (measure_of_a <= 0)
    throw error(errc::nonpositive_measure, "mu(A) = " + to_string(measure_of_a));
  return 1.0 / phi_inverse(phi, to_double(1 / measure_of_a));
}

}  // namespace kcl
