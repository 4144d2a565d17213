#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kcl/error.hpp"
#include "kcl/rational.hpp"

namespace kcl {

// Atoms are addressed by their position in the space; the order given at
// construction is the basis order used by every matrix downstream.
using Atom = std::size_t;
using PointSet = std::set<Atom>;

/// A finite purely atomic measure space: every subset is measurable and
/// mu(A) is the sum of the atom weights in A.
class DiscreteMeasureSpace {
 public:
  DiscreteMeasureSpace(std::vector<std::string> points, std::vector<Rational> weights)
      : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.size() != weights_.size())
      throw error(errc::length_mismatch, std::to_string(points_.size()) + " points but " +
                                             std::to_string(weights_.size()) + " weights");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (weights_[i] < 0)
        throw error(errc::negative_weight, "weight at index " + std::to_string(i) + " is " +
                                               to_string(weights_[i]));
      if (!index_.emplace(points_[i], i).second)
        throw error(errc::duplicate_point, "point '" + points_[i] + "' appears twice");
    }
  }

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<std::string>& points() const noexcept { return points_; }
  const std::vector<Rational>& weights() const noexcept { return weights_; }
  const std::string& name(Atom x) const { return points_.at(x); }
  const Rational& weight(Atom x) const { return weights_.at(x); }

  std::optional<Atom> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Rational total_measure() const {
    Rational total = 0;
    for (const auto& w : weights_) total += w;
    return total;
  }

  Rational measure(const PointSet& set) const {
    Rational total = 0;
    for (Atom x : set) total += weights_.at(x);
    return total;
  }

  bool all_positive() const {
    for (const auto& w : weights_)
      if (w == 0) return false;
    return true;
  }

  bool operator==(const DiscreteMeasureSpace& other) const {
    return points_ == other.points_ && weights_ == other.weights_;
  }

 private:
  std::vector<std::string> points_;
  std::vector<Rational> weights_;
  std::unordered_map<std::string, Atom> index_;
};

using SpaceRef = std::shared_ptr<const DiscreteMeasureSpace>;

inline SpaceRef new_space(std::vector<std::string> points, std::vector<Rational> weights) {
  return std::make_shared<const DiscreteMeasureSpace>(std::move(points), std::move(weights));
}

inline bool same_space(const SpaceRef& a, const SpaceRef& b) {
  return a == b || (a && b && *a == *b);
}

/// A total self-map tau of the atoms of a space.
class Transformation {
 public:
  Transformation(SpaceRef space, std::vector<Atom> assignment)
      : space_(std::move(space)), assignment_(std::move(assignment)) {
    if (assignment_.size() != space_->size())
      throw error(errc::missing_point, "assignment covers " + std::to_string(assignment_.size()) +
                                           " of " + std::to_string(space_->size()) + " points");
    for (Atom y : assignment_)
      if (y >= space_->size())
        throw error(errc::image_out_of_space, "image index " + std::to_string(y));
  }

  const SpaceRef& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return assignment_.size(); }
  Atom operator()(Atom x) const { return assignment_.at(x); }
  const std::vector<Atom>& assignment() const noexcept { return assignment_; }

  /// (*this) o inner, i.e. x -> this(inner(x)).
  Transformation after(const Transformation& inner) const {
    if (!same_space(space_, inner.space_))
      throw error(errc::space_mismatch, "cannot compose maps on different spaces");
    std::vector<Atom> out(size());
    for (Atom x = 0; x < size(); ++x) out[x] = assignment_[inner.assignment_[x]];
    return Transformation(space_, std::move(out));
  }

  bool operator==(const Transformation& other) const {
    return same_space(space_, other.space_) && assignment_ == other.assignment_;
  }

 private:
  SpaceRef space_;
  std::vector<Atom> assignment_;
};

inline Transformation identity_map(const SpaceRef& space) {
  std::vector<Atom> a(space->size());
  for (Atom x = 0; x < a.size(); ++x) a[x] = x;
  return Transformation(space, std::move(a));
}

inline Transformation new_map(const SpaceRef& space,
                              const std::map<std::string, std::string>& assignment) {
  std::vector<Atom> out(space->size());
  std::vector<bool> seen(space->size(), false);
  for (const auto& [from, to] : assignment) {
    auto x = space->find(from);
    if (!x) throw error(errc::unknown_point, "map source '" + from + "' is not a point");
    auto y = space->find(to);
    if (!y)
      throw error(errc::image_out_of_space, "image '" + to + "' of '" + from + "' is not a point");
    out[*x] = *y;
    seen[*x] = true;
  }
  for (Atom x = 0; x < seen.size(); ++x)
    if (!seen[x]) throw error(errc::missing_point, "point '" + space->name(x) + "' is unassigned");
  return Transformation(space, std::move(out));
}

/// Point mass function mu_k or any other measure on the atoms.
struct AtomicMeasure {
  SpaceRef space;
  std::vector<Rational> mass;

  PointSet support() const {
    PointSet s;
    for (Atom x = 0; x < mass.size(); ++x)
      if (mass[x] > 0) s.insert(x);
    return s;
  }

  Rational total() const {
    Rational t = 0;
    for (const auto& m : mass) t += m;
    return t;
  }
};

/// Density of a measure with respect to mu, e.g. f_{tau^k}.
struct WeightFunction {
  SpaceRef space;
  std::vector<Rational> value;

  PointSet support() const {
    PointSet s;
    for (Atom x = 0; x < value.size(); ++x)
      if (value[x] > 0) s.insert(x);
    return s;
  }
};

inline Transformation iterate(const Transformation& tau, std::size_t k) {
  std::vector<Atom> out(tau.size());
  for (Atom x = 0; x < out.size(); ++x) {
    Atom y = x;
    for (std::size_t i = 0; i < k; ++i) y = tau(y);
    out[x] = y;
  }
  return Transformation(tau.space(), std::move(out));
}

/// Measure of tau^{-1}{x} for every atom x.
inline std::vector<Rational> preimage_weights(const Transformation& tau) {
  const auto& space = *tau.space();
  std::vector<Rational> w(space.size(), Rational(0));
  for (Atom y = 0; y < space.size(); ++y) w[tau(y)] += space.weight(y);
  return w;
}

// On an atomic space the null sets are exactly the sets of null atoms, so the
// set-wise condition reduces to a check per null atom.
inline bool is_nonsingular(const Transformation& tau) {
  const auto& space = *tau.space();
  auto pre = preimage_weights(tau);
  for (Atom x = 0; x < space.size(); ++x)
    if (space.weight(x) == 0 && pre[x] != 0) return false;
  return true;
}

inline bool is_measure_preserving(const Transformation& tau) {
  const auto& space = *tau.space();
  auto pre = preimage_weights(tau);
  for (Atom x = 0; x < space.size(); ++x)
    if (pre[x] != space.weight(x)) return false;
  return true;
}

inline bool is_surjective(const Transformation& tau) {
  std::vector<bool> hit(tau.size(), false);
  for (Atom x = 0; x < tau.size(); ++x) hit[tau(x)] = true;
  for (bool h : hit)
    if (!h) return false;
  return true;
}

/// mu_k = mu o tau^{-k}.
inline AtomicMeasure pushforward(const Transformation& tau, std::size_t k) {
  auto tk = iterate(tau, k);
  return AtomicMeasure{tau.space(), preimage_weights(tk)};
}

inline WeightFunction density(const AtomicMeasure& m) {
  const auto& space = *m.space;
  WeightFunction f{m.space, std::vector<Rational>(space.size(), Rational(0))};
  for (Atom x = 0; x < space.size(); ++x) {
    if (space.weight(x) > 0) {
      f.value[x] = m.mass[x] / space.weight(x);
    } else if (m.mass[x] > 0) {
      throw error(errc::nonsingularity_violated,
                  "atom '" + space.name(x) + "' is null but carries mass " + to_string(m.mass[x]));
    }
  }
  return f;
}

/// Radon-Nikodym derivative f_{tau^k} = d(mu_k)/d(mu); zero on null atoms.
inline WeightFunction rn_derivative(const Transformation& tau, std::size_t k) {
  return density(pushforward(tau, k));
}

/// R(tau^k).
inline PointSet image(const Transformation& tau, std::size_t k) {
  auto tk = iterate(tau, k);
  PointSet s;
  for (Atom x = 0; x < tk.size(); ++x) s.insert(tk(x));
  return s;
}

// Mutual absolute continuity; for purely atomic measures this is equality of
// supports.
inline bool measures_equivalent(const AtomicMeasure& m1, const AtomicMeasure& m2) {
  if (!same_space(m1.space, m2.space))
    throw error(errc::space_mismatch, "measures live on different spaces");
  return m1.support() == m2.support();
}

inline std::vector<std::string> names(const DiscreteMeasureSpace& space, const PointSet& set) {
  std::vector<std::string> out;
  out.reserve(set.size());
  for (Atom x : set) out.push_back(space.name(x));
  return out;
}

}  // namespace kcl

namespace kcl {

/// The map induced on the positive-weight atoms. Functions in L^0 are
/// identified mu-a.e., so this is the map the composition operator actually
/// sees. Requires nonsingularity, which keeps positive atoms off null atoms.
inline Transformation restrict_to_positive(const Transformation& tau) {
  if (!is_nonsingular(tau))
    throw error(errc::nonsingularity_violated, "restriction to positive atoms needs a nonsingular map");
  const auto& space = *tau.space();
  std::vector<std::string> pts;
  std::vector<Rational> wts;
  std::vector<Atom> new_index(space.size(), 0);
  for (Atom x = 0; x < space.size(); ++x) {
    if (space.weight(x) == 0) continue;
    new_index[x] = pts.size();
    pts.push_back(space.name(x));
    wts.push_back(space.weight(x));
  }
  auto sub = new_space(std::move(pts), std::move(wts));
  std::vector<Atom> a;
  a.reserve(sub->size());
  for (Atom x = 0; x < space.size(); ++x)
    if (space.weight(x) > 0) a.push_back(new_index[tau(x)]);
  return Transformation(sub, std::move(a));
}

}  // namespace kcl
