#pragma once

#include <map>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "kcl/error.hpp"
#include "kcl/measure_space.hpp"

namespace kcl::testing {

inline SpaceRef counting_space(std::size_t n) {
  std::vector<std::string> pts;
  for (std::size_t i = 1; i <= n; ++i) pts.push_back(std::to_string(i));
  return new_space(pts, std::vector<Rational>(n, Rational(1)));
}

// Running example: {1->2, 2->3, 3->3, 4->3} with counting measure.
inline Transformation tau_e1() {
  auto s = counting_space(4);
  return new_map(s, {{"1", "2"}, {"2", "3"}, {"3", "3"}, {"4", "3"}});
}

// 3-cycle with counting measure.
inline Transformation tau_e2() {
  auto s = counting_space(3);
  return new_map(s, {{"1", "2"}, {"2", "3"}, {"3", "1"}});
}

// Builds a map on "1".."n" from 1-based images.
inline Transformation map_from(const std::vector<std::size_t>& images) {
  auto s = counting_space(images.size());
  std::vector<Atom> a;
  for (auto y : images) a.push_back(y - 1);
  return Transformation(s, a);
}

inline PointSet atoms(std::initializer_list<std::size_t> one_based) {
  PointSet s;
  for (auto x : one_based) s.insert(x - 1);
  return s;
}

inline std::vector<Rational> rats(std::initializer_list<int> v) {
  return std::vector<Rational>(v.begin(), v.end());
}

}  // namespace kcl::testing

#define EXPECT_KCL_ERROR(stmt, expected_code)                                  \
  do {                                                                         \
    try {                                                                      \
      stmt;                                                                    \
      ADD_FAILURE() << "expected " << ::kcl::to_string(expected_code);         \
    } catch (const ::kcl::error& e) {                                          \
      EXPECT_EQ(e.code(), expected_code) << e.what();                          \
    }                                                                          \
  } while (0)
