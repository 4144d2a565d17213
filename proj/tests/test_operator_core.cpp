#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "kcl/functional_graph.hpp"
#include "kcl/operator_core.hpp"
#include "oracles.hpp"

using namespace kcl;
using namespace kcl::testing;

namespace {

std::vector<std::size_t> selected_columns(const OperatorMatrix& m) {
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m.entries(i, j) != 0) cols.push_back(j + 1);
  return cols;
}

Transformation random_graph(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::size_t> images(n);
  for (auto& y : images) y = 1 + rng() % n;
  return map_from(images);
}

}  // namespace

TEST(MatrixOf, Examples) {
  EXPECT_EQ(selected_columns(matrix_of(tau_e1())), (std::vector<std::size_t>{2, 3, 3, 3}));
  auto id = identity_map(counting_space(3));
  EXPECT_EQ(matrix_of(id).entries, Matrix<Rational>::identity(3));
  EXPECT_EQ(selected_columns(matrix_of(tau_e2())), (std::vector<std::size_t>{2, 3, 1}));
}

TEST(MatrixOf, AppliesComposition) {
  auto m = matrix_of(tau_e1());
  std::vector<Rational> f = {10, 20, 30, 40};
  EXPECT_EQ(m.entries * f, (std::vector<Rational>{20, 30, 30, 30}));
}

TEST(ChainDims, Examples) {
  auto d = chain_dims(matrix_of(tau_e1()), 4);
  EXPECT_EQ(d.nullity, (std::vector<std::size_t>{0, 2, 3, 3, 3}));
  EXPECT_EQ(d.rank, (std::vector<std::size_t>{4, 2, 1, 1, 1}));
  auto d2 = chain_dims(matrix_of(tau_e2()));
  EXPECT_EQ(d2.nullity, (std::vector<std::size_t>(4, 0)));
  EXPECT_EQ(d2.rank, (std::vector<std::size_t>(4, 3)));
  auto di = chain_dims(matrix_of(identity_map(counting_space(5))));
  EXPECT_EQ(di.rank, (std::vector<std::size_t>(6, 5)));
}

TEST(AscentDescentOracle, Examples) {
  EXPECT_EQ(ascent_oracle(matrix_of(tau_e1())), 2u);
  EXPECT_EQ(descent_oracle(matrix_of(tau_e1())), 2u);
  EXPECT_EQ(ascent_oracle(matrix_of(tau_e2())), 1u);
  EXPECT_EQ(descent_oracle(matrix_of(tau_e2())), 1u);
  auto id = matrix_of(identity_map(counting_space(4)));
  EXPECT_EQ(ascent_oracle(id), 1u);
  EXPECT_EQ(descent_oracle(id), 1u);
}

TEST(Riesz, RunningExample) {
  auto d = riesz_decomposition(matrix_of(tau_e1()));
  EXPECT_EQ(d.p, 2u);
  ASSERT_EQ(d.kernel_basis.size(), 3u);
  ASSERT_EQ(d.range_basis.size(), 1u);
  for (const auto& v : d.kernel_basis) EXPECT_EQ(v[2], 0);  // vanish at atom 3
  const auto& c = d.range_basis[0];
  EXPECT_TRUE(c[0] != 0 && c[0] == c[1] && c[1] == c[2] && c[2] == c[3]);  // constants
  auto m = matrix_of(tau_e1());
  EXPECT_EQ(m.entries * c, c);
}

TEST(Riesz, PermutationAndCollapse) {
  auto d = riesz_decomposition(matrix_of(tau_e2()));
  EXPECT_EQ(d.p, 1u);
  EXPECT_TRUE(d.kernel_basis.empty());
  EXPECT_EQ(d.range_basis.size(), 3u);
  auto c = riesz_decomposition(matrix_of(map_from({1, 1})));
  EXPECT_EQ(c.p, 1u);
  EXPECT_EQ(c.kernel_basis.size(), 1u);
  EXPECT_EQ(c.range_basis.size(), 1u);
}

TEST(BoundednessConstant, Examples) {
  // atom 3 has preimages 2, 3 and 4
  EXPECT_EQ(boundedness_constant(tau_e1()), 3);
  EXPECT_EQ(boundedness_constant(tau_e2()), 1);
  EXPECT_EQ(boundedness_constant(identity_map(counting_space(3))), 1);
  auto s = new_space({"a", "b"}, {Rational(1, 3), Rational(2)});
  EXPECT_EQ(boundedness_constant(new_map(s, {{"a", "a"}, {"b", "a"}})), 7);  // (1/3 + 2) / (1/3)
  auto bad = new_space({"1", "2"}, rats({0, 1}));
  EXPECT_KCL_ERROR(boundedness_constant(new_map(bad, {{"1", "1"}, {"2", "1"}})), errc::nonsingularity_violated);
}

TEST(KernelMembership, Examples) {
  auto s = tau_e1().space();
  EXPECT_TRUE(kernel_membership(tau_e1(), 1, indicator(s, atoms({1}))));
  EXPECT_FALSE(kernel_membership(tau_e1(), 1, indicator(s, atoms({3}))));
  EXPECT_TRUE(kernel_membership(tau_e1(), 2, indicator(s, atoms({1, 2, 4}))));
  for (std::size_t k = 0; k < 4; ++k) EXPECT_TRUE(kernel_membership(tau_e1(), k, SpaceFunction{s, {0, 0, 0, 0}}));
}

TEST(KernelMembership, NullAtomsIgnored) {
  auto s = new_space({"a", "b", "c"}, rats({0, 1, 1}));
  auto tau = new_map(s, {{"a", "b"}, {"b", "c"}, {"c", "c"}});
  // f(b) != 0 but b is reached only from the null atom a
  EXPECT_TRUE(kernel_membership(tau, 1, indicator(s, {1})));
  EXPECT_FALSE(kernel_membership(tau, 1, indicator(s, {2})));
}

TEST(Bareiss, FallsBackOnOverflow) {
  // big * big overflows int64 in the first elimination step.
  Matrix<std::int64_t> m(3, 3);
  const std::int64_t big = std::int64_t(1) << 40;
  m(0, 0) = big; m(0, 1) = 1; m(0, 2) = 2;
  m(1, 0) = 3; m(1, 1) = big; m(1, 2) = 5;
  m(2, 0) = big + 3; m(2, 1) = big + 1; m(2, 2) = 7;  // row0 + row1
  EXPECT_EQ(rank(m), 2u);
  EXPECT_EQ(rank(m.cast<Rational>()), 2u);
}

TEST(ExactMatrix, NullspaceAndColumnSpace) {
  Matrix<Rational> m(2, 3);
  m(0, 0) = 1; m(0, 1) = 2; m(0, 2) = 3;
  m(1, 0) = 2; m(1, 1) = 4; m(1, 2) = Rational(13, 2);
  auto ns = nullspace_basis(m);
  ASSERT_EQ(ns.size(), 1u);
  for (auto v : m * ns[0]) EXPECT_EQ(v, 0);
  EXPECT_EQ(column_space_basis(m).size(), 2u);
}

class OperatorProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{99};
};

TEST_F(OperatorProperties, PowersAreRowSelections) {
  for (int trial = 0; trial < 100; ++trial) {
    auto tau = random_graph(rng, 1 + rng() % 10);
    auto m = matrix_of(tau).entries;
    auto power = Matrix<Rational>::identity(tau.size());
    for (std::size_t k = 0; k <= 5; ++k) {
      EXPECT_EQ(power, matrix_of(iterate(tau, k)).entries);
      power = power * m;
    }
  }
}

TEST_F(OperatorProperties, ChainAgreesWithFloatRankAndImages) {
  for (int trial = 0; trial < 300; ++trial) {
    auto tau = random_graph(rng, 1 + rng() % 12);
    oracle::RawMap raw(tau.assignment().begin(), tau.assignment().end());
    auto d = chain_dims(matrix_of(tau));
    for (std::size_t k = 0; k < d.rank.size(); ++k) {
      EXPECT_EQ(d.rank[k], oracle::float_rank(oracle::composition_matrix(raw, k)));
      EXPECT_EQ(d.nullity[k], tau.size() - image(tau, k).size());
      EXPECT_EQ(d.nullity[k] + d.rank[k], tau.size());
      if (k > 0) {
        EXPECT_GE(d.nullity[k], d.nullity[k - 1]);
        EXPECT_LE(d.rank[k], d.rank[k - 1]);
      }
    }
  }
}

TEST_F(OperatorProperties, AscentEqualsDescentEqualsTailHeight) {
  for (int trial = 0; trial < 1000; ++trial) {
    auto tau = random_graph(rng, 1 + rng() % 12);
    auto m = matrix_of(tau);
    oracle::RawMap raw(tau.assignment().begin(), tau.assignment().end());
    auto a = ascent_oracle(m);
    EXPECT_EQ(a, descent_oracle(m));
    EXPECT_EQ(a, std::max<std::size_t>(1, oracle::tail_height_by_walks(raw)));
    EXPECT_EQ(tail_height(tau), oracle::tail_height_by_walks(raw));
  }
}

TEST_F(OperatorProperties, ModularContraction) {
  const OrliczFunction phis[] = {make_orlicz(OrliczFamily::power, Rational(2)),
                                 make_orlicz(OrliczFamily::power_log, Rational(3, 2)),
                                 make_orlicz(OrliczFamily::exp_minus_linear)};
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + rng() % 8;
    std::vector<std::string> pts;
    std::vector<Rational> w;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(std::to_string(i));
      w.push_back(Rational(1 + rng() % 9, 1 + rng() % 3));
    }
    auto s = new_space(pts, w);
    std::vector<Atom> a(n);
    for (auto& y : a) y = rng() % n;
    Transformation tau(s, a);
    double k = to_double(boundedness_constant(tau));
    SpaceFunction f{s, std::vector<double>(n)};
    for (auto& v : f.value) v = u(rng);
    for (const auto& phi : phis) EXPECT_LE(modular(phi, compose(tau, f)), k * modular(phi, f) + 1e-9);
  }
}

TEST_F(OperatorProperties, RieszOnRandomGraphs) {
  for (int trial = 0; trial < 200; ++trial) {
    auto tau = random_graph(rng, 1 + rng() % 10);
    auto d = riesz_decomposition(matrix_of(tau));
    EXPECT_EQ(d.kernel_basis.size(), tau.size() - image(tau, d.p).size());
  }
}
