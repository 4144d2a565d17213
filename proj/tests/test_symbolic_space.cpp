#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "kcl/symbolic_space.hpp"

using namespace kcl;

namespace {
const auto shift = SymbolicMap::affine(1, 1);
const auto doubling = SymbolicMap::affine(2, 0);
const auto identity = SymbolicMap::affine(1, 0);
}  // namespace

TEST(SymbolicMap, Rules) {
  EXPECT_EQ(shift(5), 6u);
  EXPECT_EQ(doubling(5), 10u);
  auto t = SymbolicMap::table_then_affine({{1, 1}, {2, 1}}, 1, 0);
  EXPECT_EQ(t(2), 1u);
  EXPECT_EQ(t(7), 7u);
  EXPECT_KCL_ERROR(SymbolicMap::affine(0, 3), errc::invalid_parameter);
  EXPECT_KCL_ERROR(SymbolicMap::table_then_affine({{1, 0}}, 1, 0), errc::invalid_parameter);
  EXPECT_KCL_ERROR(SymbolicMap::affine(3, 0)(std::uint64_t(1) << 63), errc::overflow);
}

TEST(SymbolicMap, Grammar) {
  EXPECT_EQ(parse_symbolic("affine:1:1").spec(), "affine:1:1");
  auto t = parse_symbolic("table:{1->1, 2->1};affine:1:0");
  EXPECT_EQ(t.spec(), "table:{1->1,2->1};affine:1:0");
  EXPECT_EQ(t(2), 1u);
  EXPECT_KCL_ERROR(parse_symbolic("affine:1"), errc::parse_error);
  EXPECT_KCL_ERROR(parse_symbolic("shift"), errc::parse_error);
  EXPECT_KCL_ERROR(parse_symbolic("table:{1=>2};affine:1:0"), errc::parse_error);
  EXPECT_KCL_ERROR(parse_symbolic("affine:-1:0"), errc::parse_error);
  EXPECT_KCL_ERROR(parse_symbolic("affine:0:1"), errc::invalid_parameter);
}

TEST(SymbolicMap, Surjectivity) {
  EXPECT_TRUE(identity.is_surjective());
  EXPECT_FALSE(shift.is_surjective());
  EXPECT_FALSE(doubling.is_surjective());
  // swap 1 and 2, identity elsewhere
  EXPECT_TRUE(parse_symbolic("table:{1->2,2->1};affine:1:0").is_surjective());
  // 1 and 2 both go to 1; nothing reaches 2
  EXPECT_FALSE(parse_symbolic("table:{1->1,2->1};affine:1:0").is_surjective());
}

TEST(InRange, Examples) {
  EXPECT_FALSE(in_range(shift, 3, 3));
  EXPECT_TRUE(in_range(shift, 3, 4));
  for (std::uint64_t n = 1; n < 20; ++n) EXPECT_TRUE(in_range(doubling, 0, n));
  EXPECT_TRUE(in_range(doubling, 2, 12));
  EXPECT_FALSE(in_range(doubling, 2, 6));
}

TEST(InRange, MatchesForwardEnumeration) {
  const SymbolicMap maps[] = {shift, doubling, SymbolicMap::affine(3, 2),
                              parse_symbolic("table:{1->5,2->5,3->1};affine:2:1"),
                              parse_symbolic("table:{4->1};affine:1:0")};
  for (const auto& sigma : maps) {
    for (std::size_t k = 0; k <= 4; ++k) {
      // R(sigma^k) intersected with [1, 200], from images of [1, 200]
      std::set<std::uint64_t> forward;
      for (std::uint64_t n = 1; n <= 200; ++n) {
        std::uint64_t y = n;
        for (std::size_t i = 0; i < k; ++i) y = sigma(y);
        forward.insert(y);
      }
      for (std::uint64_t m = 1; m <= 60; ++m) EXPECT_EQ(in_range(sigma, k, m), forward.contains(m)) << sigma.spec() << " k=" << k << " m=" << m;
    }
  }
}

TEST(InRange, RangesAreNested) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto sigma = SymbolicMap::affine(1 + rng() % 3, rng() % 4);
    for (std::size_t k = 0; k < 6; ++k)
      for (std::uint64_t n = 1; n < 80; ++n)
        if (in_range(sigma, k + 1, n)) { EXPECT_TRUE(in_range(sigma, k, n)); }
  }
}

TEST(WitnessSequence, Shift) {
  auto w = witness_sequence(shift, 5);
  ASSERT_TRUE(w.found);
  std::vector<std::pair<std::size_t, std::uint64_t>> expected = {{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}};
  EXPECT_EQ(w.sequence.entries, expected);
  EXPECT_TRUE(verify_witnesses(shift, w.sequence));
}

TEST(WitnessSequence, IdentityHasNone) {
  auto w = witness_sequence(identity, 1);
  EXPECT_FALSE(w.found);
  EXPECT_EQ(w.not_found_at, 1u);
}

TEST(WitnessSequence, Doubling) {
  auto w = witness_sequence(doubling, 3);
  ASSERT_TRUE(w.found);
  EXPECT_TRUE(verify_witnesses(doubling, w.sequence));
  // the triple from hand computation is valid too
  WitnessSequence hand{{{1, 3}, {2, 6}, {3, 12}}, 3};
  EXPECT_TRUE(verify_witnesses(doubling, hand));
  WitnessSequence bad{{{1, 3}, {2, 3}}, 2};
  EXPECT_FALSE(verify_witnesses(doubling, bad));
  // geometric thinning needs the grown bound
  auto deep = witness_sequence(doubling, 12);
  ASSERT_TRUE(deep.found);
  EXPECT_TRUE(verify_witnesses(doubling, deep.sequence));
}

TEST(WitnessSequence, BoundOverride) {
  auto w = witness_sequence(shift, 5, 3);
  EXPECT_FALSE(w.found);
  EXPECT_EQ(w.not_found_at, 4u);
  EXPECT_EQ(w.sequence.entries.size(), 3u);
}

TEST(TruncatedMatrix, Shift) {
  auto m = truncated_matrix(shift, 4);
  EXPECT_EQ(m.map.assignment(), (std::vector<Atom>{1, 2, 3, 4, 4}));
  EXPECT_EQ(m.map.space()->name(4), "sink");
  EXPECT_EQ(chain_dims(m, 5).nullity, (std::vector<std::size_t>{0, 1, 2, 3, 4, 4}));
}

TEST(TruncatedMatrix, IdentityAndDoubling) {
  auto id = truncated_matrix(identity, 3);
  EXPECT_EQ(id.entries, Matrix<Rational>::identity(4));
  EXPECT_EQ(chain_dims(id).nullity, (std::vector<std::size_t>(5, 0)));
  auto d = truncated_matrix(doubling, 4);
  EXPECT_EQ(d.map.assignment(), (std::vector<Atom>{1, 3, 4, 4, 4}));
}

TEST(TruncatedMatrix, ShiftKernelGrowsByOne) {
  for (std::size_t n = 1; n <= 12; ++n) {
    auto dims = chain_dims(truncated_matrix(shift, n), n);
    for (std::size_t k = 0; k <= n; ++k) EXPECT_EQ(dims.nullity[k], k);
  }
}

TEST(TruncatedMatrix, BijectionShowsAscentOne) {
  for (std::size_t n = 1; n <= 10; ++n) EXPECT_EQ(ascent_oracle(truncated_matrix(identity, n)), 1u);
}
