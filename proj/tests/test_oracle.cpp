#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "crprecis/oracle.hpp"
#include "stream_gen.hpp"

namespace crprecis {
namespace {

using crprecis::testing::Rng;

FrequencyOracle uniform_oracle(std::uint64_t n, std::uint64_t support) {
  FrequencyOracle o(n);
  for (item_t x = 0; x < support; ++x) o.apply({x, 1});
  return o;
}

TEST(Oracle, EmptyIsZero) {
  const FrequencyOracle o(16);
  EXPECT_EQ(o.exact_point(7), 0);
  EXPECT_EQ(o.mass(), 0);
  EXPECT_EQ(o.l1(), 0);
}

TEST(Oracle, PointAfterCancellation) {
  FrequencyOracle o(16);
  o.apply({3, 5});
  o.apply({3, -2});
  EXPECT_EQ(o.exact_point(3), 3);
}

TEST(Oracle, RejectsBadUpdates) {
  FrequencyOracle o(16);
  EXPECT_THROW(o.apply({16, 1}), std::out_of_range);
  EXPECT_THROW(o.apply({1, 0}), std::invalid_argument);
  o.apply({2, 1});
  EXPECT_THROW(o.apply({2, -2}), std::domain_error);
  EXPECT_EQ(o.exact_point(2), 1);
  FrequencyOracle g(16, Model::General);
  g.apply({2, -2});
  EXPECT_EQ(g.exact_point(2), -2);
  EXPECT_EQ(g.mass(), -2);
  EXPECT_EQ(g.l1(), 2);
}

TEST(Oracle, ReplayMatchesIncremental) {
  Rng rng(1);
  const auto stream = testing::general_stream(rng, 300, 2000);
  const auto o = FrequencyOracle::replay(stream, 300, Model::General);
  std::vector<count_t> direct(300, 0);
  for (const auto& u : stream) direct[u.item] += u.delta;
  EXPECT_EQ(std::vector<count_t>(o.frequencies().begin(), o.frequencies().end()), direct);
}

TEST(Oracle, RangeMatchesPrefixSums) {
  Rng rng(2);
  const auto o = FrequencyOracle::replay(testing::strict_stream(rng, 64, 500), 64);
  std::vector<count_t> prefix(65, 0);
  for (item_t x = 0; x < 64; ++x) prefix[x + 1] = prefix[x] + o.exact_point(x);
  for (item_t l = 0; l < 64; ++l) {
    for (item_t r = l; r < 64; ++r) ASSERT_EQ(o.exact_range(l, r), prefix[r + 1] - prefix[l]);
  }
  EXPECT_EQ(o.exact_range(0, 63), o.mass());
  EXPECT_EQ(o.exact_range(9, 9), o.exact_point(9));
  EXPECT_THROW(o.exact_range(5, 4), std::out_of_range);
  EXPECT_THROW(o.exact_range(0, 64), std::out_of_range);
}

TEST(Oracle, QuantileExamples) {
  EXPECT_EQ(uniform_oracle(16, 16).exact_quantiles(0.25), (std::vector<item_t>{12, 8, 4, 0}));
  EXPECT_EQ(uniform_oracle(16, 8).exact_quantiles(0.5).front(), 4u);
  FrequencyOracle point(16);
  point.apply({9, 40});
  EXPECT_EQ(point.exact_quantiles(0.25), (std::vector<item_t>(4, 9)));
}

TEST(Oracle, QuantilesMatchLinearScan) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto o = FrequencyOracle::replay(testing::strict_stream(rng, 200, 300), 200);
    if (o.mass() == 0) continue;
    for (double phi : {0.5, 0.25, 0.1}) {
      const auto got = o.exact_quantiles(phi);
      ASSERT_EQ(got.size(), quantile_count(phi));
      for (std::size_t j = 0; j < got.size(); ++j) {
        const double target = std::min((j + 1) * phi, 1.0) * o.mass();
        item_t expect = 0;
        for (item_t a = 0; a < 200; ++a) {
          if (o.suffix_sum(a) >= target - 1e-9 * o.mass()) expect = a;
        }
        ASSERT_EQ(got[j], expect);
      }
    }
  }
}

TEST(Oracle, QuantileCount) {
  EXPECT_EQ(quantile_count(0.5), 2u);
  EXPECT_EQ(quantile_count(0.25), 4u);
  EXPECT_EQ(quantile_count(0.3), 4u);
  EXPECT_EQ(quantile_count(1.0), 1u);
  EXPECT_EQ(quantile_count(0.1), 10u);
}

TEST(Oracle, InnerProduct) {
  FrequencyOracle r(16), s(16);
  r.apply({1, 3});
  s.apply({2, 4});
  EXPECT_EQ(exact_inner(r, s), 0);
  s.apply({1, 5});
  EXPECT_EQ(exact_inner(r, s), 15);
  EXPECT_THROW(exact_inner(r, FrequencyOracle(8)), std::invalid_argument);
}

TEST(Oracle, Entropy) {
  FrequencyOracle point(32);
  point.apply({4, 100});
  EXPECT_EQ(point.exact_entropy(), 0.0);
  EXPECT_NEAR(uniform_oracle(32, 32).exact_entropy(), 5.0, 1e-12);
  FrequencyOracle g(8, Model::General);
  g.apply({0, 2});
  g.apply({1, -2});
  EXPECT_NEAR(g.exact_entropy(), 1.0, 1e-12);

  Rng rng(4);
  const auto o = FrequencyOracle::replay(testing::zipf_stream(rng, 500, 5000, 1.2), 500);
  double h = 0;
  for (count_t f : o.frequencies()) {
    if (f > 0) h += static_cast<double>(f) / o.mass() * std::log2(static_cast<double>(o.mass()) / f);
  }
  EXPECT_NEAR(o.exact_entropy(), h, 1e-9);
}

TEST(Oracle, ResidualMass) {
  FrequencyOracle one(16);
  one.apply({3, 7});
  EXPECT_EQ(one.residual_mass(1), 0);
  EXPECT_EQ(one.residual_mass(5), 0);
  EXPECT_EQ(one.residual_mass(0), 7);

  Rng rng(5);
  const auto o = FrequencyOracle::replay(testing::skewed_stream(rng, 400, 4, 2000, 500), 400);
  std::vector<count_t> sorted(o.frequencies().begin(), o.frequencies().end());
  std::sort(sorted.rbegin(), sorted.rend());
  for (std::size_t s : {1u, 4u, 10u}) {
    count_t rest = 0;
    for (std::size_t i = s; i < sorted.size(); ++i) rest += sorted[i];
    EXPECT_EQ(o.residual_mass(s), rest);
  }
}

}  // namespace
}  // namespace crprecis
