#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crprecis/heavy.hpp"
#include "crprecis/oracle.hpp"
#include "stream_gen.hpp"

namespace crprecis {
namespace {

using crprecis::testing::Rng;
using Edges = std::vector<std::pair<std::string, std::string>>;

std::vector<item_t> frequent_of(std::uint64_t n, const FrequentQuery& q, const std::vector<StreamUpdate>& stream) {
  DyadicLevels dl = frequent_levels(n, q);
  for (const auto& u : stream) dl.update(u);
  return frequent_items(dl, q).items;
}

TEST(Frequent, QueryParameters) {
  const FrequentQuery q{8, 0.5};
  EXPECT_EQ(q.estimator_parameter(), 16u);
  EXPECT_EQ(q.candidate_bound(), 16u);
  EXPECT_EQ((FrequentQuery{16, 0.25}.estimator_parameter()), 64u);
  EXPECT_EQ((FrequentQuery{16, 0.25}.candidate_bound()), 21u);
  EXPECT_THROW((FrequentQuery{0, 0.5}.validate()), std::invalid_argument);
  EXPECT_THROW((FrequentQuery{4, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((FrequentQuery{4, 0.0}.validate()), std::invalid_argument);
}

TEST(Frequent, SingleDominantItem) {
  std::vector<StreamUpdate> stream{{5, 60}};
  for (item_t x = 10; x < 50; ++x) stream.push_back({x, 1});
  EXPECT_EQ(frequent_of(64, {2, 0.5}, stream), (std::vector<item_t>{5}));
}

TEST(Frequent, EmptyStream) {
  EXPECT_TRUE(frequent_of(64, {4, 0.5}, {}).empty());
}

TEST(Frequent, UniformHasNoFrequentItems) {
  std::vector<StreamUpdate> stream;
  for (item_t x = 0; x < 64; ++x) stream.push_back({x, 1});
  EXPECT_TRUE(frequent_of(64, {8, 0.5}, stream).empty());
}

TEST(Frequent, RejectsUnderProvisionedLevels) {
  DyadicLevels coarse = DyadicLevels::with_height(1024, 2);
  coarse.update({3, 1});
  EXPECT_THROW(frequent_items(coarse, {8, 0.5}), std::domain_error);
}

TEST(Frequent, NoFalseNegativesOrPositives) {
  Rng rng(21);
  for (const FrequentQuery q : {FrequentQuery{8, 0.5}, FrequentQuery{16, 0.25}}) {
    for (int trial = 0; trial < 25; ++trial) {
      const std::uint64_t n = testing::uniform(rng, 64, 1u << 13);
      const auto stream = testing::skewed_stream(rng, n, q.s / 2, 4000, 3000);
      DyadicLevels dl = frequent_levels(n, q);
      for (const auto& u : stream) dl.update(u);
      const auto o = FrequencyOracle::replay(stream, n);
      const FrequentResult res = frequent_items(dl, q);
      const std::set<item_t> found(res.items.begin(), res.items.end());
      const count_t m = o.mass();
      for (item_t x = 0; x < n; ++x) {
        const double f = static_cast<double>(o.exact_point(x));
        if (f * q.s >= m) ASSERT_TRUE(found.count(x)) << "missed " << x;
        if (found.count(x)) ASSERT_GE(f, (1 - q.epsilon) * m / q.s - 1e-9) << "false positive " << x;
      }
      for (auto c : res.survivors) ASSERT_LE(c, q.candidate_bound());
    }
  }
}

TEST(MisraGries, KeepsHeavyItems) {
  MisraGries mg(3);
  for (int i = 0; i < 10; ++i) mg.update(1, 1);
  for (item_t x = 10; x < 20; ++x) mg.update(x, 1);
  mg.update(2, 8);
  const auto c = mg.candidates();
  EXPECT_TRUE(std::binary_search(c.begin(), c.end(), 1));
  EXPECT_TRUE(std::binary_search(c.begin(), c.end(), 2));
  EXPECT_LE(c.size(), 3u);
  EXPECT_THROW(mg.update(1, 0), std::invalid_argument);
  EXPECT_THROW(MisraGries(0), std::invalid_argument);
}

TEST(MisraGries, GuaranteeOnRandomStreams) {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = testing::uniform(rng, 1, 20);
    MisraGries mg(k);
    FrequencyOracle o(500);
    for (const auto& u : testing::zipf_stream(rng, 500, 3000, 1.3)) {
      mg.update(u.item, u.delta);
      o.apply(u);
    }
    const auto c = mg.candidates();
    EXPECT_LE(c.size(), k);
    for (item_t x = 0; x < 500; ++x) {
      if (static_cast<std::size_t>(o.exact_point(x)) * (k + 1) > static_cast<std::size_t>(o.mass())) {
        EXPECT_TRUE(std::binary_search(c.begin(), c.end(), x));
      }
    }
  }
}

Hierarchy two_level() {
  Edges e{{"A", "root"}, {"B", "root"}};
  for (int i = 0; i < 4; ++i) e.emplace_back(std::to_string(i), "A");
  for (int i = 4; i < 8; ++i) e.emplace_back(std::to_string(i), "B");
  return Hierarchy::from_edges(e, 8);
}

std::vector<std::string> hhh_names(const std::vector<StreamUpdate>& stream, std::uint64_t s) {
  const FrequentQuery q{s, 0.5};
  HierarchySketch sk = HierarchySketch::for_hhh(two_level(), q);
  for (const auto& u : stream) sk.update(u);
  std::vector<std::string> out;
  for (const auto& e : hhh(sk, q).nodes) out.push_back(sk.hierarchy().name(e.node));
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Hierarchy, Structure) {
  const Hierarchy h = two_level();
  EXPECT_EQ(h.height(), 2u);
  EXPECT_EQ(h.node_count(), 11u);
  EXPECT_EQ(h.name(h.root()), "root");
  EXPECT_EQ(h.name(*h.parent(h.leaf(5))), "B");
  EXPECT_FALSE(h.parent(h.root()));
  EXPECT_EQ(h.depth(h.leaf(0)), 2u);
  EXPECT_TRUE(h.is_ancestor(h.root(), h.leaf(3)));
  EXPECT_FALSE(h.is_ancestor(h.leaf(3), h.leaf(3)));
  EXPECT_TRUE(h.is_leaf(h.leaf(7)));
  EXPECT_EQ(h.nodes_at_depth(1).size(), 2u);
}

TEST(Hierarchy, UnevenDepths) {
  // Leaf 2 hangs directly under the root.
  const Edges e{{"0", "A"}, {"1", "A"}, {"A", "R"}, {"2", "R"}};
  const Hierarchy h = Hierarchy::from_edges(e, 3);
  EXPECT_EQ(h.depth(h.leaf(2)), 1u);
  EXPECT_EQ(h.depth(h.leaf(0)), 2u);
  const FrequentQuery q{2, 0.5};
  HierarchySketch sk = HierarchySketch::for_hhh(h, q);
  sk.update({2, 10});
  sk.update({0, 1});
  EXPECT_EQ(sk.node_estimate(sk.hierarchy().leaf(2)), 10);
  EXPECT_EQ(sk.node_estimate(sk.hierarchy().root()), 11);
  EXPECT_EQ(sk.level(2).net_mass(), 1);
}

TEST(Hierarchy, RejectsMalformed) {
  EXPECT_THROW(Hierarchy::from_edges(Edges{{"0", "R"}, {"1", "S"}}, 2), std::invalid_argument);  // two roots
  EXPECT_THROW(Hierarchy::from_edges(Edges{{"0", "R"}, {"0", "S"}, {"S", "R"}, {"1", "R"}}, 2),
               std::invalid_argument);                                                        // two parents
  EXPECT_THROW(Hierarchy::from_edges(Edges{{"0", "R"}}, 2), std::invalid_argument);           // item 1 missing
  EXPECT_THROW(Hierarchy::from_edges(Edges{{"0", "R"}, {"x", "R"}}, 1), std::invalid_argument);  // bad leaf
  EXPECT_THROW(Hierarchy::from_edges(Edges{{"0", "1"}, {"1", "R"}}, 2), std::invalid_argument);  // item internal
  EXPECT_THROW(Hierarchy::from_edges(Edges{{"A", "B"}, {"B", "A"}, {"0", "R"}}, 1), std::invalid_argument);
  EXPECT_THROW(Hierarchy::from_edges(Edges{{"R", "R"}}, 1), std::invalid_argument);
}

TEST(Hierarchy, ParseEdgeFile) {
  std::istringstream in("# leaves\n0 A\n1 A\n\n2 B\n3 B\nA R\nB R\n");
  const Hierarchy h = Hierarchy::parse(in, 4);
  EXPECT_EQ(h.height(), 2u);
  std::istringstream bad("0 A extra\n");
  EXPECT_THROW(Hierarchy::parse(bad, 1), std::invalid_argument);
}

TEST(Hierarchy, Regular) {
  const Hierarchy h = Hierarchy::regular(8, 2);
  EXPECT_EQ(h.height(), 3u);
  EXPECT_EQ(h.node_count(), 15u);
  EXPECT_EQ(h.name(h.root()), "d3:0");
  EXPECT_EQ(h.name(*h.parent(h.leaf(5))), "d1:4");
  EXPECT_EQ(Hierarchy::regular(10, 4).height(), 2u);
}

TEST(Hhh, LeafAndNotParent) {
  std::vector<StreamUpdate> s{{3, 50}, {0, 10}, {1, 10}, {2, 10}, {4, 10}, {5, 10}};
  const auto names = hhh_names(s, 2);
  EXPECT_TRUE(std::count(names.begin(), names.end(), "3"));
  EXPECT_FALSE(std::count(names.begin(), names.end(), "A"));
}

TEST(Hhh, PointMassIsOnlyTheLeaf) {
  EXPECT_EQ(hhh_names({{6, 42}}, 2), (std::vector<std::string>{"6"}));
}

TEST(Hhh, SiblingsAggregateIntoParent) {
  std::vector<StreamUpdate> s;
  for (item_t x = 0; x < 4; ++x) s.push_back({x, 15});
  for (item_t x = 4; x < 8; ++x) s.push_back({x, 10});
  EXPECT_EQ(hhh_names(s, 2), (std::vector<std::string>{"A"}));
}

TEST(Hhh, EmptyStream) { EXPECT_TRUE(hhh_names({}, 2).empty()); }

TEST(Hhh, RejectsUnderProvisioned) {
  HierarchySketch sk(Hierarchy::regular(64, 2), 2);
  sk.update({1, 1});
  EXPECT_THROW(hhh(sk, {4, 0.5}), std::domain_error);
}

TEST(Hhh, DiscountedMassesAgainstOracle) {
  Rng rng(23);
  const FrequentQuery q{4, 0.5};
  for (int trial = 0; trial < 10; ++trial) {
    const std::uint64_t n = 256;
    HierarchySketch sk = HierarchySketch::for_hhh(Hierarchy::regular(n, 4), q);
    const auto stream = testing::skewed_stream(rng, n, 3, 1500, 1500);
    for (const auto& u : stream) sk.update(u);
    const auto o = FrequencyOracle::replay(stream, n);
    const Hierarchy& h = sk.hierarchy();
    std::vector<count_t> exact(h.node_count(), 0);
    for (item_t x = 0; x < n; ++x) {
      for (std::optional<node_id> v = h.leaf(x); v; v = h.parent(*v)) exact[*v] += o.exact_point(x);
    }
    const auto report = hhh(sk, q);
    for (const auto& e : report.nodes) {
      ASSERT_GE(e.estimate, exact[e.node]);
      ASSERT_GE(static_cast<wide_t>(e.discounted) * q.s, o.mass());
    }
    // Every leaf at or above m/s is declared.
    for (item_t x = 0; x < n; ++x) {
      if (static_cast<wide_t>(o.exact_point(x)) * q.s < o.mass()) continue;
      const bool hit = std::any_of(report.nodes.begin(), report.nodes.end(),
                                   [&](const HhhEntry& e) { return e.node == h.leaf(x); });
      ASSERT_TRUE(hit) << x;
    }
  }
}

}  // namespace
}  // namespace crprecis
