#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "crprecis/entropy.hpp"
#include "crprecis/heavy.hpp"
#include "crprecis/oracle.hpp"
#include "stream_gen.hpp"

namespace crprecis {
namespace {

using crprecis::testing::Rng;

struct Built {
  CrPrecis sketch;
  FrequencyOracle oracle;
};

Built build(std::uint64_t n, const std::vector<StreamUpdate>& stream, const EntropyParams& p) {
  FrequencyOracle o = FrequencyOracle::replay(stream, n);
  CrPrecis sk(entropy_sketch_params(n, 2, o.mass(), p));
  for (const auto& u : stream) sk.update(u);
  return {std::move(sk), std::move(o)};
}

bool within_factor(double est, double exact, double factor) {
  if (exact == 0.0) return est == 0.0;
  return est <= factor * exact + 1e-12 && est * factor >= exact - 1e-12;
}

TEST(Entropy, ParamsValidation) {
  EXPECT_THROW((EntropyParams{1.0, 0.1}.validate()), std::invalid_argument);
  EXPECT_THROW((EntropyParams{2.0, 0.25}.validate()), std::invalid_argument);
  EXPECT_THROW((EntropyParams{2.0, 0.1, 0}.validate()), std::invalid_argument);
  EXPECT_EQ((EntropyParams{2.0, 0.1}.required_width(10000)), 500u);
  EXPECT_NEAR((EntropyParams{2.0, 0.1}.effective_factor()), 2.0 / 0.9, 1e-12);
}

TEST(Entropy, RejectsNarrowOrGeneralSketch) {
  const EntropyParams p;
  CrPrecis narrow(SketchParams{2, 10, 64});
  narrow.update(1, 100);
  EXPECT_THROW(estimate_entropy(narrow, p, 100), std::invalid_argument);
  CrPrecis general(entropy_sketch_params(64, 2, 100, p), Model::General);
  EXPECT_THROW(estimate_entropy(general, p, 100), std::invalid_argument);
  CrPrecis ok(entropy_sketch_params(64, 2, 100, p));
  EXPECT_THROW(estimate_entropy(ok, p, 0), std::invalid_argument);
}

TEST(Entropy, PointMassIsExactlyZero) {
  const EntropyParams p;
  const Built b = build(256, {{17, 5000}}, p);
  const EntropyEstimate e = estimate_entropy(b.sketch, p, 5000);
  EXPECT_EQ(e.total, 0.0);
  EXPECT_EQ(e.discovered, (std::vector<item_t>{17}));
}

TEST(Entropy, DeductionClearsDiscoveredItem) {
  // With a point mass every counter of the item is exactly f, so the residual pass sees nothing.
  const EntropyParams p;
  const Built b = build(64, {{5, 900}, {6, 1}}, p);
  const EntropyEstimate e = estimate_entropy(b.sketch, p, 901);
  EXPECT_EQ(e.discovered, (std::vector<item_t>{5}));
  EXPECT_GT(e.h_sparse, 0.0);
}

TEST(Entropy, UniformWithinFactor) {
  for (double alpha : {1.5, 2.0, 4.0}) {
    const EntropyParams p{alpha, 0.1};
    std::vector<StreamUpdate> s;
    for (item_t x = 0; x < 64; ++x) s.push_back({x, 1});
    const Built b = build(64, s, p);
    EXPECT_NEAR(b.oracle.exact_entropy(), 6.0, 1e-12);
    const double est = estimate_entropy(b.sketch, p, 64).total;
    EXPECT_TRUE(within_factor(est, 6.0, p.effective_factor())) << alpha << " " << est;
  }
}

TEST(Entropy, MixedStreamWithinFactor) {
  const EntropyParams p{2.0, 0.1};
  std::vector<StreamUpdate> s{{100, 576}};
  for (item_t x = 0; x < 64; ++x) s.push_back({x, 1});
  const Built b = build(256, s, p);
  const EntropyEstimate e = estimate_entropy(b.sketch, p, b.oracle.mass());
  EXPECT_TRUE(std::count(e.discovered.begin(), e.discovered.end(), 100));
  EXPECT_TRUE(within_factor(e.total, b.oracle.exact_entropy(), p.effective_factor()))
      << e.total << " vs " << b.oracle.exact_entropy();
}

TEST(Entropy, CandidateBackendsAgree) {
  Rng rng(41);
  const EntropyParams p{2.0, 0.1};
  const std::uint64_t n = 1024;
  const auto stream = testing::zipf_stream(rng, n, 3000, 1.5);
  const Built b = build(n, stream, p);
  const count_t m = b.oracle.mass();
  const auto full = estimate_entropy(b.sketch, p, m);

  MisraGries mg(p.c);
  for (const auto& u : stream) mg.update(u.item, u.delta);
  const auto from_mg = estimate_entropy(b.sketch, p, m, mg.candidates());

  const FrequentQuery q{p.c, 0.5};
  DyadicLevels dl = frequent_levels(n, q);
  for (const auto& u : stream) dl.update(u);
  const auto from_levels = estimate_entropy(b.sketch, p, m, frequent_items(dl, q).items);

  // Every item whose estimate reaches m/c is present in each candidate set.
  EXPECT_EQ(from_levels.discovered, full.discovered);
  EXPECT_DOUBLE_EQ(from_levels.total, full.total);
  for (item_t x : mg.candidates()) {
    if (static_cast<wide_t>(b.oracle.exact_point(x)) * p.c >= m) {
      EXPECT_TRUE(std::count(from_mg.discovered.begin(), from_mg.discovered.end(), x));
    }
  }
}

TEST(Entropy, RandomStreamsWithinFactor) {
  Rng rng(42);
  for (double alpha : {1.5, 2.0, 4.0}) {
    const EntropyParams p{alpha, 0.1};
    for (int trial = 0; trial < 8; ++trial) {
      const std::uint64_t n = 2048;
      const auto stream = testing::zipf_stream(rng, n, 2000, 0.8 + 0.2 * trial);
      const Built b = build(n, stream, p);
      const double est = estimate_entropy(b.sketch, p, b.oracle.mass()).total;
      EXPECT_TRUE(within_factor(est, b.oracle.exact_entropy(), p.effective_factor()))
          << "alpha=" << alpha << " trial=" << trial << " est=" << est << " exact=" << b.oracle.exact_entropy();
    }
  }
}

}  // namespace
}  // namespace crprecis
