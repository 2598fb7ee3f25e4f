#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crprecis/sketch.hpp"

namespace crprecis {

/// s levels of s distinct items each; an item at level l has frequency
/// floor(2^l / s), so every level outweighs all lower levels combined.
/// Levels whose frequency floors to zero carry no items.
struct LeveledInstance {
  std::uint64_t s = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  /// levels[l - 1] holds the items of level l, ascending.
  std::vector<std::vector<item_t>> levels;

  /// t_l = floor(2^l / s) for 1 <= l <= s, and 0 for l = 0.
  count_t level_frequency(unsigned l) const;
  /// m_l: total mass of levels 1..l.
  count_t mass_through(unsigned l) const;
  /// One update per item, in a seed-determined order.
  std::vector<StreamUpdate> stream() const;

  /// Whether s'(t_l - t_{l-1}) > 2 m_l holds at level l, with s' = 8s.
  bool separated(unsigned l) const;
  /// Lowest level L such that every non-empty level in [L, s] is separated
  /// (s + 1 if the top level itself is not).
  unsigned separation_level() const;
};

/// Seeded instance over [0, n). Requires 1 <= s <= 62 and 64 s^2 <= n.
LeveledInstance generate(std::uint64_t s, std::uint64_t n, std::uint64_t seed);

struct LevelFailure {
  unsigned level = 0;
  /// (item, estimate) of the level's true items and of what was returned.
  std::vector<std::pair<item_t, count_t>> expected;
  std::vector<std::pair<item_t, count_t>> returned;

  std::string describe() const;
};

struct Reconstruction {
  std::vector<std::vector<item_t>> levels;
  std::optional<LevelFailure> failure;

  bool exact() const { return !failure.has_value(); }
};

/// Peels levels top-down from a strict CR-precis with parameter s' = 8s
/// (k = s', t = s' ceil(log_{s'} N)): at level l keep every item whose
/// estimate reaches t_l - m_l / s', then deduct their exact frequency.
/// Stops at the first level whose recovered set differs from the instance.
Reconstruction reconstruct(const LeveledInstance& instance);

/// The sketch parameters reconstruct() uses for an instance.
SketchParams reconstruction_params(const LeveledInstance& instance);

}  // namespace crprecis
