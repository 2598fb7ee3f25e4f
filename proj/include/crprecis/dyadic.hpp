#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "crprecis/ratio.hpp"
#include "crprecis/sketch.hpp"

namespace crprecis {

/// [index * 2^level, (index + 1) * 2^level - 1]
struct DyadicInterval {
  unsigned level = 0;
  item_t index = 0;

  item_t lo() const { return index << level; }
  item_t hi() const { return ((index + 1) << level) - 1; }

  bool operator==(const DyadicInterval&) const = default;
};

/// Smallest power of two >= max(n, 2).
std::uint64_t padded_domain(std::uint64_t n);

/// Canonical decomposition of [l, r] into maximal dyadic intervals, left to
/// right. Throws std::out_of_range unless l <= r < n.
std::vector<DyadicInterval> decompose(item_t l, item_t r, std::uint64_t n);

/// Sketch parameters for level sketches built with a single height s':
/// k = s', t = s' * ceil(log_{s'} N_l).
SketchParams height_params(std::uint64_t s_prime, std::uint64_t level_domain);

/// One strict CR-precis per dyadic level. The level-l sketch sees item
/// floor(i / 2^l) over a domain of padded(N) / 2^l intervals.
class DyadicLevels {
 public:
  using LevelPolicy = std::function<SketchParams(unsigned level, std::uint64_t level_domain)>;

  /// Levels 0..top_level; top_level defaults to log2(padded N).
  DyadicLevels(std::uint64_t n, const LevelPolicy& policy, int top_level = -1);

  /// Every level uses height_params(s_prime, .).
  static DyadicLevels with_height(std::uint64_t n, std::uint64_t s_prime, int top_level = -1);

  /// Smallest common height whose summed worst-case error over any range is
  /// at most m / s.
  static DyadicLevels for_range_sum(std::uint64_t n, std::uint64_t s);

  /// Smallest common height whose summed worst-case error over any suffix is
  /// at most epsilon * m.
  static DyadicLevels for_quantiles(std::uint64_t n, double epsilon);

  std::uint64_t domain_size() const { return n_; }
  std::uint64_t padded_size() const { return padded_; }
  unsigned log_n() const { return log_n_; }
  unsigned top_level() const { return static_cast<unsigned>(levels_.size() - 1); }
  const CrPrecis& level(unsigned l) const { return levels_.at(l); }
  count_t net_mass() const { return levels_.front().net_mass(); }
  std::uint64_t counter_count() const;

  void update(const StreamUpdate& u);

  /// Strict estimate of an interval's mass from its owning level.
  count_t interval_estimate(const DyadicInterval& iv) const;

  /// (ceil(log_k N_l) - 1) / t_l for level l: the level's error per unit mass.
  Ratio level_error_rate(unsigned level) const;

  /// u64 N, u64 level count, then per level a u64 byte length followed by
  /// the level sketch's own serialization.
  std::vector<std::uint8_t> serialize() const;
  static DyadicLevels deserialize(std::span<const std::uint8_t> bytes);

  bool operator==(const DyadicLevels& other) const = default;

 private:
  DyadicLevels(std::uint64_t n, std::vector<CrPrecis> levels);

  std::uint64_t n_ = 0;
  std::uint64_t padded_ = 0;
  unsigned log_n_ = 0;
  std::vector<CrPrecis> levels_;
};

/// Sum of interval estimates over decompose(l, r). One-sided: never below
/// the exact range mass.
count_t range_sum(const DyadicLevels& dl, item_t l, item_t r);

/// Worst-case excess of range_sum(l, r) over the true range mass for total
/// mass m: the sum of the per-level rates of the decomposition, times m.
Ratio range_sum_bound(const DyadicLevels& dl, item_t l, item_t r, count_t m);

struct QuantileQuery {
  double phi = 0.5;
  double epsilon = 0.1;

  void validate() const;
};

/// a_1..a_ceil(1/phi) by bisection on the estimated suffix sum: a_j is the
/// largest index whose estimated suffix sum reaches j*phi*m. Throws
/// std::domain_error if the levels cannot guarantee suffix error <= eps*m,
/// or if the mass is not positive.
std::vector<item_t> quantiles(const DyadicLevels& dl, const QuantileQuery& q);

}  // namespace crprecis
