#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "crprecis/primes.hpp"
#include "crprecis/ratio.hpp"

namespace crprecis {

/// Strict streams keep every exact frequency >= 0; general streams may go
/// negative. The sketch cannot detect a strict-model violation.
enum class Model : std::uint8_t { Strict = 0, General = 1 };

struct StreamUpdate {
  item_t item = 0;
  count_t delta = 0;

  bool operator==(const StreamUpdate&) const = default;
};

/// t counter tables of prime widths q_1 < ... < q_t (all >= k). Item i maps
/// to counter i mod q_j of table j.
///
/// Single writer; concurrent const access is safe only while no writer is
/// active.
class CrPrecis {
 public:
  explicit CrPrecis(SketchParams params, Model model = Model::Strict);

  const SketchParams& params() const { return params_; }
  Model model() const { return model_; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::size_t width() const { return primes_.size(); }
  std::span<const count_t> table(std::size_t j) const;
  /// Exact sum of all deltas applied; equals m in the strict model.
  count_t net_mass() const { return net_mass_; }
  std::uint64_t counter_count() const { return counters_.size(); }

  /// Adds delta to counter (item mod q_j) of every table. Throws
  /// std::out_of_range for item >= N and std::overflow_error on counter
  /// overflow (the sketch is left unchanged in both cases).
  void update(const StreamUpdate& u);
  void update(item_t item, count_t delta) { update(StreamUpdate{item, delta}); }

  /// Same as update(x, -amount).
  void deduct(item_t x, count_t amount);

  /// min_j T_j[x mod q_j], clamped below at zero. Strict sketches only.
  count_t point_estimate_strict(item_t x) const;

  /// (1/t) sum_j T_j[x mod q_j] as an exact fraction.
  Ratio point_estimate_general(item_t x) const;

  /// Counter-wise addition. Throws std::invalid_argument unless params,
  /// primes and model match.
  void merge(const CrPrecis& other);
  bool compatible(const CrPrecis& other) const;

  /// Little-endian layout: k, t, N, model as u64, then the t primes as u64,
  /// then every table's counters in order as i64.
  std::vector<std::uint8_t> serialize() const;
  static CrPrecis deserialize(std::span<const std::uint8_t> bytes);

  bool operator==(const CrPrecis& other) const;

 private:
  std::size_t slot(std::size_t j, item_t x) const { return offsets_[j] + x % primes_[j]; }
  void check_item(item_t x) const;

  SketchParams params_;
  Model model_;
  std::vector<std::uint64_t> primes_;
  std::vector<std::size_t> offsets_;
  std::vector<count_t> counters_;
  count_t net_mass_ = 0;
};

CrPrecis merge(CrPrecis a, const CrPrecis& b);

/// Indices j with x == y (mod q_j). For x != y in [0, N) the result has at
/// most ceil(log_k N) - 1 entries.
std::vector<std::size_t> collision_tables(item_t x, item_t y, std::span<const std::uint64_t> primes);

/// ((ceil(log_k N) - 1) / t) * (mass - |f|): the strict (min) and general
/// (mean) point-estimate error bound, where mass is m or L1 respectively.
Ratio point_error_bound(const SketchParams& params, count_t mass, count_t f);

}  // namespace crprecis
