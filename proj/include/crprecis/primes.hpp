#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace crprecis {

using item_t = std::uint64_t;
using count_t = std::int64_t;

/// Least r >= 0 with base^r >= n. Exact integer arithmetic, no floating logs.
std::uint32_t ceil_log(std::uint64_t base, std::uint64_t n);

/// Shape of a CR-precis: height k (smallest admissible table width),
/// width t (number of tables) and domain size N (items 0..N-1).
struct SketchParams {
  std::uint64_t k = 0;
  std::uint32_t t = 0;
  std::uint64_t n = 0;

  /// Throws std::invalid_argument unless k >= 2, t >= 1, N >= 2 and
  /// t >= ceil(log_k N).
  void validate() const;

  /// ceil(log_k N): the number of tables that must agree before two
  /// distinct items are forced to be equal.
  std::uint32_t log_k_n() const { return ceil_log(k, n); }

  bool operator==(const SketchParams&) const = default;
};

bool is_prime(std::uint64_t x);

/// The t smallest consecutive primes >= k, ascending.
std::vector<std::uint64_t> select_primes(std::uint64_t k, std::uint32_t t);

/// Total number of counters across all tables, i.e. the sum of the moduli.
std::uint64_t total_counters(std::span<const std::uint64_t> primes);

/// Explicit upper bound on total_counters(select_primes(k, t)) from Rosser's
/// estimate p_n <= n (ln n + log2 n). Requires k >= 12.
std::uint64_t space_bound(std::uint64_t k, std::uint32_t t);

}  // namespace crprecis
