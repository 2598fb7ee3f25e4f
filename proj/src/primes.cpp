#include "crprecis/primes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace crprecis {

std::uint32_t ceil_log(std::uint64_t base, std::uint64_t n) {
  if (base < 2) throw std::invalid_argument("ceil_log: base must be >= 2");
  std::uint32_t r = 0;
  unsigned __int128 power = 1;
  while (power < n) {
    power *= base;
    ++r;
  }
  return r;
}

void SketchParams::validate() const {
  if (k < 2) throw std::invalid_argument("sketch height k must be >= 2");
  if (t < 1) throw std::invalid_argument("sketch width t must be >= 1");
  if (n < 2) throw std::invalid_argument("domain size N must be >= 2");
  if (t < log_k_n()) {
    throw std::invalid_argument("sketch width t=" + std::to_string(t) +
                                " is below ceil(log_k N)=" + std::to_string(log_k_n()));
  }
}

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  if (x < 4) return true;
  if (x % 2 == 0 || x % 3 == 0) return false;
  for (std::uint64_t d = 5; d <= x / d; d += 6) {
    if (x % d == 0 || x % (d + 2) == 0) return false;
  }
  return true;
}

namespace {

// Primes in [lo, hi] by a segmented sieve of Eratosthenes.
std::vector<std::uint64_t> sieve_range(std::uint64_t lo, std::uint64_t hi) {
  lo = std::max<std::uint64_t>(lo, 2);
  std::vector<std::uint64_t> out;
  if (lo > hi) return out;

  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi))) + 1;
  std::vector<bool> small(root + 1, true);
  std::vector<std::uint64_t> base;
  for (std::uint64_t p = 2; p <= root; ++p) {
    if (!small[p]) continue;
    base.push_back(p);
    for (std::uint64_t q = p * p; q <= root; q += p) small[q] = false;
  }

  std::vector<bool> composite(hi - lo + 1, false);
  for (std::uint64_t p : base) {
    if (p * p > hi) break;
    std::uint64_t first = std::max(p * p, (lo + p - 1) / p * p);
    for (std::uint64_t q = first; q <= hi; q += p) composite[q - lo] = true;
  }
  for (std::uint64_t v = lo; v <= hi; ++v) {
    if (!composite[v - lo]) out.push_back(v);
  }
  return out;
}

// Rosser: p_n <= n (ln n + ln ln n) for n >= 6; pi(x) < 1.25506 x / ln x.
std::uint64_t rosser_limit(std::uint64_t k, std::uint32_t t) {
  const double kd = static_cast<double>(std::max<std::uint64_t>(k, 3));
  const double below = std::ceil(1.25506 * kd / std::log(kd));
  const double n = std::max(6.0, below + t);
  return static_cast<std::uint64_t>(std::ceil(n * (std::log(n) + std::log(std::log(n))))) + 1;
}

}  // namespace

std::vector<std::uint64_t> select_primes(std::uint64_t k, std::uint32_t t) {
  if (k < 2) throw std::invalid_argument("select_primes: k must be >= 2");
  if (t < 1) throw std::invalid_argument("select_primes: t must be >= 1");

  std::uint64_t hi = std::max(rosser_limit(k, t), k + 16);
  while (true) {
    auto found = sieve_range(k, hi);
    if (found.size() >= t) {
      found.resize(t);
      return found;
    }
    hi = hi + (hi - k) + 16;
  }
}

std::uint64_t total_counters(std::span<const std::uint64_t> primes) {
  return std::accumulate(primes.begin(), primes.end(), std::uint64_t{0});
}

std::uint64_t space_bound(std::uint64_t k, std::uint32_t t) {
  if (k < 12) throw std::invalid_argument("space_bound: requires k >= 12");
  if (t < 1) throw std::invalid_argument("space_bound: t must be >= 1");
  const double kd = static_cast<double>(k);
  const auto a = static_cast<std::uint64_t>(std::ceil(kd / std::log(kd))) + t;
  long double sum = 0;
  for (std::uint64_t n = a; n <= a + t; ++n) {
    const long double nd = static_cast<long double>(n);
    sum += nd * (std::log(nd) + std::log2(nd));
  }
  return static_cast<std::uint64_t>(std::ceil(sum));
}

}  // namespace crprecis
