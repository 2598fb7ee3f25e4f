#include "crprecis/dyadic.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crprecis {

std::uint64_t padded_domain(std::uint64_t n) { return std::bit_ceil(std::max<std::uint64_t>(n, 2)); }

std::vector<DyadicInterval> decompose(item_t l, item_t r, std::uint64_t n) {
  if (l > r || r >= n) {
    throw std::out_of_range("decompose: need l <= r < N, got [" + std::to_string(l) + ", " +
                            std::to_string(r) + "] with N=" + std::to_string(n));
  }
  std::vector<DyadicInterval> out;
  item_t lo = l;
  while (true) {
    unsigned level = lo == 0 ? 63 : static_cast<unsigned>(std::countr_zero(lo));
    while (level > 0 && (level >= 64 || (r - lo) < ((std::uint64_t{1} << level) - 1))) --level;
    out.push_back({level, lo >> level});
    const item_t hi = out.back().hi();
    if (hi >= r) break;
    lo = hi + 1;
  }
  return out;
}

SketchParams height_params(std::uint64_t s_prime, std::uint64_t level_domain) {
  SketchParams p;
  p.k = std::max<std::uint64_t>(s_prime, 2);
  p.n = std::max<std::uint64_t>(level_domain, 2);
  p.t = static_cast<std::uint32_t>(p.k * ceil_log(p.k, p.n));
  return p;
}

namespace {

// sum over levels of weight * (c_l - 1) / t_l for a common height.
double summed_rate(std::uint64_t height, std::uint64_t padded, unsigned top, double weight) {
  double total = 0.0;
  for (unsigned l = 0; l <= top; ++l) {
    const SketchParams p = height_params(height, padded >> l);
    total += weight * static_cast<double>(p.log_k_n() - 1) / static_cast<double>(p.t);
  }
  return total;
}

std::uint64_t min_height(std::uint64_t padded, unsigned top, double weight, double budget) {
  if (!(budget > 0.0)) throw std::invalid_argument("error budget must be positive");
  std::uint64_t hi = 2;
  while (summed_rate(hi, padded, top, weight) > budget) hi *= 2;
  std::uint64_t lo = hi / 2;  // lo fails (or is below 2), hi passes
  if (lo < 2) return hi;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (summed_rate(mid, padded, top, weight) > budget) lo = mid;
    else hi = mid;
  }
  return hi;
}

}  // namespace

DyadicLevels::DyadicLevels(std::uint64_t n, const LevelPolicy& policy, int top_level)
    : n_(n), padded_(padded_domain(n)), log_n_(static_cast<unsigned>(std::countr_zero(padded_domain(n)))) {
  if (n < 1) throw std::invalid_argument("dyadic domain must be non-empty");
  const unsigned top = top_level < 0 ? log_n_ : static_cast<unsigned>(top_level);
  if (top > log_n_) throw std::invalid_argument("top level exceeds log2 N");
  levels_.reserve(top + 1);
  for (unsigned l = 0; l <= top; ++l) {
    const std::uint64_t domain = padded_ >> l;
    SketchParams p = policy(l, domain);
    if (p.n < domain) throw std::invalid_argument("level policy shrinks the level domain");
    levels_.emplace_back(p, Model::Strict);
  }
}

DyadicLevels::DyadicLevels(std::uint64_t n, std::vector<CrPrecis> levels)
    : n_(n), padded_(padded_domain(n)), log_n_(static_cast<unsigned>(std::countr_zero(padded_domain(n)))),
      levels_(std::move(levels)) {}

DyadicLevels DyadicLevels::with_height(std::uint64_t n, std::uint64_t s_prime, int top_level) {
  return DyadicLevels(
      n, [s_prime](unsigned, std::uint64_t domain) { return height_params(s_prime, domain); }, top_level);
}

DyadicLevels DyadicLevels::for_range_sum(std::uint64_t n, std::uint64_t s) {
  if (s < 1) throw std::invalid_argument("range-sum parameter s must be >= 1");
  const std::uint64_t padded = padded_domain(n);
  const auto top = static_cast<unsigned>(std::countr_zero(padded));
  // Up to two decomposition intervals per level.
  return with_height(n, min_height(padded, top, 2.0, 1.0 / static_cast<double>(s)));
}

DyadicLevels DyadicLevels::for_quantiles(std::uint64_t n, double epsilon) {
  if (!(epsilon > 0.0) || epsilon >= 1.0) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const std::uint64_t padded = padded_domain(n);
  const auto top = static_cast<unsigned>(std::countr_zero(padded));
  // A suffix uses at most one interval per level.
  return with_height(n, min_height(padded, top, 1.0, epsilon));
}

std::uint64_t DyadicLevels::counter_count() const {
  std::uint64_t total = 0;
  for (const auto& sk : levels_) total += sk.counter_count();
  return total;
}

void DyadicLevels::update(const StreamUpdate& u) {
  if (u.item >= n_) throw std::out_of_range("item " + std::to_string(u.item) + " outside domain");
  unsigned applied = 0;
  try {
    for (; applied < levels_.size(); ++applied) levels_[applied].update(u.item >> applied, u.delta);
  } catch (...) {
    // Undo the levels already touched; restoring old values cannot overflow.
    for (unsigned l = 0; l < applied; ++l) levels_[l].update(u.item >> l, -u.delta);
    throw;
  }
}

count_t DyadicLevels::interval_estimate(const DyadicInterval& iv) const {
  if (iv.level >= levels_.size()) {
    throw std::out_of_range("no sketch kept for dyadic level " + std::to_string(iv.level));
  }
  return levels_[iv.level].point_estimate_strict(iv.index);
}

Ratio DyadicLevels::level_error_rate(unsigned level) const {
  const SketchParams& p = levels_.at(level).params();
  return Ratio(static_cast<wide_t>(p.log_k_n()) - 1, p.t);
}

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  if (pos > bytes.size() || bytes.size() - pos < 8) throw std::invalid_argument("dyadic bytes truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
  pos += 8;
  return v;
}

}  // namespace

std::vector<std::uint8_t> DyadicLevels::serialize() const {
  std::vector<std::uint8_t> out;
  put_u64(out, n_);
  put_u64(out, levels_.size());
  for (const auto& sk : levels_) {
    auto bytes = sk.serialize();
    put_u64(out, bytes.size());
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  return out;
}

DyadicLevels DyadicLevels::deserialize(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  const std::uint64_t n = get_u64(bytes, pos);
  const std::uint64_t count = get_u64(bytes, pos);
  const std::uint64_t padded = padded_domain(n);
  if (n < 1 || count < 1 || count > static_cast<std::uint64_t>(std::countr_zero(padded)) + 1) {
    throw std::invalid_argument("bad dyadic header");
  }
  std::vector<CrPrecis> levels;
  for (std::uint64_t l = 0; l < count; ++l) {
    const std::uint64_t len = get_u64(bytes, pos);
    if (len > bytes.size() - pos) throw std::invalid_argument("dyadic bytes truncated");
    levels.push_back(CrPrecis::deserialize(bytes.subspan(pos, len)));
    pos += len;
    if (levels.back().params().n < (padded >> l)) throw std::invalid_argument("level domain too small");
    if (levels.back().model() != Model::Strict) throw std::invalid_argument("level sketches must be strict");
  }
  if (pos != bytes.size()) throw std::invalid_argument("trailing bytes after dyadic levels");
  return DyadicLevels(n, std::move(levels));
}

count_t range_sum(const DyadicLevels& dl, item_t l, item_t r) {
  count_t total = 0;
  for (const auto& iv : decompose(l, r, dl.domain_size())) total += dl.interval_estimate(iv);
  return total;
}

Ratio range_sum_bound(const DyadicLevels& dl, item_t l, item_t r, count_t m) {
  Ratio rate(0);
  for (const auto& iv : decompose(l, r, dl.domain_size())) rate = rate + dl.level_error_rate(iv.level);
  return rate * Ratio(m);
}

void QuantileQuery::validate() const {
  if (!(phi > 0.0) || phi > 1.0) throw std::invalid_argument("phi must lie in (0, 1]");
  if (!(epsilon > 0.0) || epsilon >= phi) throw std::invalid_argument("epsilon must lie in (0, phi)");
}

std::vector<item_t> quantiles(const DyadicLevels& dl, const QuantileQuery& q) {
  q.validate();
  const count_t m = dl.net_mass();
  if (m <= 0) throw std::domain_error("quantiles need positive mass");
  if (dl.top_level() != dl.log_n()) throw std::domain_error("quantiles need every dyadic level");

  Ratio worst(0);
  for (unsigned l = 0; l <= dl.top_level(); ++l) worst = worst + dl.level_error_rate(l);
  if (worst.value() > q.epsilon) {
    throw std::domain_error("levels are under-provisioned: worst suffix error rate " +
                            std::to_string(worst.value()) + " exceeds epsilon " + std::to_string(q.epsilon));
  }

  const std::uint64_t n = dl.domain_size();
  const double mass = static_cast<double>(m);
  const std::size_t count = static_cast<std::size_t>(std::ceil(1.0 / q.phi - 1e-9));
  std::vector<item_t> out;
  out.reserve(count);
  for (std::size_t j = 1; j <= count; ++j) {
    const double target = std::min(static_cast<double>(j) * q.phi * mass, mass);
    // Invariant: estimate(lo) >= target (lo = 0 holds exactly), estimate(hi) < target.
    std::uint64_t lo = 0;
    std::uint64_t hi = n;
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (static_cast<double>(range_sum(dl, mid, n - 1)) >= target - 1e-9 * mass) lo = mid;
      else hi = mid;
    }
    out.push_back(lo);
  }
  return out;
}

}  // namespace crprecis
