#include "crprecis/sketch.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>

namespace crprecis {

CrPrecis::CrPrecis(SketchParams params, Model model)
    : params_(params), model_(model) {
  params_.validate();
  primes_ = select_primes(params_.k, params_.t);
  offsets_.reserve(primes_.size());
  std::size_t total = 0;
  for (std::uint64_t q : primes_) {
    offsets_.push_back(total);
    total += q;
  }
  counters_.assign(total, 0);
}

std::span<const count_t> CrPrecis::table(std::size_t j) const {
  if (j >= primes_.size()) throw std::out_of_range("table index out of range");
  return std::span<const count_t>(counters_).subspan(offsets_[j], primes_[j]);
}

void CrPrecis::check_item(item_t x) const {
  if (x >= params_.n) {
    throw std::out_of_range("item " + std::to_string(x) + " outside domain [0, " +
                            std::to_string(params_.n) + ")");
  }
}

void CrPrecis::update(const StreamUpdate& u) {
  check_item(u.item);
  count_t mass = 0;
  if (__builtin_add_overflow(net_mass_, u.delta, &mass)) throw std::overflow_error("net mass overflow");
  // Validate all touched counters first so a failing update is a no-op.
  for (std::size_t j = 0; j < primes_.size(); ++j) {
    count_t out = 0;
    if (__builtin_add_overflow(counters_[slot(j, u.item)], u.delta, &out)) {
      throw std::overflow_error("counter overflow in table " + std::to_string(j));
    }
  }
  for (std::size_t j = 0; j < primes_.size(); ++j) counters_[slot(j, u.item)] += u.delta;
  net_mass_ = mass;
}

void CrPrecis::deduct(item_t x, count_t amount) {
  check_item(x);
  if (amount == 0) return;
  if (amount == INT64_MIN) throw std::overflow_error("deduct amount overflow");
  update(StreamUpdate{x, -amount});
}

count_t CrPrecis::point_estimate_strict(item_t x) const {
  if (model_ != Model::Strict) throw std::logic_error("min-estimate requires a strict-model sketch");
  check_item(x);
  count_t best = counters_[slot(0, x)];
  for (std::size_t j = 1; j < primes_.size(); ++j) best = std::min(best, counters_[slot(j, x)]);
  return std::max<count_t>(best, 0);
}

Ratio CrPrecis::point_estimate_general(item_t x) const {
  check_item(x);
  wide_t sum = 0;
  for (std::size_t j = 0; j < primes_.size(); ++j) sum += counters_[slot(j, x)];
  return Ratio(sum, static_cast<wide_t>(primes_.size()));
}

bool CrPrecis::compatible(const CrPrecis& other) const {
  return params_ == other.params_ && model_ == other.model_ && primes_ == other.primes_;
}

void CrPrecis::merge(const CrPrecis& other) {
  if (!compatible(other)) throw std::invalid_argument("merge: sketch parameters differ");
  count_t mass = 0;
  if (__builtin_add_overflow(net_mass_, other.net_mass_, &mass)) throw std::overflow_error("net mass overflow");
  std::vector<count_t> summed(counters_.size());
  for (std::size_t i = 0; i < counters_.size(); ++i) {
    if (__builtin_add_overflow(counters_[i], other.counters_[i], &summed[i])) {
      throw std::overflow_error("counter overflow during merge");
    }
  }
  counters_ = std::move(summed);
  net_mass_ = mass;
}

bool CrPrecis::operator==(const CrPrecis& other) const {
  return compatible(other) && net_mass_ == other.net_mass_ && counters_ == other.counters_;
}

CrPrecis merge(CrPrecis a, const CrPrecis& b) {
  a.merge(b);
  return a;
}

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  if (pos > bytes.size() || bytes.size() - pos < 8) throw std::invalid_argument("sketch bytes truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
  pos += 8;
  return v;
}

}  // namespace

std::vector<std::uint8_t> CrPrecis::serialize() const {
  std::vector<std::uint8_t> out;
  out.reserve(8 * (4 + primes_.size() + counters_.size()));
  put_u64(out, params_.k);
  put_u64(out, params_.t);
  put_u64(out, params_.n);
  put_u64(out, static_cast<std::uint64_t>(model_));
  for (std::uint64_t q : primes_) put_u64(out, q);
  for (count_t c : counters_) put_u64(out, static_cast<std::uint64_t>(c));
  return out;
}

CrPrecis CrPrecis::deserialize(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  SketchParams params;
  params.k = get_u64(bytes, pos);
  const std::uint64_t t = get_u64(bytes, pos);
  if (t > UINT32_MAX) throw std::invalid_argument("sketch width out of range");
  params.t = static_cast<std::uint32_t>(t);
  params.n = get_u64(bytes, pos);
  const std::uint64_t model = get_u64(bytes, pos);
  if (model > 1) throw std::invalid_argument("unknown model tag");

  CrPrecis sk(params, static_cast<Model>(model));
  for (std::uint64_t q : sk.primes_) {
    if (get_u64(bytes, pos) != q) throw std::invalid_argument("prime list does not match (k, t)");
  }
  for (count_t& c : sk.counters_) c = static_cast<count_t>(get_u64(bytes, pos));
  if (pos != bytes.size()) throw std::invalid_argument("trailing bytes after sketch");

  auto first = sk.table(0);
  wide_t mass = 0;
  for (count_t c : first) mass += c;
  for (std::size_t j = 1; j < sk.width(); ++j) {
    wide_t other = 0;
    for (count_t c : sk.table(j)) other += c;
    if (other != mass) throw std::invalid_argument("tables disagree on total mass");
  }
  if (mass > INT64_MAX || mass < INT64_MIN) throw std::invalid_argument("mass overflow");
  sk.net_mass_ = static_cast<count_t>(mass);
  return sk;
}

std::vector<std::size_t> collision_tables(item_t x, item_t y, std::span<const std::uint64_t> primes) {
  if (x == y) throw std::invalid_argument("collision_tables: items must differ");
  const item_t diff = x > y ? x - y : y - x;
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < primes.size(); ++j) {
    if (diff % primes[j] == 0) out.push_back(j);
  }
  return out;
}

Ratio point_error_bound(const SketchParams& params, count_t mass, count_t f) {
  const wide_t collisions = static_cast<wide_t>(params.log_k_n()) - 1;
  const wide_t rest = static_cast<wide_t>(mass) - (f < 0 ? -static_cast<wide_t>(f) : f);
  return Ratio(collisions * rest, params.t);
}

}  // namespace crprecis
