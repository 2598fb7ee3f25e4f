#include "crprecis/adversarial.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "crprecis/dyadic.hpp"

namespace crprecis {

count_t LeveledInstance::level_frequency(unsigned l) const {
  if (l == 0 || l > s) return 0;
  return static_cast<count_t>((std::uint64_t{1} << l) / s);
}

count_t LeveledInstance::mass_through(unsigned l) const {
  count_t total = 0;
  for (unsigned i = 1; i <= l && i <= s; ++i) {
    total += static_cast<count_t>(levels[i - 1].size()) * level_frequency(i);
  }
  return total;
}

std::vector<StreamUpdate> LeveledInstance::stream() const {
  std::vector<StreamUpdate> out;
  for (unsigned l = 1; l <= levels.size(); ++l) {
    for (item_t x : levels[l - 1]) out.push_back({x, level_frequency(l)});
  }
  std::mt19937_64 rng(seed ^ 0x5bd1e995u);
  for (std::size_t i = out.size(); i > 1; --i) std::swap(out[i - 1], out[rng() % i]);
  return out;
}

bool LeveledInstance::separated(unsigned l) const {
  const auto s_prime = static_cast<wide_t>(8 * s);
  return s_prime * (level_frequency(l) - level_frequency(l - 1)) > 2 * static_cast<wide_t>(mass_through(l));
}

unsigned LeveledInstance::separation_level() const {
  auto level = static_cast<unsigned>(s) + 1;
  for (unsigned l = static_cast<unsigned>(s); l >= 1; --l) {
    if (level_frequency(l) == 0) break;
    if (!separated(l)) break;
    level = l;
  }
  return level;
}

LeveledInstance generate(std::uint64_t s, std::uint64_t n, std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("leveled instance needs s >= 1");
  if (s > 62) throw std::invalid_argument("leveled instance frequencies overflow for s > 62");
  // s <= sqrt(N) / 8  <=>  64 s^2 <= N
  if (64 * s * s > n) throw std::invalid_argument("leveled instance needs s <= sqrt(N) / 8");

  LeveledInstance inst;
  inst.s = s;
  inst.n = n;
  inst.seed = seed;
  inst.levels.resize(s);

  std::mt19937_64 rng(seed);
  std::vector<item_t> pool(n);
  std::iota(pool.begin(), pool.end(), item_t{0});
  std::size_t drawn = 0;
  for (unsigned l = 1; l <= s; ++l) {
    if (inst.level_frequency(l) == 0) continue;
    auto& level = inst.levels[l - 1];
    for (std::uint64_t i = 0; i < s; ++i) {
      const std::size_t pick = drawn + rng() % (n - drawn);
      std::swap(pool[drawn], pool[pick]);
      level.push_back(pool[drawn++]);
    }
    std::sort(level.begin(), level.end());
  }
  return inst;
}

std::string LevelFailure::describe() const {
  std::ostringstream os;
  os << "level " << level << ": expected";
  for (const auto& [x, est] : expected) os << ' ' << x << '(' << est << ')';
  os << "; returned";
  for (const auto& [x, est] : returned) os << ' ' << x << '(' << est << ')';
  return os.str();
}

SketchParams reconstruction_params(const LeveledInstance& instance) {
  return height_params(8 * instance.s, instance.n);
}

Reconstruction reconstruct(const LeveledInstance& instance) {
  if (instance.s < 1 || instance.levels.size() != instance.s) throw std::invalid_argument("malformed instance");
  CrPrecis sk(reconstruction_params(instance), Model::Strict);
  for (const auto& u : instance.stream()) sk.update(u);

  const auto s_prime = static_cast<wide_t>(8 * instance.s);
  Reconstruction out;
  out.levels.resize(instance.s);
  for (auto l = static_cast<unsigned>(instance.s); l >= 1; --l) {
    const count_t tl = instance.level_frequency(l);
    if (tl == 0) continue;
    const count_t m = sk.net_mass();
    // estimate >= t_l - m / s'
    const wide_t threshold = s_prime * tl - m;
    std::vector<item_t> found;
    for (item_t x = 0; x < instance.n; ++x) {
      if (s_prime * sk.point_estimate_strict(x) >= threshold) found.push_back(x);
    }
    if (found != instance.levels[l - 1]) {
      LevelFailure fail;
      fail.level = l;
      for (item_t x : instance.levels[l - 1]) fail.expected.emplace_back(x, sk.point_estimate_strict(x));
      for (item_t x : found) fail.returned.emplace_back(x, sk.point_estimate_strict(x));
      out.failure = std::move(fail);
      return out;
    }
    for (item_t x : found) sk.deduct(x, tl);
    out.levels[l - 1] = std::move(found);
  }
  return out;
}

}  // namespace crprecis
