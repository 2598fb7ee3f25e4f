#include "crprecis/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace crprecis {

FrequencyOracle::FrequencyOracle(std::uint64_t n, Model model) : freq_(n, 0), model_(model) {
  if (n < 1) throw std::invalid_argument("oracle domain must be non-empty");
}

FrequencyOracle FrequencyOracle::replay(std::span<const StreamUpdate> updates, std::uint64_t n, Model model) {
  FrequencyOracle o(n, model);
  for (const auto& u : updates) o.apply(u);
  return o;
}

void FrequencyOracle::apply(const StreamUpdate& u) {
  if (u.item >= freq_.size()) throw std::out_of_range("item " + std::to_string(u.item) + " outside domain");
  if (u.delta == 0) throw std::invalid_argument("zero delta");
  count_t next = 0;
  count_t mass = 0;
  if (__builtin_add_overflow(freq_[u.item], u.delta, &next) || __builtin_add_overflow(mass_, u.delta, &mass)) {
    throw std::overflow_error("frequency overflow");
  }
  if (model_ == Model::Strict && next < 0) {
    throw std::domain_error("strict stream drives item " + std::to_string(u.item) + " negative");
  }
  freq_[u.item] = next;
  mass_ = mass;
}

count_t FrequencyOracle::exact_point(item_t x) const {
  if (x >= freq_.size()) throw std::out_of_range("item outside domain");
  return freq_[x];
}

count_t FrequencyOracle::exact_range(item_t l, item_t r) const {
  if (l > r || r >= freq_.size()) throw std::out_of_range("invalid range");
  return std::accumulate(freq_.begin() + static_cast<std::ptrdiff_t>(l),
                         freq_.begin() + static_cast<std::ptrdiff_t>(r) + 1, count_t{0});
}

count_t FrequencyOracle::suffix_sum(item_t a) const {
  if (a >= freq_.size()) return 0;
  return exact_range(a, freq_.size() - 1);
}

count_t FrequencyOracle::l1() const {
  count_t sum = 0;
  for (count_t f : freq_) sum += f < 0 ? -f : f;
  return sum;
}

std::size_t quantile_count(double phi) {
  if (!(phi > 0.0) || phi > 1.0) throw std::invalid_argument("phi must lie in (0, 1]");
  return static_cast<std::size_t>(std::ceil(1.0 / phi - 1e-9));
}

std::vector<item_t> FrequencyOracle::exact_quantiles(double phi) const {
  const std::size_t count = quantile_count(phi);
  if (mass_ <= 0) throw std::domain_error("quantiles need positive mass");
  const std::uint64_t n = freq_.size();

  // suffix[a] = sum_{i >= a} f_i, suffix[n] = 0.
  std::vector<count_t> suffix(n + 1, 0);
  for (std::uint64_t a = n; a-- > 0;) suffix[a] = suffix[a + 1] + freq_[a];

  const double m = static_cast<double>(mass_);
  const double tol = 1e-9 * m;
  std::vector<item_t> out;
  for (std::size_t j = 1; j <= count; ++j) {
    const double target = std::min(static_cast<double>(j) * phi * m, m);
    // Last index whose suffix sum still reaches the target: the item that
    // carries the target mass.
    std::uint64_t a = n - 1;
    while (a > 0 && static_cast<double>(suffix[a]) < target - tol) --a;
    out.push_back(a);
  }
  return out;
}

double FrequencyOracle::exact_entropy() const {
  const count_t norm = l1();
  if (norm == 0) return 0.0;
  const double total = static_cast<double>(norm);
  double h = 0.0;
  for (count_t f : freq_) {
    if (f == 0) continue;
    const double a = static_cast<double>(f < 0 ? -f : f);
    h += (a / total) * std::log2(total / a);
  }
  return h;
}

count_t FrequencyOracle::residual_mass(std::size_t s) const {
  std::vector<std::pair<count_t, item_t>> ranked;
  ranked.reserve(freq_.size());
  for (item_t i = 0; i < freq_.size(); ++i) ranked.emplace_back(freq_[i] < 0 ? -freq_[i] : freq_[i], i);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  count_t rest = 0;
  for (std::size_t i = std::min(s, ranked.size()); i < ranked.size(); ++i) rest += ranked[i].first;
  return rest;
}

wide_t exact_inner(const FrequencyOracle& r, const FrequencyOracle& s) {
  if (r.domain_size() != s.domain_size()) throw std::invalid_argument("exact_inner: domain sizes differ");
  const auto f = r.frequencies();
  const auto g = s.frequencies();
  wide_t sum = 0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += static_cast<wide_t>(f[i]) * g[i];
  return sum;
}

}  // namespace crprecis
