#include "crprecis/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace crprecis {

void EntropyParams::validate() const {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  if (!(eps > 0.0) || eps >= 0.25) throw std::invalid_argument("eps must lie in (0, 1/4)");
  if (c < 1) throw std::invalid_argument("c must be a positive integer");
}

std::uint32_t EntropyParams::required_width(count_t m) const {
  validate();
  if (m <= 0) throw std::invalid_argument("entropy needs positive mass");
  const double width = 2.0 * std::pow(static_cast<double>(m), 1.0 / alpha) / (eps * static_cast<double>(c));
  return static_cast<std::uint32_t>(std::ceil(width - 1e-9));
}

SketchParams entropy_sketch_params(std::uint64_t n, std::uint64_t k, count_t m, const EntropyParams& p) {
  SketchParams params;
  params.k = k;
  params.n = n;
  params.t = std::max(p.required_width(m), ceil_log(std::max<std::uint64_t>(k, 2), n));
  return params;
}

EntropyEstimate estimate_entropy(const CrPrecis& sk, const EntropyParams& p, count_t m,
                                 std::span<const item_t> candidates) {
  p.validate();
  if (m <= 0) throw std::invalid_argument("entropy needs positive mass");
  if (sk.model() != Model::Strict) throw std::invalid_argument("entropy estimation needs a strict sketch");
  const std::uint32_t needed = p.required_width(m);
  if (sk.width() < needed) {
    throw std::invalid_argument("sketch width " + std::to_string(sk.width()) + " is below the required " +
                                std::to_string(needed));
  }

  const double mass = static_cast<double>(m);
  const double t = static_cast<double>(sk.width());
  const auto c = static_cast<wide_t>(p.c);

  EntropyEstimate out;
  std::vector<item_t> sorted(candidates.begin(), candidates.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  CrPrecis residual = sk;
  for (item_t x : sorted) {
    const count_t est = sk.point_estimate_strict(x);
    if (static_cast<wide_t>(est) * c < m) continue;
    out.discovered.push_back(x);
    // (est - eps m / t) / (1 - eps / t), rearranged so that est == m gives m exactly.
    const double fx = static_cast<double>(est);
    const double corrected = fx - p.eps * (mass - fx) / (t - p.eps);
    if (corrected > 0.0) out.h_dense += (corrected / mass) * std::log2(mass / corrected);
    residual.deduct(x, std::llround(corrected));
  }

  const double cap = mass / (p.eps * static_cast<double>(p.c));
  double sparse = 0.0;
  for (std::size_t j = 0; j < residual.width(); ++j) {
    for (count_t counter : residual.table(j)) {
      if (counter <= 0) continue;
      const double v = static_cast<double>(counter);
      if (v > cap) continue;
      sparse += (v / mass) * std::log2(mass / v);
    }
  }
  out.h_sparse = sparse / t;
  out.total = out.h_dense + out.h_sparse;
  return out;
}

EntropyEstimate estimate_entropy(const CrPrecis& sk, const EntropyParams& p, count_t m) {
  std::vector<item_t> all(sk.params().n);
  std::iota(all.begin(), all.end(), item_t{0});
  return estimate_entropy(sk, p, m, all);
}

}  // namespace crprecis
