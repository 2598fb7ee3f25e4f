#include "crprecis/products.hpp"

#include <algorithm>
#include <stdexcept>

namespace crprecis {

std::vector<wide_t> table_products(const CrPrecis& r, const CrPrecis& s) {
  if (r.params() != s.params() || !std::equal(r.primes().begin(), r.primes().end(), s.primes().begin(),
                                              s.primes().end())) {
    throw std::invalid_argument("inner product needs sketches with identical height, width and primes");
  }
  std::vector<wide_t> out(r.width(), 0);
  for (std::size_t j = 0; j < r.width(); ++j) {
    const auto a = r.table(j);
    const auto b = s.table(j);
    wide_t sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += static_cast<wide_t>(a[i]) * b[i];
    out[j] = sum;
  }
  return out;
}

wide_t inner_product_strict(const CrPrecis& r, const CrPrecis& s) {
  const auto products = table_products(r, s);
  return *std::min_element(products.begin(), products.end());
}

Ratio inner_product_general(const CrPrecis& r, const CrPrecis& s) {
  const auto products = table_products(r, s);
  wide_t sum = 0;
  for (wide_t p : products) sum += p;
  return Ratio(sum, static_cast<wide_t>(products.size()));
}

Ratio inner_strict_bound(const SketchParams& params, count_t m_r, count_t m_s) {
  return Ratio(static_cast<wide_t>(params.log_k_n()) * m_r * m_s, params.t);
}

Ratio inner_general_bound(const SketchParams& params, count_t l1_r, count_t l1_s) {
  return Ratio((static_cast<wide_t>(params.log_k_n()) - 1) * l1_r * l1_s, params.t);
}

}  // namespace crprecis
