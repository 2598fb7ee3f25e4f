#pragma once

#include <vector>

#include "crprecis/ratio.hpp"
#include "crprecis/sketch.hpp"

namespace crprecis {

/// Per-table dot products sum_b T_j[b] * U_j[b]. Throws
/// std::invalid_argument if the sketches differ in params or primes.
std::vector<wide_t> table_products(const CrPrecis& r, const CrPrecis& s);

/// min_j of the per-table dot products. Never below f.g on strict streams.
wide_t inner_product_strict(const CrPrecis& r, const CrPrecis& s);

/// Mean of the per-table dot products, as an exact fraction.
Ratio inner_product_general(const CrPrecis& r, const CrPrecis& s);

/// (ceil(log_k N) / t) * m_R * m_S.
Ratio inner_strict_bound(const SketchParams& params, count_t m_r, count_t m_s);

/// ((ceil(log_k N) - 1) / t) * L1(R) * L1(S).
Ratio inner_general_bound(const SketchParams& params, count_t l1_r, count_t l1_s);

}  // namespace crprecis
