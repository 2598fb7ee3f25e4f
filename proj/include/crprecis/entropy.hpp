#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crprecis/sketch.hpp"

namespace crprecis {

struct EntropyParams {
  double alpha = 2.0;
  double eps = 0.1;
  /// Items with estimate >= m/c count as frequent; residual counters above
  /// m/(eps*c) are ignored.
  std::uint64_t c = 4;

  void validate() const;
  /// ceil(2 m^(1/alpha) / (eps c)).
  std::uint32_t required_width(count_t m) const;
  /// alpha / (1 - eps): the multiplicative factor the estimate is held to.
  double effective_factor() const { return alpha / (1.0 - eps); }
};

/// Strict sketch parameters wide enough for estimate_entropy at mass m.
SketchParams entropy_sketch_params(std::uint64_t n, std::uint64_t k, count_t m, const EntropyParams& p);

struct EntropyEstimate {
  double h_dense = 0.0;
  double h_sparse = 0.0;
  double total = 0.0;
  /// Items whose estimate reached m/c, ascending.
  std::vector<item_t> discovered;
};

/// Frequent part from point queries over `candidates`, residual part from
/// the counters left after deducting the frequent items' corrected
/// estimates. The input sketch is not modified. Throws std::invalid_argument
/// for m <= 0 or a sketch narrower than p.required_width(m).
EntropyEstimate estimate_entropy(const CrPrecis& sk, const EntropyParams& p, count_t m,
                                 std::span<const item_t> candidates);

/// Same, with every domain item as a candidate.
EntropyEstimate estimate_entropy(const CrPrecis& sk, const EntropyParams& p, count_t m);

}  // namespace crprecis
