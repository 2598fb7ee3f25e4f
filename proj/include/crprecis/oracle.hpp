#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crprecis/ratio.hpp"
#include "crprecis/sketch.hpp"

namespace crprecis {

/// Dense exact frequency vector: the ground truth every estimator is checked
/// against.
class FrequencyOracle {
 public:
  explicit FrequencyOracle(std::uint64_t n, Model model = Model::Strict);

  static FrequencyOracle replay(std::span<const StreamUpdate> updates, std::uint64_t n,
                                Model model = Model::Strict);

  /// Throws std::out_of_range for item >= N, std::invalid_argument for a zero
  /// delta and, in the strict model, std::domain_error if the update would
  /// drive the item's frequency negative (the oracle is left unchanged).
  void apply(const StreamUpdate& u);

  std::uint64_t domain_size() const { return freq_.size(); }
  Model model() const { return model_; }
  std::span<const count_t> frequencies() const { return freq_; }

  count_t exact_point(item_t x) const;
  count_t exact_range(item_t l, item_t r) const;
  /// Sum of frequencies (m in the strict model).
  count_t mass() const { return mass_; }
  /// Sum of absolute frequencies.
  count_t l1() const;

  /// Suffix-sum phi-quantiles a_1..a_ceil(1/phi): a_j is the largest index
  /// whose suffix sum is still >= j*phi*m, i.e. the item carrying the target
  /// mass. Among indices whose suffix sum equals the target exactly this is
  /// the smallest one with nonzero frequency. Requires mass() > 0.
  std::vector<item_t> exact_quantiles(double phi) const;

  /// sum_{i >= a} f_i.
  count_t suffix_sum(item_t a) const;

  /// Base-2 entropy of |f| / L1, zero-frequency items skipped.
  double exact_entropy() const;

  /// L1 minus the s largest |f_i|; ties go to the smaller index.
  count_t residual_mass(std::size_t s) const;

 private:
  std::vector<count_t> freq_;
  Model model_;
  count_t mass_ = 0;
};

wide_t exact_inner(const FrequencyOracle& r, const FrequencyOracle& s);

/// Number of quantiles requested for fraction phi, i.e. ceil(1/phi).
std::size_t quantile_count(double phi);

}  // namespace crprecis
