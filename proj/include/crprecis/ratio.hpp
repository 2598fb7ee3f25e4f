#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace crprecis {

using wide_t = __int128;

/// Exact rational num/den with den > 0. Used for mean estimates and for
/// error bounds so that bound checks never go through floating point.
struct Ratio {
  wide_t num = 0;
  wide_t den = 1;

  Ratio() = default;
  Ratio(wide_t n, wide_t d = 1);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);
  friend bool operator==(const Ratio& a, const Ratio& b) { return (a <=> b) == 0; }

  friend Ratio operator+(const Ratio& a, const Ratio& b);
  friend Ratio operator-(const Ratio& a, const Ratio& b);
  friend Ratio operator*(const Ratio& a, const Ratio& b);
};

Ratio abs(const Ratio& r);

std::string to_string(wide_t v);

/// Decimal rendering: integers verbatim, otherwise fixed with six places.
std::string to_string(const Ratio& r);

}  // namespace crprecis
