#include "crprecis/ratio.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace crprecis {

namespace {

wide_t gcd_wide(wide_t a, wide_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    wide_t r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Ratio reduced(wide_t num, wide_t den) {
  if (den == 0) throw std::domain_error("Ratio: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  wide_t g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  Ratio r;
  r.num = num;
  r.den = den;
  return r;
}

}  // namespace

Ratio::Ratio(wide_t n, wide_t d) { *this = reduced(n, d); }

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  const wide_t lhs = a.num * b.den;
  const wide_t rhs = b.num * a.den;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Ratio operator+(const Ratio& a, const Ratio& b) { return reduced(a.num * b.den + b.num * a.den, a.den * b.den); }
Ratio operator-(const Ratio& a, const Ratio& b) { return reduced(a.num * b.den - b.num * a.den, a.den * b.den); }
Ratio operator*(const Ratio& a, const Ratio& b) { return reduced(a.num * b.num, a.den * b.den); }

Ratio abs(const Ratio& r) { return r.num < 0 ? Ratio(-r.num, r.den) : r; }

std::string to_string(wide_t v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  unsigned __int128 u = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string digits;
  while (u > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::string to_string(const Ratio& r) {
  if (r.den == 1) return to_string(r.num);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", r.value());
  return buf;
}

}  // namespace crprecis
