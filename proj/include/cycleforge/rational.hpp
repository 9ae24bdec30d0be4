#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycleforge {

// Exact arithmetic used everywhere a certificate depends on a sign or an
// inequality. Conversions to floating point happen only at reporting
// boundaries.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

using RationalVec = std::vector<Rational>;

inline Rational dot(const RationalVec& a, const RationalVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RationalVec sub(const RationalVec& a, const RationalVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub: size mismatch");
  RationalVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline bool is_zero(const RationalVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

// Sign of det(M) for a square rational matrix, by fraction-free-ish
// elimination. Returns -1, 0, or +1.
inline int det_sign(std::vector<RationalVec> m) {
  const std::size_t n = m.size();
  int sign = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      sign = -sign;
    }
    if (m[col][col] < 0) sign = -sign;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (m[row][col] == 0) continue;
      Rational f = m[row][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[row][k] -= f * m[col][k];
    }
  }
  return sign;
}

// Solves M c = rhs for square M. Returns false when M is singular.
inline bool solve_linear(std::vector<RationalVec> m, RationalVec rhs, RationalVec& out) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col] == 0) continue;
      Rational f = m[row][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[row][k] -= f * m[col][k];
      rhs[row] -= f * rhs[col];
    }
  }
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i] / m[i][i];
  return true;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Parses "p", "p/q", or a plain decimal like "-1.25" into an exact rational.
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
    return Rational(num, den);
  }
  auto point = s.find('.');
  if (point == std::string::npos) return Rational(BigInt(s));
  std::string digits = s.substr(0, point) + s.substr(point + 1);
  BigInt den = 1;
  for (std::size_t i = point + 1; i < s.size(); ++i) den *= 10;
  return Rational(BigInt(digits), den);
}

}  // namespace cycleforge
