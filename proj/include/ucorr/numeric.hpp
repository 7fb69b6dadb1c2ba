#pragma once

// Scalar plumbing shared by every precision the library computes in.
//
// All exact evaluators are templates over a real type `Real`; complex values
// are std::complex<Real>. Three instantiations are used:
//   double      - binary64, the fast default
//   float128    - GCC __float128 backed by libquadmath
//   float_mp    - 100 decimal digit software float (Boost.Multiprecision)
// The overload set in ucorr::num gives the three a common spelling for the
// handful of transcendental functions the library needs. std::abs/std::exp on
// std::complex<float128> are not usable, so complex helpers live here too.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <quadmath.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace ucorr {

using cdouble = std::complex<double>;
using float128 = __float128;
using float_mp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                               boost::multiprecision::et_off>;

/// Working precision of an exact evaluation. `automatic` lets the library pick
/// the cheapest precision whose accuracy the kernel condition number allows.
enum class Precision { automatic, binary64, binary128, multiprecision };

inline std::string_view to_string(Precision p) {
  switch (p) {
    case Precision::automatic: return "auto";
    case Precision::binary64: return "binary64";
    case Precision::binary128: return "binary128";
    case Precision::multiprecision: return "multiprecision";
  }
  return "auto";
}

inline bool parse_precision(std::string_view s, Precision& out) {
  for (auto p : {Precision::automatic, Precision::binary64, Precision::binary128,
                 Precision::multiprecision}) {
    if (s == to_string(p)) {
      out = p;
      return true;
    }
  }
  return false;
}

namespace num {

inline double exp(double v) { return std::exp(v); }
inline double log(double v) { return std::log(v); }
inline double sin(double v) { return std::sin(v); }
inline double cos(double v) { return std::cos(v); }
inline double sqrt(double v) { return std::sqrt(v); }
inline double fabs(double v) { return std::fabs(v); }
inline bool isfinite(double v) { return std::isfinite(v); }

inline float128 exp(float128 v) { return expq(v); }
inline float128 log(float128 v) { return logq(v); }
inline float128 sin(float128 v) { return sinq(v); }
inline float128 cos(float128 v) { return cosq(v); }
inline float128 sqrt(float128 v) { return sqrtq(v); }
inline float128 fabs(float128 v) { return fabsq(v); }
inline bool isfinite(float128 v) { return finiteq(v) != 0; }

inline float_mp exp(const float_mp& v) { return boost::multiprecision::exp(v); }
inline float_mp log(const float_mp& v) { return boost::multiprecision::log(v); }
inline float_mp sin(const float_mp& v) { return boost::multiprecision::sin(v); }
inline float_mp cos(const float_mp& v) { return boost::multiprecision::cos(v); }
inline float_mp sqrt(const float_mp& v) { return boost::multiprecision::sqrt(v); }
inline float_mp fabs(const float_mp& v) { return boost::multiprecision::abs(v); }
inline bool isfinite(const float_mp& v) { return boost::multiprecision::isfinite(v); }

template <class Real>
Real epsilon() {
  if constexpr (std::is_same_v<Real, float128>) {
    const float128 half_ulp = float128(1) / float128(std::uint64_t{1} << 56);
    return half_ulp * half_ulp;  // 2^-112
  } else {
    return std::numeric_limits<Real>::epsilon();
  }
}

template <class Real>
double to_double(const Real& v) {
  return static_cast<double>(v);
}

template <class Real>
std::complex<Real> lift(const cdouble& z) {
  return {Real(z.real()), Real(z.imag())};
}

template <class Real>
cdouble lower(const std::complex<Real>& z) {
  return {to_double(z.real()), to_double(z.imag())};
}

/// Modulus with scaling, so that |re|^2 cannot overflow.
template <class Real>
Real abs(const std::complex<Real>& z) {
  const Real a = fabs(z.real());
  const Real b = fabs(z.imag());
  const Real big = a > b ? a : b;
  if (big == Real(0)) return Real(0);
  const Real small = a > b ? b : a;
  const Real t = small / big;
  return big * sqrt(Real(1) + t * t);
}

/// Cheap pivot magnitude |re| + |im|.
template <class Real>
Real abs1(const std::complex<Real>& z) {
  return fabs(z.real()) + fabs(z.imag());
}

template <class Real>
std::complex<Real> exp(const std::complex<Real>& z) {
  const Real m = exp(z.real());
  return {m * cos(z.imag()), m * sin(z.imag())};
}

/// z/|z|, or 1 for z == 0.
template <class Real>
std::complex<Real> unit(const std::complex<Real>& z) {
  const Real m = num::abs(z);
  if (m == Real(0)) return {Real(1), Real(0)};
  return {z.real() / m, z.imag() / m};
}

template <class Real>
bool isfinite(const std::complex<Real>& z) {
  return isfinite(z.real()) && isfinite(z.imag());
}

}  // namespace num
}  // namespace ucorr
