#pragma once

#include <utility>

#include "clinalg.hpp"
#include "numeric.hpp"
#include "spectra.hpp"

namespace ucorr {

// Everything downstream of E loses about log10(cond) digits. binary64 is kept
// while that leaves >= 12 digits; binary128 while it leaves >= 18.
inline constexpr double kBinary64ConditionLimit = 1e4;
inline constexpr double kBinary128ConditionLimit = 1e16;

/// Turns `automatic` into a concrete precision for this pair, never going
/// below `floor`. Explicit requests are honored as given.
inline Precision resolve_precision(const ProblemPair& pair, Precision requested,
                                   Precision floor = Precision::binary64) {
  if (requested != Precision::automatic) return requested;
  if (floor == Precision::automatic) floor = Precision::binary64;
  if (floor == Precision::binary64) {
    try {
      if (KernelFactorization<double>(pair).condition_estimate() <= kBinary64ConditionLimit)
        return Precision::binary64;
    } catch (const SingularKernel&) {
    }
  }
  if (floor != Precision::multiprecision) {
    try {
      if (KernelFactorization<float128>(pair).condition_estimate() <= kBinary128ConditionLimit)
        return Precision::binary128;
    } catch (const SingularKernel&) {
    }
  }
  return Precision::multiprecision;
}

/// Calls fn.template operator()<Real>() with the real type matching `p`
/// (which must already be resolved).
template <class Fn>
decltype(auto) dispatch_precision(Precision p, Fn&& fn) {
  switch (p) {
    case Precision::binary128: return fn.template operator()<float128>();
    case Precision::multiprecision: return fn.template operator()<float_mp>();
    case Precision::automatic:
    case Precision::binary64: break;
  }
  return fn.template operator()<double>();
}

}  // namespace ucorr
