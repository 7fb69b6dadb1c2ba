// Minimal tour of the library: HCIZ value, correlator matrix, resolvent.

#include <cstdio>

#include "ucorr/ucorr.hpp"

int main() {
  using namespace ucorr;
  const ProblemPair pair{validate_spectrum({0.0, 1.0}), validate_spectrum({0.0, 1.0})};

  const LogComplex i = hciz_value(pair, Precision::automatic);
  std::printf("I(X,Y) = exp(%.12f) * (%g%+gi)\n", i.log_magnitude(), i.phase().real(),
              i.phase().imag());

  const CorrelatorMatrix p = correlator_matrix(pair, {});
  for (std::size_t r = 0; r < p.n; ++r)
    std::printf("P[%zu] = %.15f %.15f\n", r, p.p(r, 0).real(), p.p(r, 1).real());

  const cdouble w = resolvent_w(pair, {cdouble{2.0, 0.5}, cdouble{-1.0, 0.0}}).w;
  std::printf("W(2+0.5i, -1) = %.15f%+.15fi\n", w.real(), w.imag());
}
