#pragma once

#include <cmath>
#include <functional>

#include "params.hpp"
#include "qseries.hpp"
#include "types.hpp"

namespace qvwp {

using GridFunction = std::function<Complex(Complex)>;

// Coefficient of the forward shift in the second-order difference operator:
//   A(x) = (1 - a q^x)(1 - b q^x)(1 - c q^x)(1 - d q^x)
//          / ( at (1 - q^{2x})(1 - q^{s + 2x}) ).
inline Complex coeff_A(Complex x, const HeckeParams& p,
                       double pole_guard = 1e-8) {
  AWParams w = p.aw();
  Complex qx = qpow(p.q, x);
  Complex q2x = qx * qx;
  Complex qs2x = p.qs() * q2x;
  if (std::abs(1.0 - q2x) <= pole_guard || std::abs(1.0 - qs2x) <= pole_guard)
    raise(errc::pole, "coeff_A: shift denominator vanishes");
  Complex num = (1.0 - w.a * qx) * (1.0 - w.b * qx) * (1.0 - w.c * qx) *
                (1.0 - w.d * qx);
  return num / (w.at * (1.0 - q2x) * (1.0 - qs2x));
}

// (D f)(x) = A(x) (f(x+s) - f(x)) + A(-x) (f(x-s) - f(x)).
inline Complex apply_D(const GridFunction& f, Complex x, const HeckeParams& p,
                       double pole_guard = 1e-8) {
  double s = p.s_val();
  Complex fx = f(x);
  return coeff_A(x, p, pole_guard) * (f(x + s) - fx) +
         coeff_A(-x, p, pole_guard) * (f(x - s) - fx);
}

// Half-step first-order operator (uses only kappa and lambda):
//   (L f)(x) = (1 - q^{kappa+lambda+x})(1 + q^{kappa-lambda+x})
//              / ( q^kappa (1 - q^{2x}) ) * f(x + s/2)
//            + (same with x -> -x) * f(x - s/2).
inline Complex apply_L(const GridFunction& f, Complex x, const HeckeParams& p,
                       double pole_guard = 1e-8) {
  p.validate();
  double h = 0.5 * p.s_val();
  double qk = std::pow(p.q, p.kappa);
  Complex qx = qpow(p.q, x);
  Complex q2x = qx * qx;
  if (std::abs(1.0 - q2x) <= pole_guard ||
      std::abs(1.0 - 1.0 / q2x) <= pole_guard)
    raise(errc::pole, "apply_L: shift denominator vanishes");
  Complex apl = std::pow(p.q, p.kappa + p.lambda);
  Complex ami = std::pow(p.q, p.kappa - p.lambda);
  Complex vp = (1.0 - apl * qx) * (1.0 + ami * qx) / (qk * (1.0 - q2x));
  Complex vm = (1.0 - apl / qx) * (1.0 + ami / qx) / (qk * (1.0 - 1.0 / q2x));
  return vp * f(x + h) + vm * f(x - h);
}

}  // namespace qvwp
