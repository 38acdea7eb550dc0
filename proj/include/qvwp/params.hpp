#pragma once

#include <cmath>

#include "qseries.hpp"
#include "rational.hpp"
#include "types.hpp"

namespace qvwp {

// Multiplicative Askey-Wilson parameters derived from additive ones:
// the geometric family {a, b, c, d} and its spectral dual {at, bt, ct, dt}
// (the dual family is the same construction with lambda and upsilon
// swapped, so at^2 = q^{-s} a b c d).
struct AWParams {
  Complex a, b, c, d;
  Complex at, bt, ct, dt;
};

// Additive parameter set (kappa, lambda, upsilon, varsigma) with base q in
// (0,1) and a positive rational step s.
struct HeckeParams {
  double kappa = 0.0;
  double lambda = 0.0;
  double upsilon = 0.0;
  double varsigma = 0.0;
  double q = 0.5;
  Rational s{1, 1};

  double s_val() const { return s.to_double(); }
  double qs() const { return std::pow(q, s_val()); }

  void validate() const {
    if (!(q > 0.0 && q < 1.0))
      raise(errc::domain_error, "HeckeParams: q outside (0,1)");
    if (s.num <= 0) raise(errc::domain_error, "HeckeParams: step s <= 0");
  }

  AWParams aw() const {
    validate();
    double h = 0.5 * s_val();
    AWParams p;
    p.a = std::pow(q, kappa + lambda);
    p.b = -std::pow(q, kappa - lambda);
    p.c = std::pow(q, h + upsilon + varsigma);
    p.d = -std::pow(q, h + upsilon - varsigma);
    p.at = std::pow(q, kappa + upsilon);
    p.bt = -std::pow(q, kappa - upsilon);
    p.ct = std::pow(q, h + lambda + varsigma);
    p.dt = -std::pow(q, h + lambda - varsigma);
    return p;
  }
};

// Spectral duality: swapping lambda and upsilon swaps the two families.
inline HeckeParams dual(const HeckeParams& p) {
  HeckeParams d = p;
  d.lambda = p.upsilon;
  d.upsilon = p.lambda;
  return d;
}

// One-parameter-pair specializations.  Both halve the step; callers are
// responsible for also halving the spectral (respectively geometric)
// argument when comparing against the full-step function.
inline HeckeParams specialize_R(double kappa, double lambda, double q,
                                Rational s) {
  HeckeParams p;
  p.kappa = kappa;
  p.lambda = lambda;
  p.upsilon = 0.0;
  p.varsigma = 0.0;
  p.q = q;
  p.s = s.half();
  p.validate();
  return p;
}

inline HeckeParams specialize_J(double kappa, double lambda, double q,
                                Rational s) {
  HeckeParams p;
  p.kappa = kappa;
  p.lambda = lambda;
  p.upsilon = kappa;
  p.varsigma = lambda;
  p.q = q;
  p.s = s;
  p.validate();
  return p;
}

// Eigenvalue of the second-order difference operator on the asymptotically
// free eigenfunction: q^z + q^{-z} - at - 1/at.
inline Complex eigenvalue(Complex z, const HeckeParams& p) {
  Complex qz = qpow(p.q, z);
  Complex at = p.aw().at;
  return qz + 1.0 / qz - at - 1.0 / at;
}

}  // namespace qvwp
