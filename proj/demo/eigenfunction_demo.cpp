// Small tour of the library: evaluate the two eigenfunction families at a
// sample point, confirm the difference equation and self-duality numerically,
// and print the first few polynomial values reached at spectral lattice
// points.

#include <cmath>
#include <complex>
#include <cstdio>

#include "qvwp/qvwp.hpp"

using qvwp::Complex;

static void show(const char* name, const qvwp::SeriesValue& v) {
  std::printf("  %-10s = %+.15f %+.15f i   (terms %d, tail %.1e)\n", name,
              v.value.real(), v.value.imag(), v.terms_used, v.tail_estimate);
}

int main() {
  qvwp::HeckeParams p;
  p.kappa = 0.3;
  p.lambda = -0.25;
  p.upsilon = 0.2;
  p.varsigma = 0.35;
  p.q = 0.5;
  p.s = qvwp::Rational(1);
  qvwp::Tolerance tol;

  Complex x{0.4, 0.3};
  Complex z{0.7, -0.2};

  std::printf("parameters: kappa=%g lambda=%g upsilon=%g varsigma=%g q=%g "
              "s=%lld/%lld\n",
              p.kappa, p.lambda, p.upsilon, p.varsigma, p.q,
              static_cast<long long>(p.s.num), static_cast<long long>(p.s.den));
  std::printf("evaluation point: x = %g%+gi, z = %g%+gi\n\n", x.real(),
              x.imag(), z.real(), z.imag());

  std::printf("eigenfunctions:\n");
  qvwp::SeriesValue phi = qvwp::Phi(x, z, p, tol);
  qvwp::SeriesValue ew = qvwp::E_aw(x, z, p, tol);
  show("Phi(x,z)", phi);
  show("E(x,z)", ew);
  show("c(x,z)", qvwp::cfun(x, z, p, tol));

  // Apply the second-order difference operator in x and compare with the
  // eigenvalue action on the same function.
  double s = p.s_val();
  Complex Ap = qvwp::coeff_A(x, p);
  Complex Am = qvwp::coeff_A(-x, p);
  Complex fp = qvwp::Phi(x + s, z, p, tol).value;
  Complex fm = qvwp::Phi(x - s, z, p, tol).value;
  Complex lhs = Ap * (fp - phi.value) + Am * (fm - phi.value);
  Complex rhs = qvwp::eigenvalue(z, p) * phi.value;
  std::printf("\ndifference equation (D Phi vs eigenvalue * Phi):\n");
  std::printf("  relative residual = %.3e\n",
              std::abs(lhs - rhs) / std::abs(rhs));

  // Swapping (x, z) together with the dual parameter set reproduces the same
  // value for both families.
  qvwp::HeckeParams pd = qvwp::dual(p);
  double d_phi = std::abs(phi.value - qvwp::Phi(z, x, pd, tol).value) /
                 std::abs(phi.value);
  double d_e =
      std::abs(ew.value - qvwp::E_aw(z, x, pd, tol).value) / std::abs(ew.value);
  std::printf("\nself-duality under (x, z, params) -> (z, x, dual params):\n");
  std::printf("  Phi deviation = %.3e\n", d_phi);
  std::printf("  E   deviation = %.3e\n", d_e);

  // At z = -(kappa + upsilon) - n*s the function E collapses to a polynomial
  // in q^x + q^{-x}; compare against the terminating evaluation.
  std::printf("\npolynomial specialisation E(x, z_n) vs P_n(x):\n");
  qvwp::AWParams w = p.aw();
  double Q = p.qs();
  Complex factor =
      (qvwp::qpochhammer_multi({w.a * w.b, w.a * w.c}, Q, tol) /
       qvwp::qpochhammer_inf(Q / (w.a * w.d), Q, tol))
          .value;
  for (int n = 0; n <= 4; ++n) {
    Complex zn = Complex{-(p.kappa + p.upsilon) - n * s, 0.0};
    Complex left = qvwp::E_aw(x, zn, p, tol).value;
    Complex right = factor * qvwp::aw_polynomial(n, x, p, tol).value;
    std::printf("  n=%d   |E - pref*P_n| / |E| = %.3e\n", n,
                std::abs(left - right) / std::abs(left));
  }

  return 0;
}
