#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "params.hpp"
#include "qseries.hpp"
#include "types.hpp"

namespace qvwp {

enum class PsiRoute { automatic, w8_7_form, phi4_form };
enum class ERoute { automatic, series_only };

// Plane-wave weight W(x,z) = q^{(kappa+lambda+x)(kappa+upsilon+z)/s},
// satisfying W(x+s, z) = at q^z W(x, z) and its dual counterpart.
inline Complex W_fn(Complex x, Complex z, const HeckeParams& p) {
  p.validate();
  return qpow(p.q,
              (p.kappa + p.lambda + x) * (p.kappa + p.upsilon + z) / p.s_val());
}

// Normalizing product St(x) = (q^{s+x}/a, q^{s+x}/b, q^{s+x}/c, q^{s+x}/d;
// q^s)_inf over the geometric parameter family.
inline SeriesValue St(Complex x, const HeckeParams& p, const Tolerance& tol) {
  AWParams w = p.aw();
  double Q = p.qs();
  Complex t = Q * qpow(p.q, x);
  return qpochhammer_multi({t / w.a, t / w.b, t / w.c, t / w.d}, Q, tol);
}

// Dual normalizer over the spectral family.
inline SeriesValue St_dual(Complex z, const HeckeParams& p,
                           const Tolerance& tol) {
  AWParams w = p.aw();
  double Q = p.qs();
  Complex t = Q * qpow(p.q, z);
  return qpochhammer_multi({t / w.at, t / w.bt, t / w.ct, t / w.dt}, Q, tol);
}

namespace detail {

// Series part of the asymptotically free eigenfunction in purely
// multiplicative data: base Q = q^s, arguments qx = q^x, qz = q^z, geometric
// parameters (a, b, c, d) and the leading spectral parameter at.  Keeping the
// parameters free (rather than deriving them from additive ones) exposes the
// manifest symmetries: the value is invariant under permutations of
// {a, b, c, d} that fix at.

// Single very-well-poised sum; converges for |d qx| < 1.
inline SeriesValue psi_w87_route(double Q, Complex qx, Complex qz, Complex a,
                                 Complex b, Complex c, Complex d, Complex at,
                                 const Tolerance& tol) {
  Complex dqx = d * qx;
  if (std::abs(dqx) >= 0.9)
    raise(errc::convergence_region, "Psi: |d q^x| too large for the single-sum form");
  Complex dd = Q * Q * qx * qz * qz / d;
  if (near_nonpos_qpower(dd, Q, tol.pole_guard))
    raise(errc::pole, "Psi: single-sum prefactor denominator vanishes");
  Complex w = Q * qx * qz;
  SeriesValue num = qpochhammer_multi(
      {w * a / at, w * b / at, w * c / at, w * at / d, Q * qz * qz, dqx}, Q,
      tol);
  SeriesValue den = qpochhammer_inf(dd, Q, tol);
  SeriesValue sum =
      w8_7(Q * qx * qz * qz / d,
           {Q * qz / at, Q * qz * at / (a * d), a * b * qz / at,
            a * c * qz / at, Q * qx / d},
           Q, dqx, tol);
  return num / den * sum;
}

// Two-term balanced continuation; converges everywhere but degenerates when
// a/d sits on the Q-power lattice.
inline SeriesValue psi_4p3_route(double Q, Complex qx, Complex qz, Complex a,
                                 Complex b, Complex c, Complex d, Complex at,
                                 const Tolerance& tol) {
  if (near_theta_zero(a / d, Q, tol.pole_guard))
    raise(errc::degenerate, "Psi: a/d on the Q-power lattice");
  Complex bt = a * b / at, ct = a * c / at;
  Complex w = Q * qx * qz;
  Complex qsQ{Q, 0.0};
  SeriesValue t1 =
      qpochhammer_multi({Q * qx / a, d * qx, Q * qz / bt, Q * qz / ct,
                         w * a / at, w * at / d},
                        Q, tol) /
      qpochhammer_inf(d / a, Q, tol) *
      phi_series({a * qx, Q * qx / d, bt * qz, ct * qz},
                 {w * a / at, w * at / d, Q * a / d}, Q, qsQ, tol);
  SeriesValue t2 =
      qpochhammer_multi({a * qx, Q * qx / d, bt * qz, ct * qz, w * at / a,
                         w * d / at},
                        Q, tol) /
      qpochhammer_inf(a / d, Q, tol) *
      phi_series({Q * qx / a, d * qx, Q * qz / bt, Q * qz / ct},
                 {w * at / a, w * d / at, Q * d / a}, Q, qsQ, tol);
  return t1 + t2;
}

}  // namespace detail

// Series part on raw multiplicative data.  The automatic route prefers the
// single sum inside its convergence region and falls through to the
// continuation (and vice versa) when the preferred form hits a degeneracy.
inline SeriesValue Psi_core(double Q, Complex qx, Complex qz, Complex a,
                            Complex b, Complex c, Complex d, Complex at,
                            const Tolerance& tol,
                            PsiRoute route = PsiRoute::automatic) {
  if (!(Q > 0.0 && Q < 1.0))
    raise(errc::domain_error, "Psi: base outside (0,1)");
  switch (route) {
    case PsiRoute::w8_7_form:
      return detail::psi_w87_route(Q, qx, qz, a, b, c, d, at, tol);
    case PsiRoute::phi4_form:
      return detail::psi_4p3_route(Q, qx, qz, a, b, c, d, at, tol);
    case PsiRoute::automatic:
      break;
  }
  bool prefer_w87 = std::abs(d * qx) < 0.9;
  try {
    return prefer_w87 ? detail::psi_w87_route(Q, qx, qz, a, b, c, d, at, tol)
                      : detail::psi_4p3_route(Q, qx, qz, a, b, c, d, at, tol);
  } catch (const eval_error&) {
    return prefer_w87 ? detail::psi_4p3_route(Q, qx, qz, a, b, c, d, at, tol)
                      : detail::psi_w87_route(Q, qx, qz, a, b, c, d, at, tol);
  }
}

inline SeriesValue Psi(Complex x, Complex z, const HeckeParams& p,
                       const Tolerance& tol,
                       PsiRoute route = PsiRoute::automatic) {
  AWParams w = p.aw();
  return Psi_core(p.qs(), qpow(p.q, x), qpow(p.q, z), w.a, w.b, w.c, w.d, w.at,
                  tol, route);
}

// Asymptotically free eigenfunction Phi = W Psi / (St(x) St_dual(z)).
inline SeriesValue Phi(Complex x, Complex z, const HeckeParams& p,
                       const Tolerance& tol,
                       PsiRoute route = PsiRoute::automatic) {
  AWParams w = p.aw();
  double Q = p.qs();
  Complex qx = qpow(p.q, x), qz = qpow(p.q, z);
  Complex tx = Q * qx, tz = Q * qz;
  for (Complex u : {tx / w.a, tx / w.b, tx / w.c, tx / w.d})
    if (detail::near_nonpos_qpower(u, Q, tol.pole_guard))
      raise(errc::pole, "Phi: normalizer St(x) vanishes");
  for (Complex u : {tz / w.at, tz / w.bt, tz / w.ct, tz / w.dt})
    if (detail::near_nonpos_qpower(u, Q, tol.pole_guard))
      raise(errc::pole, "Phi: normalizer St_dual(z) vanishes");
  SeriesValue psi = Psi_core(Q, qx, qz, w.a, w.b, w.c, w.d, w.at, tol, route);
  return W_fn(x, z, p) * psi / (St(x, p, tol) * St_dual(z, p, tol));
}

// c-function: ratio of theta products normalized by the plane-wave weight;
// s-periodic in both arguments and vanishing on the spectral lattice
// z = kappa + upsilon + n s.
inline SeriesValue cfun(Complex x, Complex z, const HeckeParams& p,
                        const Tolerance& tol) {
  AWParams w = p.aw();
  double Q = p.qs();
  Complex qx = qpow(p.q, x), qz = qpow(p.q, z);
  Complex u1 = 1.0 / (qz * qz), u2 = w.d * qx;
  if (detail::near_theta_zero(u1, Q, tol.pole_guard) ||
      detail::near_theta_zero(u2, Q, tol.pole_guard))
    raise(errc::pole, "c: denominator theta vanishes");
  SeriesValue num = theta_multi(
      {w.at / qz, w.bt / qz, w.ct / qz, w.d * qx / (w.at * qz)}, Q, tol);
  SeriesValue den = theta_multi({u1, u2}, Q, tol);
  return num / (W_fn(x, z, p) * den);
}

// c-normalized eigenfunction.
inline SeriesValue Phi_tilde(Complex x, Complex z, const HeckeParams& p,
                             const Tolerance& tol) {
  return cfun(x, z, p, tol) * Phi(x, z, p, tol);
}

namespace detail {

// Direct single-sum form of the Askey-Wilson function, manifestly even in x;
// converges for |q^{s-z} at / (a d)| < 0.9 or when the spectral argument
// terminates the sum.
inline SeriesValue E_direct(Complex x, Complex z, const HeckeParams& p,
                            const Tolerance& tol) {
  AWParams w = p.aw();
  double Q = p.qs();
  Complex qx = qpow(p.q, x), qz = qpow(p.q, z);
  Complex arg = Q * w.at / (qz * w.a * w.d);
  bool terminates =
      terminating_index(w.at * qz, Q, tol.pole_guard, tol.term_cap) >= 0;
  if (std::abs(arg) >= 0.9 && !terminates)
    raise(errc::convergence_region, "E: argument outside the single-sum region");
  Complex den_args[] = {Q * qx / w.d, Q / (w.d * qx),
                        Q * qz * w.at / (w.a * w.d),
                        w.a * w.a * w.b * w.c * qz / w.at};
  for (Complex u : den_args)
    if (near_nonpos_qpower(u, Q, tol.pole_guard))
      raise(errc::pole, "E: prefactor denominator vanishes");
  SeriesValue num = qpochhammer_multi(
      {w.at * Q * qz / (w.d * qx), w.at * Q * qz * qx / w.d, w.a * w.b,
       w.a * w.c, Q * w.a / w.d},
      Q, tol);
  SeriesValue den = qpochhammer_multi(
      {den_args[0], den_args[1], den_args[2], den_args[3]}, Q, tol);
  SeriesValue sum = w8_7(
      w.a * w.a * w.b * w.c * qz / (w.at * Q),
      {w.a * qx, w.a / qx, w.at * qz, w.bt * qz, w.ct * qz}, Q, arg, tol);
  return num / den * sum;
}

}  // namespace detail

// Askey-Wilson function.  Evaluation cascade: the direct sum at (x, z), its
// z-reflection, the dual form at (z, x) and (z, -x) (evenness in x makes an
// x-reflection redundant), and finally the expansion over the asymptotically
// free basis with c-function coefficients.
inline SeriesValue E_aw(Complex x, Complex z, const HeckeParams& p,
                        const Tolerance& tol, ERoute route = ERoute::automatic) {
  HeckeParams pd = dual(p);
  struct Candidate {
    Complex u, v;
    const HeckeParams* pp;
  } cands[] = {{x, z, &p}, {x, -z, &p}, {z, x, &pd}, {z, -x, &pd}};
  for (const Candidate& c : cands) {
    try {
      return detail::E_direct(c.u, c.v, *c.pp, tol);
    } catch (const eval_error&) {
    }
  }
  if (route == ERoute::series_only)
    raise(errc::unreachable, "E: no single-sum route at this point");
  try {
    return cfun(x, z, p, tol) * Phi(x, z, p, tol) +
           cfun(x, -z, p, tol) * Phi(x, -z, p, tol);
  } catch (const eval_error&) {
  }
  raise(errc::unreachable, "E: no evaluation route at this point");
}

// Askey-Wilson polynomial, normalized to P_n(x) = 1 at n = 0: terminating
// balanced series with numerator parameters (q^{-ns}, q^{(n-1)s} abcd,
// a q^x, a q^{-x}) over denominators (ab, ac, ad), base and argument q^s.
inline SeriesValue aw_polynomial(int n, Complex x, const HeckeParams& p,
                                 const Tolerance& tol) {
  if (n < 0) raise(errc::domain_error, "P_n: negative degree");
  AWParams w = p.aw();
  double Q = p.qs();
  Complex qx = qpow(p.q, x);
  for (Complex u : {w.a * w.b, w.a * w.c, w.a * w.d}) {
    int m = detail::terminating_index(u, Q, tol.pole_guard, tol.term_cap);
    if (m >= 0 && m <= n - 1)
      raise(errc::pole, "P_n: denominator parameter degenerates");
  }
  std::vector<Complex> num = {std::pow(Q, -n),
                              std::pow(Q, n - 1) * w.a * w.b * w.c * w.d,
                              w.a * qx, w.a / qx};
  std::vector<Complex> den = {w.a * w.b, w.a * w.c, w.a * w.d};
  double peak = 0.0;
  Complex v = detail::phi_terminating<double>(num, den, Q, Complex{Q, 0.0},
                                              n + 1, &peak);
  SeriesValue r = make_exact(v);
  r.terms_used = n + 1;
  r.cond = std::max(1.0, peak / std::max(std::abs(v), 1e-300));
  return r;
}

}  // namespace qvwp
