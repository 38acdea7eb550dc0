#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "types.hpp"

namespace qvwp {

// Principal-branch power of a real base q in (0,1).
inline Complex qpow(double q, Complex x) {
  if (!(q > 0.0 && q < 1.0)) raise(errc::domain_error, "qpow: q outside (0,1)");
  return std::exp(x * std::log(q));
}

inline double qpow(double q, double x) {
  if (!(q > 0.0 && q < 1.0)) raise(errc::domain_error, "qpow: q outside (0,1)");
  return std::pow(q, x);
}

namespace detail {

inline void check_base(double q) {
  if (!(q > 0.0 && q < 1.0))
    raise(errc::domain_error, "series base outside (0,1)");
}

// Nearest point of the lattice {Q^k : k integer} to u, as the integer k and
// the relative distance |u / Q^k - 1|.  Computed in log space so that very
// large and very small |u| stay exact.
struct QPowerFit {
  long long k = 0;
  double rel = std::numeric_limits<double>::infinity();
};

inline QPowerFit nearest_qpower(Complex u, double Q) {
  QPowerFit fit;
  double m = std::abs(u);
  if (!(m > 0.0) || !std::isfinite(m)) return fit;
  double lq = std::log(Q);
  double k = std::round(std::log(m) / lq);
  fit.k = static_cast<long long>(k);
  double t = std::exp(std::log(m) - k * lq);
  fit.rel = std::abs(std::polar(t, std::arg(u)) - Complex{1.0, 0.0});
  return fit;
}

// u within guard of Q^{-m} for some m >= 0, i.e. a zero of (u; Q)_inf.
inline bool near_nonpos_qpower(Complex u, double Q, double guard) {
  QPowerFit f = nearest_qpower(u, Q);
  return f.rel <= guard && f.k <= 0;
}

// u within guard of any integer power of Q, i.e. a zero of theta(u; Q).
inline bool near_theta_zero(Complex u, double Q, double guard) {
  QPowerFit f = nearest_qpower(u, Q);
  return f.rel <= guard;
}

// If a is within guard of Q^{-n} for some 0 <= n <= cap, the series whose
// numerator carries (a; Q)_j terminates after n + 1 terms; returns that n,
// or -1 when a is not a terminating parameter.
inline int terminating_index(Complex a, double Q, double guard, int cap) {
  QPowerFit f = nearest_qpower(a, Q);
  if (f.rel <= guard && f.k <= 0 && -f.k <= cap)
    return static_cast<int>(-f.k);
  return -1;
}

// Terminating basic hypergeometric sum in a caller-chosen precision.  Both
// sides of the terminating quadratic transformations suffer cancellation
// between large intermediate terms, so the identity checker instantiates
// this at long double.
template <typename Real>
std::complex<Real> phi_terminating(const std::vector<std::complex<Real>>& num,
                                   const std::vector<std::complex<Real>>& den,
                                   Real q, std::complex<Real> z, int n_terms,
                                   Real* peak_out = nullptr) {
  using C = std::complex<Real>;
  C sum{0, 0}, term{1, 0};
  Real qj{1};
  Real peak{0};
  for (int j = 0;; ++j) {
    sum += term;
    peak = std::max({peak, std::abs(term), std::abs(sum)});
    if (j + 1 >= n_terms) break;
    C ratio = z;
    for (const C& a : num) ratio *= (C{1, 0} - a * qj);
    ratio /= (C{1, 0} - C{q * qj, 0});
    for (const C& b : den) ratio /= (C{1, 0} - b * qj);
    term *= ratio;
    qj *= q;
  }
  if (peak_out) *peak_out = peak;
  return sum;
}

}  // namespace detail

// (a; q)_n, exact finite product.
inline SeriesValue qpochhammer(Complex a, double q, int n) {
  detail::check_base(q);
  if (n < 0) raise(errc::domain_error, "qpochhammer: negative length");
  Complex p{1.0, 0.0};
  Complex aq = a;
  double cond = 1.0;
  for (int i = 0; i < n; ++i) {
    Complex f = Complex{1.0, 0.0} - aq;
    cond = std::max(cond, (1.0 + std::abs(aq)) / std::max(std::abs(f), 1e-300));
    p *= f;
    aq *= q;
  }
  SeriesValue r = make_exact(p);
  r.terms_used = n;
  r.cond = cond;
  return r;
}

// (a; q)_inf.  Multiplies factors until the logarithmic tail bound
// sum_{i>=N} 2|a q^i| / (1 - q), valid once |a q^N| <= 1/2, drops below a
// fraction of rel_tol.
inline SeriesValue qpochhammer_inf(Complex a, double q, const Tolerance& tol) {
  detail::check_base(q);
  const double target = tol.rel_tol / 16.0;
  Complex p{1.0, 0.0};
  Complex aq = a;
  int i = 0;
  double cond = 1.0;
  for (;; ++i) {
    double m = std::abs(aq);
    if (m <= 0.5 && 2.0 * m / (1.0 - q) <= target) break;
    if (i >= tol.term_cap)
      raise(errc::non_convergence, "qpochhammer_inf: term cap reached");
    Complex f = Complex{1.0, 0.0} - aq;
    cond = std::max(cond, (1.0 + m) / std::max(std::abs(f), 1e-300));
    p *= f;
    aq *= q;
  }
  SeriesValue r;
  r.value = p;
  r.terms_used = i;
  r.tail_estimate = std::abs(p) * std::expm1(2.0 * std::abs(aq) / (1.0 - q));
  r.converged = true;
  r.cond = cond;
  return r;
}

inline SeriesValue qpochhammer_multi(const std::vector<Complex>& args, double q,
                                     const Tolerance& tol) {
  SeriesValue r = make_exact({1.0, 0.0});
  for (const Complex& a : args) r = r * qpochhammer_inf(a, q, tol);
  return r;
}

inline SeriesValue qpochhammer_multi(const std::vector<Complex>& args, double q,
                                     int n) {
  SeriesValue r = make_exact({1.0, 0.0});
  for (const Complex& a : args) r = r * qpochhammer(a, q, n);
  return r;
}

// theta(u; q) = (u; q)_inf (q/u; q)_inf.
inline SeriesValue theta(Complex u, double q, const Tolerance& tol) {
  detail::check_base(q);
  if (u == Complex{0.0, 0.0}) raise(errc::domain_error, "theta: u = 0");
  return qpochhammer_inf(u, q, tol) * qpochhammer_inf(q / u, q, tol);
}

inline SeriesValue theta_multi(const std::vector<Complex>& args, double q,
                               const Tolerance& tol) {
  SeriesValue r = make_exact({1.0, 0.0});
  for (const Complex& u : args) r = r * theta(u, q, tol);
  return r;
}

// Generic basic hypergeometric series
//   sum_j  prod(num; q)_j / ( (q; q)_j prod(den; q)_j )
//          * ( (-1)^j q^(j(j-1)/2) )^(1 + #den - #num) * z^j.
// Terminating numerator parameters are detected against the q-power lattice
// (within pole_guard) and make the sum exact; otherwise |z| < 1 (or a
// positive lattice exponent surplus) is required.
inline SeriesValue phi_series(const std::vector<Complex>& num,
                              const std::vector<Complex>& den, double q,
                              Complex z, const Tolerance& tol) {
  detail::check_base(q);
  const int e = 1 + static_cast<int>(den.size()) - static_cast<int>(num.size());

  int n_term = -1;
  for (const Complex& a : num) {
    int n = detail::terminating_index(a, q, tol.pole_guard, tol.term_cap);
    if (n >= 0 && (n_term < 0 || n < n_term)) n_term = n;
  }
  for (const Complex& b : den) {
    detail::QPowerFit f = detail::nearest_qpower(b, q);
    bool zero_hit = f.rel <= tol.pole_guard && f.k <= 0 &&
                    (n_term < 0 || -f.k <= n_term - 1);
    if (zero_hit)
      raise(errc::pole, "phi_series: denominator parameter on the q-power lattice");
  }
  if (n_term < 0) {
    if (e < 0)
      raise(errc::convergence_region, "phi_series: divergent parameter surplus");
    if (e == 0 && std::abs(z) >= 1.0)
      raise(errc::convergence_region, "phi_series: |z| >= 1");
  }
  if (z == Complex{0.0, 0.0}) return make_exact({1.0, 0.0});

  const double target = tol.rel_tol / 16.0;
  Complex sum{0.0, 0.0}, term{1.0, 0.0};
  double qj = 1.0;
  double peak = 0.0;
  int small_run = 0;
  auto final_cond = [&](double m) {
    return std::max(1.0, peak / std::max(m, 1e-300));
  };
  for (int j = 0;; ++j) {
    sum += term;
    peak = std::max({peak, std::abs(term), std::abs(sum)});
    if (n_term >= 0 && j == n_term) {
      SeriesValue r = make_exact(sum);
      r.terms_used = j + 1;
      r.cond = final_cond(std::abs(sum));
      return r;
    }
    if (j + 1 >= tol.term_cap)
      raise(errc::non_convergence, "phi_series: term cap reached");
    Complex ratio = z;
    for (const Complex& a : num) ratio *= (Complex{1.0, 0.0} - a * qj);
    ratio /= (1.0 - q * qj);
    for (const Complex& b : den) ratio /= (Complex{1.0, 0.0} - b * qj);
    if (e != 0) ratio *= std::pow(Complex{-qj, 0.0}, e);
    term *= ratio;
    qj *= q;

    double scale = std::max(1.0, std::abs(sum));
    small_run = (std::abs(term) <= target * scale) ? small_run + 1 : 0;
    if (small_run >= 3) {
      double rhat = std::min(0.995, std::max(std::abs(z), std::abs(ratio)));
      if (e > 0) rhat = std::min(rhat, std::abs(ratio));
      double tail = std::abs(term) / (1.0 - rhat);
      if (tail <= 0.5 * tol.rel_tol * scale) {
        SeriesValue r;
        r.value = sum;
        r.terms_used = j + 1;
        r.tail_estimate = tail;
        r.converged = tail <= tol.rel_tol * std::max(1.0, std::abs(sum));
        r.cond = final_cond(std::abs(sum));
        return r;
      }
    }
  }
}

// Very-well-poised 8-parameter series
//   sum_r (1 - a0 q^(2r)) / (1 - a0) * (a0; q)_r / (q; q)_r
//         * prod_j (a_j; q)_r / (q a0 / a_j; q)_r * z^r,     j = 1..5.
inline SeriesValue w8_7(Complex a0, const std::vector<Complex>& a, double q,
                        Complex z, const Tolerance& tol) {
  detail::check_base(q);
  if (a.size() != 5) raise(errc::domain_error, "w8_7: needs 5 parameters");
  {
    detail::QPowerFit f = detail::nearest_qpower(a0, q);
    if (f.rel <= tol.pole_guard && f.k == 0)
      raise(errc::pole, "w8_7: leading parameter at 1");
  }

  int n_term = detail::terminating_index(a0, q, tol.pole_guard, tol.term_cap);
  for (const Complex& aj : a) {
    int n = detail::terminating_index(aj, q, tol.pole_guard, tol.term_cap);
    if (n >= 0 && (n_term < 0 || n < n_term)) n_term = n;
  }
  for (const Complex& aj : a) {
    detail::QPowerFit f = detail::nearest_qpower(q * a0 / aj, q);
    bool zero_hit = f.rel <= tol.pole_guard && f.k <= 0 &&
                    (n_term < 0 || -f.k <= n_term - 1);
    if (zero_hit)
      raise(errc::pole, "w8_7: denominator parameter on the q-power lattice");
  }
  if (n_term < 0 && std::abs(z) >= 1.0)
    raise(errc::convergence_region, "w8_7: |z| >= 1");
  if (z == Complex{0.0, 0.0}) return make_exact({1.0, 0.0});

  const double target = tol.rel_tol / 16.0;
  const Complex one{1.0, 0.0};
  Complex sum{0.0, 0.0};
  Complex base{1.0, 0.0};  // (a0;q)_r / (q;q)_r * prod_j (...) * z^r
  double q2r = 1.0, qr = 1.0;
  double peak = 0.0;
  int small_run = 0;
  auto final_cond = [&](double m) {
    return std::max(1.0, peak / std::max(m, 1e-300));
  };
  for (int r = 0;; ++r) {
    Complex term = base * (one - a0 * q2r) / (one - a0);
    sum += term;
    peak = std::max({peak, std::abs(term), std::abs(sum)});
    if (n_term >= 0 && r == n_term) {
      SeriesValue res = make_exact(sum);
      res.terms_used = r + 1;
      res.cond = final_cond(std::abs(sum));
      return res;
    }
    if (r + 1 >= tol.term_cap)
      raise(errc::non_convergence, "w8_7: term cap reached");
    Complex ratio = z * (one - a0 * qr) / (1.0 - q * qr);
    for (const Complex& aj : a)
      ratio *= (one - aj * qr) / (one - (q * a0 / aj) * qr);
    base *= ratio;
    qr *= q;
    q2r *= q * q;

    double next_mag = std::abs(base * (one - a0 * q2r) / (one - a0));
    double scale = std::max(1.0, std::abs(sum));
    small_run = (next_mag <= target * scale) ? small_run + 1 : 0;
    if (small_run >= 3) {
      double mag = std::abs(term);
      double rstep = mag > 0.0 ? next_mag / mag : 0.0;
      double rhat = std::min(0.995, std::max(std::abs(z), rstep));
      double tail = next_mag / (1.0 - rhat);
      if (tail <= 0.5 * tol.rel_tol * scale) {
        SeriesValue res;
        res.value = sum;
        res.terms_used = r + 1;
        res.tail_estimate = tail;
        res.converged = tail <= tol.rel_tol * std::max(1.0, std::abs(sum));
        res.cond = final_cond(std::abs(sum));
        return res;
      }
    }
  }
}

}  // namespace qvwp
