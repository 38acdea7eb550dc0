#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qvwp {

using Complex = std::complex<double>;

// Failure categories surfaced by every evaluation routine.  The CLI maps
// them onto its diagnostic exit path; the identity-check harness treats a
// raised eval_error as "reject this sample and redraw".
enum class errc {
  domain_error,        // argument outside the function's domain (q, zero u, ...)
  pole,                // evaluation point within pole_guard of a pole
  convergence_region,  // series argument outside its region of convergence
  non_convergence,     // term cap reached before the tail bound was met
  degenerate,          // parameter degeneracy blocks every evaluation route
  unreachable,         // no convergence region or fallback covers the point
};

inline const char* errc_name(errc k) noexcept {
  switch (k) {
    case errc::domain_error: return "domain_error";
    case errc::pole: return "pole";
    case errc::convergence_region: return "convergence_region";
    case errc::non_convergence: return "non_convergence";
    case errc::degenerate: return "degenerate";
    case errc::unreachable: return "unreachable";
  }
  return "unknown";
}

class eval_error : public std::runtime_error {
 public:
  eval_error(errc kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  errc kind() const noexcept { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void raise(errc k, const std::string& msg) {
  throw eval_error(k, std::string(errc_name(k)) + ": " + msg);
}

// Truncation and guard controls shared by all series engines.
struct Tolerance {
  double rel_tol = 1e-13;    // target relative truncation error of a result
  int term_cap = 10000;      // hard bound on summed terms / product factors
  double pole_guard = 1e-8;  // relative distance treated as "on a pole"
};

// A computed value together with its convergence diagnostics.  Individual
// engines aim for a fraction of rel_tol so that products of several factors
// still satisfy the contract: converged implies
// tail_estimate <= rel_tol * max(1, |value|).
struct SeriesValue {
  Complex value{0.0, 0.0};
  int terms_used = 0;
  double tail_estimate = 0.0;  // absolute bound on the omitted remainder
  bool converged = true;
  // Cancellation certificate: largest intermediate magnitude (term or
  // partial sum) divided by the final magnitude.  A value near one means
  // the sum never exceeded its result; large values flag digit loss.
  double cond = 1.0;

  double rel_tail() const {
    double m = std::abs(value);
    return m > 0.0 ? tail_estimate / m : tail_estimate;
  }

  // First-order bound on the relative rounding error of the summation,
  // assuming IEEE double arithmetic per retained term.
  double rounding() const {
    return cond * static_cast<double>(std::max(terms_used, 1)) * 2.3e-16;
  }
};

inline SeriesValue make_exact(Complex v) { return SeriesValue{v, 0, 0.0, true}; }

// Diagnostic-merging arithmetic.  Relative tails add to first order under
// multiplication and division; absolute tails add under addition.
inline SeriesValue operator*(const SeriesValue& a, const SeriesValue& b) {
  SeriesValue r;
  r.value = a.value * b.value;
  r.terms_used = a.terms_used + b.terms_used;
  r.tail_estimate = std::abs(r.value) * (a.rel_tail() + b.rel_tail());
  r.converged = a.converged && b.converged;
  r.cond = std::max(a.cond, b.cond);
  return r;
}

inline SeriesValue operator/(const SeriesValue& a, const SeriesValue& b) {
  SeriesValue r;
  r.value = a.value / b.value;
  r.terms_used = a.terms_used + b.terms_used;
  r.tail_estimate = std::abs(r.value) * (a.rel_tail() + b.rel_tail());
  r.converged = a.converged && b.converged;
  r.cond = std::max(a.cond, b.cond);
  return r;
}

inline SeriesValue operator*(Complex s, const SeriesValue& a) {
  SeriesValue r = a;
  r.value = s * a.value;
  r.tail_estimate = std::abs(s) * a.tail_estimate;
  return r;
}

namespace detail {
inline double merged_cond(const SeriesValue& a, const SeriesValue& b,
                          Complex result) {
  double num = std::abs(a.value) * a.cond + std::abs(b.value) * b.cond;
  double den = std::max(std::abs(result), 1e-300);
  return std::max(1.0, num / den);
}
}  // namespace detail

inline SeriesValue operator+(const SeriesValue& a, const SeriesValue& b) {
  SeriesValue r;
  r.value = a.value + b.value;
  r.terms_used = a.terms_used + b.terms_used;
  r.tail_estimate = a.tail_estimate + b.tail_estimate;
  r.converged = a.converged && b.converged;
  r.cond = detail::merged_cond(a, b, r.value);
  return r;
}

inline SeriesValue operator-(const SeriesValue& a, const SeriesValue& b) {
  SeriesValue r;
  r.value = a.value - b.value;
  r.terms_used = a.terms_used + b.terms_used;
  r.tail_estimate = a.tail_estimate + b.tail_estimate;
  r.converged = a.converged && b.converged;
  r.cond = detail::merged_cond(a, b, r.value);
  return r;
}

}  // namespace qvwp
