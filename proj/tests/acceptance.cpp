// Acceptance gate: one [PASS]/[FAIL] line per criterion, nonzero exit if any
// criterion fails.  Invoked with the CLI path as argv[1].

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "qvwp/qvwp.hpp"

namespace {

using qvwp::Complex;

int failures = 0;

void criterion(int idx, bool ok, const std::string& what) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", idx,
              what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cmd(const std::string& cmd) {
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) {
    std::perror("popen");
    std::exit(1);
  }
  RunResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.code = (st >= 0 && WIFEXITED(st)) ? WEXITSTATUS(st) : -1;
  return r;
}

double rel_diff(Complex a, Complex b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
}

struct Draw {
  std::mt19937_64 g;
  explicit Draw(std::uint64_t seed) : g(seed) {}
  double uniform(double lo, double hi) {
    double u = static_cast<double>(g() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(g() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  Complex arg(double q, double re_lo = -2.0, double re_hi = 2.0) {
    double period = 2.0 * std::numbers::pi / std::abs(std::log(q));
    return {uniform(re_lo, re_hi), uniform(-0.3, 0.3) * period};
  }
  Complex annulus(double r_lo, double r_hi) {
    return std::polar(uniform(r_lo, r_hi),
                      uniform(0.0, 2.0 * std::numbers::pi));
  }
};

// Criterion 1 and 9 share the spawned full-suite JSON runs.
void run_criterion_1(const std::string& cli) {
  auto t0 = std::chrono::steady_clock::now();
  RunResult r =
      run_cmd(cli + " check all --seed 42 --n-points 100 --format json");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  bool ok = r.code == 0;
  int count = 0;
  if (ok) {
    nlohmann::json j = nlohmann::json::parse(r.out, nullptr, false);
    ok = !j.is_discarded() && j.is_array();
    if (ok) {
      count = static_cast<int>(j.size());
      for (const auto& rep : j)
        ok = ok && rep["passed"].get<bool>() &&
             rep["max_rel_residual"].get<double>() <= 1e-8;
    }
  }
  criterion(1, ok && count == 22 && secs <= 120.0,
            "full identity suite passes (22 checks, seed 42, 100 points, " +
                std::to_string(secs).substr(0, 5) + " s)");
}

void run_criterion_2() {
  qvwp::Tolerance tol;
  bool ok = true;
  double worst = 0.0;
  int done = 0;
  for (double q : {0.3, 0.5, 0.7}) {
    for (int sden : {1, 2}) {
      qvwp::SamplePolicy pol;
      pol.q_min = pol.q_max = q;
      pol.s_choices = {qvwp::Rational(sden)};
      pol.n_points = 17;
      pol.seed = 42 + static_cast<std::uint64_t>(done);
      qvwp::IdentityReport rep = qvwp::run_check("eigen_phi", pol, tol);
      ok = ok && rep.passed && rep.max_rel_residual <= 1e-8;
      worst = std::max(worst, rep.max_rel_residual);
      done += rep.points_evaluated;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "eigenvalue equation residual <= 1e-8 over q grid x s grid "
                "(%d points, worst %.2e)",
                done, worst);
  criterion(2, ok && done >= 100, buf);
}

void run_criterion_3() {
  qvwp::Tolerance tol;
  qvwp::SamplePolicy pol;
  pol.n_points = 100;
  bool ok = true;
  double worst = 0.0;
  for (const char* id : {"quadratic_phi", "qtrans_8W7", "qtrans_8W7_dual"}) {
    qvwp::IdentityReport rep = qvwp::run_check(id, pol, tol);
    ok = ok && rep.passed && rep.max_rel_residual <= 1e-8;
    worst = std::max(worst, rep.max_rel_residual);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "quadratic transformation agrees in eigenfunction and raw "
                "series forms (100 points each, worst %.2e)",
                worst);
  criterion(3, ok, buf);
}

void run_criterion_4() {
  qvwp::Tolerance tol;
  qvwp::SamplePolicy pol;
  pol.n_points = 100;
  bool ok = true;
  double worst = 0.0;
  for (const char* id : {"poly_reduction", "E_poly"}) {
    qvwp::IdentityReport rep = qvwp::run_check(id, pol, tol);
    ok = ok && rep.passed && rep.max_rel_residual <= 1e-9;
    worst = std::max(worst, rep.max_rel_residual);
  }
  Draw rng(4242);
  for (int i = 0; i < 50 && ok; ++i) {
    qvwp::HeckeParams p;
    p.q = rng.uniform(0.2, 0.8);
    p.kappa = rng.uniform(-0.7, 0.7);
    p.lambda = rng.uniform(-0.7, 0.7);
    p.upsilon = rng.uniform(-0.7, 0.7);
    p.varsigma = rng.uniform(-0.7, 0.7);
    p.s = qvwp::Rational(rng.uniform_int(1, 2));
    Complex x = rng.arg(p.q);
    try {
      ok = ok && qvwp::aw_polynomial(0, x, p, tol).value == Complex{1.0, 0.0};
      qvwp::AWParams w = p.aw();
      double Q = p.qs();
      Complex qx = qvwp::qpow(p.q, x);
      Complex abcd = w.a * w.b * w.c * w.d;
      Complex p1 = 1.0 + Q * (1.0 - 1.0 / Q) * (1.0 - abcd) *
                             (1.0 - w.a * qx) * (1.0 - w.a / qx) /
                             ((1.0 - Q) * (1.0 - w.a * w.b) *
                              (1.0 - w.a * w.c) * (1.0 - w.a * w.d));
      ok = ok && rel_diff(qvwp::aw_polynomial(1, x, p, tol).value, p1) <= 1e-13;
    } catch (const qvwp::eval_error&) {
      --i;  // inadmissible draw; take another
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "polynomial reductions for degrees 0..4 at 1e-9 with exact "
                "degree-0/1 closed forms (worst %.2e)",
                worst);
  criterion(4, ok, buf);
}

void run_criterion_5() {
  qvwp::Tolerance tol;
  qvwp::SamplePolicy pol;
  pol.n_points = 50;
  pol.n_max = 6;
  qvwp::IdentityReport rep = qvwp::run_check("singh", pol, tol);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "terminating quadratic transformation exact to 1e-11 for "
                "degrees 0..6 over 50 draws (worst %.2e)",
                rep.max_rel_residual);
  criterion(5, rep.passed && rep.max_rel_residual <= 1e-11, buf);
}

void run_criterion_6() {
  qvwp::Tolerance tol;
  qvwp::SamplePolicy pol;
  pol.n_points = 200;
  bool ok = true;
  double worst = 0.0;
  for (const char* id : {"slater_theta", "theta_ident", "quadratic_c"}) {
    qvwp::IdentityReport rep = qvwp::run_check(id, pol, tol);
    ok = ok && rep.passed && rep.max_rel_residual <= 1e-9;
    worst = std::max(worst, rep.max_rel_residual);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "theta-product identities hold to 1e-9 at 200 points each "
                "(worst %.2e)",
                worst);
  criterion(6, ok, buf);
}

void run_criterion_7() {
  using qvwp::detail::error_bound;
  qvwp::Tolerance tol;
  static const double tuples[8][4] = {
      {0, 0, 0, 0},   {.5, .5, 0, 0}, {.5, 0, .5, 0}, {.5, 0, 0, .5},
      {0, .5, .5, 0}, {0, .5, 0, .5}, {0, 0, .5, .5}, {.5, .5, .5, .5}};
  Draw rng(777);
  bool ok = true;
  double worst_c = 0.0, worst_rel = 0.0;
  // The eight base tuples, then twenty random integer-shifted variants.
  for (int cfg = 0; cfg < 28 && ok; ++cfg) {
    const double* t = tuples[cfg < 8 ? cfg : rng.uniform_int(0, 7)];
    bool shifted = cfg >= 8;
    bool done = false;
    for (int attempt = 0; attempt < 50 && !done; ++attempt) {
      qvwp::HeckeParams p;
      p.q = rng.uniform(0.2, 0.8);
      p.s = qvwp::Rational(rng.uniform_int(1, 2));
      double s = p.s_val();
      p.kappa = (t[0] + (shifted ? rng.uniform_int(-2, 2) : 0)) * s;
      p.lambda = (t[1] + (shifted ? rng.uniform_int(-2, 2) : 0)) * s;
      p.upsilon = (t[2] + (shifted ? rng.uniform_int(-2, 2) : 0)) * s;
      p.varsigma = (t[3] + (shifted ? rng.uniform_int(-2, 2) : 0)) * s;
      Complex x = rng.arg(p.q);
      Complex z = rng.arg(p.q);
      try {
        qvwp::HeckeParams pd = qvwp::dual(p);
        qvwp::SeriesValue cv = qvwp::cfun(x, z, p, tol);
        qvwp::SeriesValue cdv = qvwp::cfun(z, x, pd, tol);
        double cscale =
            std::max({1.0, std::abs(cv.value), std::abs(cdv.value)});
        if ((error_bound(cv) + error_bound(cdv)) / cscale > 5e-12) continue;
        double dc = std::abs(cv.value - cdv.value) / cscale;
        qvwp::SeriesValue A = qvwp::Phi_tilde(x, z, p, tol);
        qvwp::SeriesValue B = qvwp::Phi_tilde(z, x, pd, tol);
        qvwp::SeriesValue C = qvwp::Phi_tilde(-x, z, p, tol);
        qvwp::SeriesValue D = qvwp::Phi_tilde(x, -z, p, tol);
        qvwp::SeriesValue Ev = qvwp::E_aw(x, z, p, tol);
        qvwp::SeriesValue AC = A + C;
        double guard =
            std::max({error_bound(A) + error_bound(B),
                      error_bound(C) + error_bound(D),
                      error_bound(Ev) + error_bound(AC)});
        double scale = std::max(
            {std::abs(A.value), std::abs(B.value), std::abs(C.value),
             std::abs(D.value), std::abs(Ev.value), 1e-30});
        if (guard / scale > 5e-10) continue;
        double r = std::max({rel_diff(A.value, B.value),
                             rel_diff(C.value, D.value),
                             rel_diff(Ev.value, AC.value)});
        worst_c = std::max(worst_c, dc);
        worst_rel = std::max(worst_rel, r);
        ok = ok && dc <= 1e-10 && r <= 1e-8;
        done = true;
      } catch (const qvwp::eval_error&) {
      }
    }
    ok = ok && done;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "half-integer parameter families: c equals dual c (worst "
                "%.2e) and duality/reflection/sum relations hold (worst %.2e)",
                worst_c, worst_rel);
  criterion(7, ok, buf);
}

void run_criterion_8() {
  qvwp::Tolerance tol;
  Draw rng(31337);
  bool ok = true;
  double worst = 0.0;
  auto note = [&](double d) { worst = std::max(worst, d); return d <= 1e-10; };
  for (int i = 0; i < 100 && ok; ++i) {
    double q = rng.uniform(0.2, 0.9);
    Complex a = rng.annulus(0.05, 3.0);
    ok = ok && note(rel_diff(qvwp::qpochhammer_inf(a, q, tol).value,
                             oracle::poch_inf(a, q)));
  }
  for (int i = 0; i < 100 && ok; ++i) {
    double q = rng.uniform(0.2, 0.9);
    Complex u = rng.annulus(0.1, 3.0);
    try {
      ok = ok && note(rel_diff(qvwp::theta(u, q, tol).value,
                               oracle::theta(u, q)));
    } catch (const qvwp::eval_error&) {
      --i;
    }
  }
  for (int i = 0; i < 100 && ok; ++i) {
    double q = rng.uniform(0.2, 0.9);
    std::vector<Complex> num = {rng.annulus(0.2, 0.9), rng.annulus(0.2, 0.9)};
    std::vector<Complex> den = {rng.annulus(0.2, 0.9)};
    Complex z = rng.annulus(0.05, 0.8);
    try {
      ok = ok && note(rel_diff(qvwp::phi_series(num, den, q, z, tol).value,
                               oracle::phi_series(num, den, q, z)));
    } catch (const qvwp::eval_error&) {
      --i;
    }
  }
  for (int i = 0; i < 100 && ok; ++i) {
    double q = rng.uniform(0.2, 0.8);
    Complex a0 = rng.annulus(0.2, 0.8);
    std::vector<Complex> rest = {rng.annulus(0.3, 0.9), rng.annulus(0.3, 0.9),
                                 rng.annulus(0.3, 0.9), rng.annulus(0.3, 0.9),
                                 rng.annulus(0.3, 0.9)};
    Complex z = rng.annulus(0.05, 0.7);
    try {
      ok = ok && note(rel_diff(qvwp::w8_7(a0, rest, q, z, tol).value,
                               oracle::w8_7(a0, rest, q, z)));
    } catch (const qvwp::eval_error&) {
      --i;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "series engines match brute-force oracles to 1e-10 at 100 "
                "in-region points each (worst %.2e)",
                worst);
  criterion(8, ok, buf);
}

void run_criterion_9(const std::string& cli) {
  std::string cmd = cli + " check all --seed 42 --format json";
  RunResult r1 = run_cmd(cmd);
  RunResult r2 = run_cmd(cmd);
  criterion(9, r1.code == 0 && r1.out == r2.out && !r1.out.empty(),
            "two seed-42 full-suite runs emit byte-identical JSON");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli>\n");
    return 1;
  }
  const std::string cli = std::string("'") + argv[1] + "'";
  run_criterion_1(cli);
  run_criterion_2();
  run_criterion_3();
  run_criterion_4();
  run_criterion_5();
  run_criterion_6();
  run_criterion_7();
  run_criterion_8();
  run_criterion_9(cli);
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
