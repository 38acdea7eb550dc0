#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qvwp/operators.hpp"
#include "qvwp/params.hpp"
#include "qvwp/rational.hpp"

using qvwp::AWParams;
using qvwp::Complex;
using qvwp::HeckeParams;
using qvwp::Rational;

namespace {

const HeckeParams kRef{0.31, -0.24, 0.17, 0.41, 0.6, Rational(1)};
const Complex kX{0.63, 0.21};
const Complex kZ{-0.34, 0.15};

void check_close(Complex actual, Complex expected, double rtol,
                 double floor = 1.0) {
  double scale = std::max(std::abs(expected), floor);
  INFO("actual  = " << actual.real() << " + " << actual.imag() << "i");
  INFO("expected= " << expected.real() << " + " << expected.imag() << "i");
  REQUIRE(std::abs(actual - expected) <= rtol * scale);
}

}  // namespace

TEST_CASE("rational step arithmetic and parsing") {
  REQUIRE(Rational(4, 8) == Rational(1, 2));
  REQUIRE(Rational(-3, -6) == Rational(1, 2));
  REQUIRE(Rational(3, -6) == Rational(-1, 2));
  REQUIRE(Rational(2).str() == "2");
  REQUIRE(Rational(3, 2).str() == "3/2");
  REQUIRE(Rational::parse("3/2") == Rational(3, 2));
  REQUIRE(Rational::parse("2") == Rational(2));
  REQUIRE(Rational::parse("-1/4") == Rational(-1, 4));
  REQUIRE(Rational(1, 2).half() == Rational(1, 4));
  REQUIRE(Rational(3, 2).twice() == Rational(3));
  REQUIRE(Rational(1, 2).to_double() == 0.5);
  REQUIRE_THROWS_AS(Rational(1, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(Rational::parse("a/b"), std::invalid_argument);
  REQUIRE_THROWS_AS(Rational::parse("1/2/3"), std::invalid_argument);
  REQUIRE_THROWS_AS(Rational::parse(""), std::invalid_argument);
}

TEST_CASE("multiplicative parameters match the reference point") {
  AWParams w = kRef.aw();
  check_close(w.a, {0.9648739637716026468216, 0.0}, 1e-14);
  check_close(w.b, {-0.7550629973077781770445, 0.0}, 1e-14);
  check_close(w.c, {0.5759746246594943554382, 0.0}, 1e-14);
  check_close(w.d, {-0.8756273639382553139758, 0.0}, 1e-14);
  check_close(w.at, {0.7825509088837956595136, 0.0}, 1e-14);
}

TEST_CASE("dual parameter family is the lambda-upsilon swap") {
  AWParams w = kRef.aw();
  AWParams wd = qvwp::dual(kRef).aw();
  REQUIRE(w.at == wd.a);
  REQUIRE(w.bt == wd.b);
  REQUIRE(w.ct == wd.c);
  REQUIRE(w.dt == wd.d);
  REQUIRE(w.a == wd.at);
  REQUIRE(qvwp::dual(qvwp::dual(kRef)).lambda == kRef.lambda);
}

TEST_CASE("parameter products satisfy the defining relations") {
  AWParams w = kRef.aw();
  double q = kRef.q, s = kRef.s_val();
  check_close(w.at * w.at, std::pow(q, -s) * w.a * w.b * w.c * w.d, 1e-14);
  check_close(w.bt, w.a * w.b / w.at, 1e-14);
  check_close(w.ct, w.a * w.c / w.at, 1e-14);
  check_close(w.dt, w.a * w.d / w.at, 1e-14);
  check_close(w.a * w.b, {-std::pow(q, 2.0 * kRef.kappa), 0.0}, 1e-14);
  check_close(w.c * w.d, {-std::pow(q, s + 2.0 * kRef.upsilon), 0.0}, 1e-14);
}

TEST_CASE("parameter validation raises typed domain errors") {
  HeckeParams bad = kRef;
  bad.q = 1.2;
  REQUIRE_THROWS_AS(bad.validate(), qvwp::eval_error);
  bad = kRef;
  bad.s = Rational(0);
  REQUIRE_THROWS_AS(bad.validate(), qvwp::eval_error);
  bad.s = Rational(-1);
  REQUIRE_THROWS_AS(bad.validate(), qvwp::eval_error);
}

TEST_CASE("specializations set the expected parameter tuples") {
  HeckeParams pj = qvwp::specialize_J(0.3, -0.2, 0.5, Rational(2));
  REQUIRE(pj.upsilon == 0.3);
  REQUIRE(pj.varsigma == -0.2);
  REQUIRE(pj.s == Rational(2));
  HeckeParams pr = qvwp::specialize_R(0.3, -0.2, 0.5, Rational(2));
  REQUIRE(pr.upsilon == 0.0);
  REQUIRE(pr.varsigma == 0.0);
  REQUIRE(pr.s == Rational(1));
}

TEST_CASE("operator eigenvalue expression") {
  Complex z{0.4, -0.2};
  Complex qz = qvwp::qpow(kRef.q, z);
  Complex at = kRef.aw().at;
  check_close(qvwp::eigenvalue(z, kRef), qz + 1.0 / qz - at - 1.0 / at, 1e-14);
}

TEST_CASE("shift coefficient matches the reference point") {
  check_close(qvwp::coeff_A(kX, kRef),
              {1.702584669492252057942, -0.1448693801624887199076}, 1e-13);
}

TEST_CASE("difference operator annihilates constants") {
  qvwp::GridFunction one = [](Complex) { return Complex{2.5, -1.0}; };
  Complex v = qvwp::apply_D(one, kX, kRef);
  REQUIRE(std::abs(v) <= 1e-13);
}

TEST_CASE("difference operator is linear") {
  qvwp::GridFunction f = [&](Complex t) { return qvwp::qpow(kRef.q, t); };
  qvwp::GridFunction g = [&](Complex t) { return qvwp::qpow(kRef.q, -t); };
  qvwp::GridFunction h = [&](Complex t) { return f(t) + 3.0 * g(t); };
  Complex lhs = qvwp::apply_D(h, kX, kRef);
  Complex rhs =
      qvwp::apply_D(f, kX, kRef) + 3.0 * qvwp::apply_D(g, kX, kRef);
  check_close(lhs, rhs, 1e-13);
}

TEST_CASE("half-step operator splits into shift part plus constant") {
  // With the spectral pair set to zero at half step, two of the four
  // geometric factors cancel the extra pole, and the half-step operator is
  // the resulting two-factor difference operator plus q^kappa + q^{-kappa}.
  HeckeParams pl;
  pl.kappa = 0.27;
  pl.lambda = -0.33;
  pl.q = 0.52;
  pl.s = Rational(2);
  HeckeParams ph;
  ph.kappa = pl.kappa;
  ph.lambda = pl.lambda;
  ph.upsilon = 0.0;
  ph.varsigma = 0.0;
  ph.q = pl.q;
  ph.s = pl.s.half();
  qvwp::GridFunction f = [&](Complex t) {
    Complex e = qvwp::qpow(pl.q, 0.5 * t);
    return 1.0 + e + 1.0 / e;
  };
  Complex x{0.37, 0.09};
  Complex lhs = qvwp::apply_L(f, x, pl);
  double qk = std::pow(pl.q, pl.kappa);
  Complex rhs = qvwp::apply_D(f, x, ph) + (qk + 1.0 / qk) * f(x);
  check_close(lhs, rhs, 1e-13);
}

TEST_CASE("half-step coefficient pair sums to the spectral constant") {
  HeckeParams pl;
  pl.kappa = 0.27;
  pl.lambda = -0.33;
  pl.q = 0.52;
  pl.s = Rational(2);
  qvwp::GridFunction one = [](Complex) { return Complex{1.0, 0.0}; };
  Complex x{0.37, 0.09};
  double qk = std::pow(pl.q, pl.kappa);
  check_close(qvwp::apply_L(one, x, pl), {qk + 1.0 / qk, 0.0}, 1e-13);
}

TEST_CASE("operators raise pole errors on the shift-denominator lattice") {
  REQUIRE_THROWS_AS(qvwp::coeff_A({0.0, 0.0}, kRef), qvwp::eval_error);
  qvwp::GridFunction one = [](Complex) { return Complex{1.0, 0.0}; };
  try {
    qvwp::apply_L(one, {0.0, 0.0}, kRef);
    FAIL("expected a pole error");
  } catch (const qvwp::eval_error& e) {
    REQUIRE(e.kind() == qvwp::errc::pole);
  }
  try {
    qvwp::coeff_A({-0.5 * kRef.s_val(), 0.0}, kRef);
    FAIL("expected a pole error");
  } catch (const qvwp::eval_error& e) {
    REQUIRE(e.kind() == qvwp::errc::pole);
  }
}
