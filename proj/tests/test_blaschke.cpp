#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "schur/blaschke.hpp"

using namespace schur;

namespace {

Eigen::VectorXcd random_unit_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd u(n);
  for (int i = 0; i < n; ++i) u(i) = Complex(g(rng), g(rng));
  return u.normalized();
}

}  // namespace

TEST_CASE("elementary factor is unitary on the boundary and kills its direction") {
  std::mt19937_64 rng(21);
  for (Domain dom : {Domain::Disc, Domain::HalfPlane}) {
    const Complex alpha = (dom == Domain::Disc) ? Complex(0.4, -0.3) : Complex(0.7, 0.5);
    const Eigen::VectorXcd u = random_unit_vector(rng, 3);
    BPProduct b(3, dom);
    b.push_back({alpha, u * u.adjoint()});

    CHECK(b.bp_degree() == 1);
    CHECK((b.bp_eval(alpha) * u).norm() < 1e-12);
    for (int k = 0; k < 8; ++k) {
      const Complex t = boundary_point(dom, (k + 0.5) / 8.0);
      const MatrixXcd V = b.bp_eval(t);
      CHECK((V.adjoint() * V - MatrixXcd::Identity(3, 3)).norm() < 1e-10);
    }

    // Rational form agrees pointwise.
    const RationalMatrix r = b.to_rational();
    for (Complex z : {Complex(0.1, 0.2), Complex(1.5, -0.7)})
      CHECK((r.eval(z) - b.bp_eval(z)).norm() < 1e-10);
  }
}

TEST_CASE("product evaluation composes factors left to right with the tail") {
  std::mt19937_64 rng(22);
  BPProduct b(2, Domain::Disc);
  const Eigen::VectorXcd u1 = random_unit_vector(rng, 2);
  const Eigen::VectorXcd u2 = random_unit_vector(rng, 2);
  b.push_back({Complex(0.3, 0.0), u1 * u1.adjoint()});
  b.push_back({Complex(-0.2, 0.4), u2 * u2.adjoint()});
  MatrixXcd tail(2, 2);
  tail << 0, 1, 1, 0;
  b.set_tail(tail);

  CHECK(b.bp_degree() == 2);
  const Complex z(0.15, -0.35);
  const MatrixXcd f1 = MatrixXcd::Identity(2, 2) +
                       (bp_scalar(Domain::Disc, Complex(0.3, 0.0), z) - 1.0) * (u1 * u1.adjoint());
  const MatrixXcd f2 = MatrixXcd::Identity(2, 2) +
                       (bp_scalar(Domain::Disc, Complex(-0.2, 0.4), z) - 1.0) * (u2 * u2.adjoint());
  CHECK((b.bp_eval(z) - f1 * f2 * tail).norm() < 1e-12);
  CHECK((b.to_rational().eval(z) - b.bp_eval(z)).norm() < 1e-10);
}

TEST_CASE("left factorization of a diagonal with one interior pole") {
  // s = diag(1/lambda, lambda): single pole at 0 with rank-one residue.
  PolyMatrix num(2, 2);
  num.at(0, 0) = Poly(1.0);
  num.at(1, 1) = Poly::x() * Poly::x();
  RationalMatrix s(num, Poly::x(), Domain::Disc);

  KLFactorization kl = kl_factor_left(s);
  CHECK(kl.b.bp_degree() == 1);
  CHECK(kl.s0.pole_mult_region(Region::Interior) == 0);
  CHECK(kl.s0.boundary_sup_norm() < 1.0 + 1e-7);

  // b recovers diag(lambda, 1); s0 recovers diag(1, lambda).
  const Complex z(0.3, 0.2);
  MatrixXcd expect_b(2, 2), expect_s0(2, 2);
  expect_b << z, 0, 0, 1;
  expect_s0 << 1, 0, 0, z;
  CHECK((kl.b.bp_eval(z) - expect_b).norm() < 1e-10);
  CHECK((kl.s0.eval(z) - expect_s0).norm() < 1e-10);

  // Factorization identity b * s == s0 away from poles.
  CHECK((kl.b.bp_eval(z) * s.eval(z) - kl.s0.eval(z)).norm() < 1e-10);
  CHECK(check_noncancellation_left(kl.b, kl.s0));
}

TEST_CASE("right factorization mirrors the left one") {
  PolyMatrix num(2, 2);
  num.at(0, 0) = Poly(1.0);
  num.at(1, 1) = Poly::x() * Poly::x();
  RationalMatrix s(num, Poly::x(), Domain::Disc);

  KLFactorization kl = kl_factor_right(s);
  CHECK(kl.b.bp_degree() == 1);
  CHECK(kl.s0.pole_mult_region(Region::Interior) == 0);
  const Complex z(0.25, -0.15);
  CHECK((s.eval(z) * kl.b.bp_eval(z) - kl.s0.eval(z)).norm() < 1e-10);
  CHECK(check_noncancellation_right(kl.b, kl.s0));
}

TEST_CASE("planted factor inverse is recovered with the right degree") {
  std::mt19937_64 rng(23);
  for (Domain dom : {Domain::Disc, Domain::HalfPlane}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Complex alpha = (dom == Domain::Disc)
                                ? Complex(0.3 + 0.08 * trial, -0.2 + 0.05 * trial)
                                : Complex(0.5 + 0.2 * trial, 0.3 - 0.1 * trial);
      const Eigen::VectorXcd u = random_unit_vector(rng, 2);
      BPProduct b(2, dom);
      b.push_back({alpha, u * u.adjoint()});

      // s = b^{-#} * s_inner has exactly one pole in Omega_+ and stays
      // contractive on the boundary.
      MatrixXcd c = 0.5 * random_unit_vector(rng, 2) * random_unit_vector(rng, 2).adjoint();
      RationalMatrix s =
          b.to_rational().adjoint_sharp() * RationalMatrix::constant(c, dom);
      REQUIRE(s.pole_mult_region(Region::Interior) == 1);

      KLFactorization kl = kl_factor_left(s);
      CHECK(kl.b.bp_degree() == 1);
      CHECK(kl.s0.pole_mult_region(Region::Interior) == 0);
      CHECK(kl.s0.boundary_sup_norm() < 1.0 + 1e-7);
      const Complex z = (dom == Domain::Disc) ? Complex(0.1, 0.05) : Complex(1.2, 0.3);
      CHECK((kl.b.bp_eval(z) * s.eval(z) - kl.s0.eval(z)).norm() < 1e-9);
    }
  }
}

TEST_CASE("two-pole extraction yields degree two") {
  // s = diag(1/lambda, 1/(lambda - 0.5)) scaled to stay boundary-contractive.
  PolyMatrix num(2, 2);
  num.at(0, 0) = Complex(0.4) * Poly({-0.5, 1.0});
  num.at(1, 1) = Complex(0.4) * Poly::x();
  RationalMatrix s(num, Poly::x() * Poly({-0.5, 1.0}), Domain::Disc);
  REQUIRE(s.pole_mult_region(Region::Interior) == 2);

  KLFactorization kl = kl_factor_left(s);
  CHECK(kl.b.bp_degree() == 2);
  CHECK(kl.s0.pole_mult_region(Region::Interior) == 0);
  CHECK(kl.s0.boundary_sup_norm() < 1.0 + 1e-7);
  CHECK(check_noncancellation_left(kl.b, kl.s0));
}

TEST_CASE("class screens reject boundary poles and boundary blowup") {
  PolyMatrix one(1, 1);
  one.at(0, 0) = Poly(1.0);
  RationalMatrix pole_on_circle(one, Poly({-1.0, 1.0}), Domain::Disc);
  CHECK_THROWS_AS(kl_factor_left(pole_on_circle), SolverError);
  try {
    kl_factor_left(pole_on_circle);
  } catch (const SolverError& e) {
    CHECK(e.code() == ErrorCode::NotSchurClass);
  }

  RationalMatrix too_big = RationalMatrix::constant(2.0 * MatrixXcd::Identity(1, 1), Domain::Disc);
  CHECK_THROWS_AS(kl_factor_left(too_big), SolverError);
}

TEST_CASE("noncancellation detects a shared interior zero direction") {
  BPProduct b(2, Domain::Disc);
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2);
  e1(0) = 1.0;
  b.push_back({Complex(0.0), e1 * e1.adjoint()});  // b = diag(lambda, 1)

  // s0 = diag(lambda, 0.5) shares the zero direction e1 at the origin.
  PolyMatrix bad(2, 2);
  bad.at(0, 0) = Poly::x();
  bad.at(1, 1) = Poly(0.5);
  CHECK(!check_noncancellation_left(b, RationalMatrix(bad, Poly(1.0), Domain::Disc)));

  PolyMatrix good(2, 2);
  good.at(0, 0) = Poly(0.5);
  good.at(1, 1) = Poly::x();
  CHECK(check_noncancellation_left(b, RationalMatrix(good, Poly(1.0), Domain::Disc)));
}

TEST_CASE("inner function round trip through elementary factors") {
  std::mt19937_64 rng(24);
  for (Domain dom : {Domain::Disc, Domain::HalfPlane}) {
    BPProduct b(3, dom);
    const Complex a1 = (dom == Domain::Disc) ? Complex(0.2, 0.3) : Complex(0.8, -0.4);
    const Complex a2 = (dom == Domain::Disc) ? Complex(-0.5, 0.1) : Complex(1.5, 0.2);
    const Eigen::VectorXcd u1 = random_unit_vector(rng, 3);
    const Eigen::VectorXcd u2 = random_unit_vector(rng, 3);
    b.push_back({a1, u1 * u1.adjoint()});
    b.push_back({a2, u2 * u2.adjoint()});

    BPProduct back = inner_to_bp(b.to_rational());
    CHECK(back.bp_degree() == 2);
    for (Complex z : {Complex(0.05, -0.1), Complex(2.0, 1.0)})
      CHECK((back.bp_eval(z) - b.bp_eval(z)).norm() < 1e-8);
  }
}

TEST_CASE("inner extraction keeps repeated zero locations") {
  // diag(lambda, lambda) has a double zero at the origin.
  PolyMatrix num(2, 2);
  num.at(0, 0) = Poly::x();
  num.at(1, 1) = Poly::x();
  BPProduct b = inner_to_bp(RationalMatrix(num, Poly(1.0), Domain::Disc));
  CHECK(b.bp_degree() == 2);
  const Complex z(0.4, 0.1);
  MatrixXcd expect(2, 2);
  expect << z, 0, 0, z;
  CHECK((b.bp_eval(z) - expect).norm() < 1e-9);
}

TEST_CASE("inner extraction rejects non-inner input") {
  RationalMatrix half = RationalMatrix::constant(0.5 * MatrixXcd::Identity(2, 2), Domain::Disc);
  CHECK_THROWS_AS(inner_to_bp(half), SolverError);
}

TEST_CASE("identity tail is snapped exactly") {
  PolyMatrix num(1, 1);
  num.at(0, 0) = Poly::x();
  BPProduct b = inner_to_bp(RationalMatrix(num, Poly(1.0), Domain::Disc));
  CHECK(b.bp_degree() == 1);
  CHECK(b.tail().isIdentity(0.0));
}
