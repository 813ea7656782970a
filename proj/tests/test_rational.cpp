#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "schur/rational.hpp"

using namespace schur;

namespace {

Poly random_poly(std::mt19937_64& rng, int deg) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> c(deg + 1);
  for (Complex& z : c) z = Complex(g(rng), g(rng));
  return Poly(std::move(c));
}

PolyMatrix random_poly_matrix(std::mt19937_64& rng, int rows, int cols, int deg) {
  PolyMatrix M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M.at(i, j) = random_poly(rng, deg);
  return M;
}

Complex random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return Complex(u(rng), u(rng));
}

// diag(1/lambda, lambda) on the disc.
RationalMatrix recip_and_linear() {
  PolyMatrix num(2, 2);
  num.at(0, 0) = Poly(1.0);
  num.at(1, 1) = Poly::x() * Poly::x();
  return RationalMatrix(num, Poly::x(), Domain::Disc);
}

}  // namespace

TEST_CASE("construction cancels removable denominator roots") {
  // (lambda^2 - 1) / (lambda - 1) == lambda + 1.
  PolyMatrix num(1, 1);
  num.at(0, 0) = Poly({-1.0, 0.0, 1.0});
  RationalMatrix f(num, Poly({-1.0, 1.0}), Domain::Disc);
  CHECK(f.den().degree() == 0);
  CHECK(f.num().at(0, 0).degree() == 1);
  CHECK(f.is_finite_at(Complex(1.0)));
  CHECK(std::abs(f.eval(Complex(1.0))(0, 0) - Complex(2.0)) < 1e-10);

  // Non-removable root stays, and the denominator comes out monic.
  PolyMatrix num2(1, 1);
  num2.at(0, 0) = Poly(1.0);
  RationalMatrix g(num2, Poly({-2.0, 2.0}), Domain::Disc);
  CHECK(g.den().degree() == 1);
  CHECK(std::abs(g.den().lead() - Complex(1.0)) < 1e-12);
  CHECK(std::abs(g.eval(Complex(3.0))(0, 0) - Complex(0.25)) < 1e-12);
}

TEST_CASE("evaluation throws at a genuine pole") {
  RationalMatrix f = recip_and_linear();
  CHECK(!f.is_finite_at(Complex(0.0)));
  CHECK_THROWS_AS(f.eval(Complex(0.0)), SolverError);
  try {
    f.eval(Complex(0.0));
  } catch (const SolverError& e) {
    CHECK(e.code() == ErrorCode::PoleAtPoint);
  }
  const MatrixXcd v = f.eval(Complex(2.0));
  CHECK(std::abs(v(0, 0) - Complex(0.5)) < 1e-12);
  CHECK(std::abs(v(1, 1) - Complex(2.0)) < 1e-12);
}

TEST_CASE("arithmetic agrees with pointwise evaluation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    RationalMatrix a(random_poly_matrix(rng, 2, 2, 2), random_poly(rng, 1), Domain::Disc);
    RationalMatrix b(random_poly_matrix(rng, 2, 2, 2), random_poly(rng, 2), Domain::Disc);
    const Complex z = random_point(rng);
    if (!a.is_finite_at(z) || !b.is_finite_at(z)) continue;
    const double scale = std::max({1.0, a.eval(z).norm(), b.eval(z).norm()});
    CHECK(((a + b).eval(z) - (a.eval(z) + b.eval(z))).norm() < 1e-10 * scale);
    CHECK(((a - b).eval(z) - (a.eval(z) - b.eval(z))).norm() < 1e-10 * scale);
    CHECK(((a * b).eval(z) - (a.eval(z) * b.eval(z))).norm() < 1e-10 * scale * scale);
  }
}

TEST_CASE("inverse agrees with pointwise inverse") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    RationalMatrix a(random_poly_matrix(rng, 3, 3, 2), random_poly(rng, 1), Domain::Disc);
    RationalMatrix ai = a.inverse();
    for (int k = 0; k < 3; ++k) {
      const Complex z = random_point(rng);
      if (!a.is_finite_at(z) || !ai.is_finite_at(z)) continue;
      CHECK((ai.eval(z) - a.eval(z).inverse()).norm() <
            1e-8 * std::max(1.0, ai.eval(z).norm()));
    }
  }

  RationalMatrix sing = RationalMatrix::zero(2, 2, Domain::Disc);
  CHECK_THROWS_AS(sing.inverse(), SolverError);
}

TEST_CASE("sharp adjoint matches its defining identity on both domains") {
  std::mt19937_64 rng(13);
  for (Domain dom : {Domain::Disc, Domain::HalfPlane}) {
    for (int trial = 0; trial < 10; ++trial) {
      RationalMatrix a(random_poly_matrix(rng, 2, 3, 2), random_poly(rng, 2), dom);
      RationalMatrix as = a.adjoint_sharp();
      for (int k = 0; k < 4; ++k) {
        const Complex z = random_point(rng);
        const Complex zr = reflect(dom, z);
        if (!a.is_finite_at(zr) || !as.is_finite_at(z)) continue;
        CHECK((as.eval(z) - a.eval(zr).adjoint()).norm() <
              1e-8 * std::max(1.0, as.eval(z).norm()));
      }
      // Involution: (a^#)^# == a pointwise.
      RationalMatrix aa = as.adjoint_sharp();
      const Complex z = random_point(rng);
      if (a.is_finite_at(z) && aa.is_finite_at(z))
        CHECK((aa.eval(z) - a.eval(z)).norm() < 1e-8 * std::max(1.0, a.eval(z).norm()));
    }
  }
}

TEST_CASE("sharp adjoint of scalar examples") {
  // Disc: (lambda)^# == 1/lambda, realized as num=1, den=lambda.
  RationalMatrix lin = RationalMatrix::from_poly(PolyMatrix::constant(MatrixXcd::Identity(1, 1)),
                                                 Domain::Disc);
  PolyMatrix xnum(1, 1);
  xnum.at(0, 0) = Poly::x();
  RationalMatrix x(xnum, Poly(1.0), Domain::Disc);
  RationalMatrix xs = x.adjoint_sharp();
  CHECK(std::abs(xs.eval(Complex(2.0))(0, 0) - Complex(0.5)) < 1e-12);

  // Half-plane: (lambda + c)^# == -lambda + conj(c).
  PolyMatrix hn(1, 1);
  hn.at(0, 0) = Poly({Complex(1.0, 2.0), Complex(1.0)});
  RationalMatrix h(hn, Poly(1.0), Domain::HalfPlane);
  RationalMatrix hs = h.adjoint_sharp();
  CHECK(std::abs(hs.eval(Complex(3.0))(0, 0) - Complex(-2.0, -2.0)) < 1e-12);
}

TEST_CASE("laurent expansion recovers a planted principal part") {
  // f = A/(lambda - c)^2 + B/(lambda - c) + C0 + C1 (lambda - c).
  std::mt19937_64 rng(14);
  std::normal_distribution<double> g(0.0, 1.0);
  const Complex c(0.3, -0.2);
  MatrixXcd A(2, 2), B(2, 2), C0(2, 2), C1(2, 2);
  for (MatrixXcd* M : {&A, &B, &C0, &C1})
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) (*M)(i, j) = Complex(g(rng), g(rng));

  const Poly shift({-c, Complex(1.0)});  // lambda - c
  PolyMatrix num = PolyMatrix::constant(A) + PolyMatrix::constant(B).scaled(shift) +
                   PolyMatrix::constant(C0).scaled(shift * shift) +
                   PolyMatrix::constant(C1).scaled(shift * shift * shift);
  RationalMatrix f(num, shift * shift, Domain::Disc);

  const LaurentBlock lb = f.laurent(c, 3);
  CHECK((lb.get(-2) - A).norm() < 1e-9);
  CHECK((lb.get(-1) - B).norm() < 1e-9);
  CHECK((lb.get(0) - C0).norm() < 1e-9);
  CHECK((lb.get(1) - C1).norm() < 1e-9);
  CHECK(lb.get(-3).norm() == 0.0);
  CHECK(lb.get(2).norm() == 0.0);
  CHECK(lb.get(3).norm() == 0.0);
}

TEST_CASE("laurent rejects a circle that swallows another pole") {
  PolyMatrix num(1, 1);
  num.at(0, 0) = Poly(1.0);
  // Poles at 0 and 0.1.
  RationalMatrix f(num, Poly::x() * Poly({-0.1, 1.0}), Domain::Disc);
  CHECK_THROWS_AS(f.laurent(Complex(0.0), 2, 0.5), SolverError);
  const LaurentBlock lb = f.laurent(Complex(0.0), 1);  // auto radius 0.05
  // 1/(lambda (lambda - 0.1)) = -10/lambda + holomorphic part near 0.
  CHECK(std::abs(lb.get(-1)(0, 0) - Complex(-10.0)) < 1e-8);
}

TEST_CASE("pole multiplicity at a point via Laurent block-Toeplitz rank") {
  Tolerances tol;

  RationalMatrix f = recip_and_linear();
  CHECK(f.pole_mult_at(Complex(0.0), tol) == 1);
  CHECK(f.pole_mult_at(Complex(0.5), tol) == 0);

  // [[1/lambda, -2/lambda],[0,1]]: rank-one residue, multiplicity 1.
  PolyMatrix num2(2, 2);
  num2.at(0, 0) = Poly(1.0);
  num2.at(0, 1) = Poly(-2.0);
  num2.at(1, 1) = Poly::x();
  RationalMatrix g(num2, Poly::x(), Domain::Disc);
  CHECK(g.pole_mult_at(Complex(0.0), tol) == 1);

  // 1/lambda^2: multiplicity 2.
  PolyMatrix num3(1, 1);
  num3.at(0, 0) = Poly(1.0);
  RationalMatrix h(num3, Poly::x() * Poly::x(), Domain::Disc);
  CHECK(h.pole_mult_at(Complex(0.0), tol) == 2);

  // diag(1/lambda, 1/lambda): two independent residue directions.
  PolyMatrix num4(2, 2);
  num4.at(0, 0) = Poly(1.0);
  num4.at(1, 1) = Poly(1.0);
  RationalMatrix k(num4, Poly::x(), Domain::Disc);
  CHECK(k.pole_mult_at(Complex(0.0), tol) == 2);
}

TEST_CASE("region pole totals respect domain geometry") {
  Tolerances tol;
  RationalMatrix f = recip_and_linear();
  CHECK(f.pole_mult_region(Region::Interior, tol) == 1);
  CHECK(f.pole_mult_region(Region::Exterior, tol) == 0);
  CHECK(!f.has_boundary_pole(tol));

  // Pole at 2 (outside the disc) and at 0.5 (inside).
  PolyMatrix num(1, 1);
  num.at(0, 0) = Poly(1.0);
  RationalMatrix g(num, Poly({-2.0, 1.0}) * Poly({-0.5, 1.0}), Domain::Disc);
  CHECK(g.pole_mult_region(Region::Interior, tol) == 1);
  CHECK(g.pole_mult_region(Region::Exterior, tol) == 1);

  // Pole on the unit circle.
  RationalMatrix h(num, Poly({-1.0, 1.0}), Domain::Disc);
  CHECK(h.has_boundary_pole(tol));
  CHECK(h.pole_mult_region(Region::Interior, tol) == 0);

  // Half-plane: pole at -1 is interior-free, pole at +1 counts.
  RationalMatrix u(num, Poly({1.0, 1.0}), Domain::HalfPlane);
  CHECK(u.pole_mult_region(Region::Interior, tol) == 0);
  CHECK(u.pole_mult_region(Region::Exterior, tol) == 1);
  RationalMatrix v(num, Poly({-1.0, 1.0}), Domain::HalfPlane);
  CHECK(v.pole_mult_region(Region::Interior, tol) == 1);
}

TEST_CASE("zero multiplicity counts zeros of the determinant structure") {
  Tolerances tol;

  // diag(1, lambda): one zero at the origin.
  PolyMatrix num(2, 2);
  num.at(0, 0) = Poly(1.0);
  num.at(1, 1) = Poly::x();
  RationalMatrix f(num, Poly(1.0), Domain::Disc);
  CHECK(f.zero_mult_region(Region::Interior, tol) == 1);

  CHECK(RationalMatrix::identity(3, Domain::Disc).zero_mult_region(Region::Interior, tol) == 0);

  PolyMatrix num2(2, 2);
  num2.at(0, 0) = Poly::x();
  num2.at(1, 1) = Poly::x();
  RationalMatrix g(num2, Poly(1.0), Domain::Disc);
  CHECK(g.zero_mult_region(Region::Interior, tol) == 2);
}

TEST_CASE("planted interior poles are counted with multiplicity") {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g(0.0, 1.0);
  Tolerances tol;
  for (int trial = 0; trial < 10; ++trial) {
    // Two distinct simple interior poles with full-rank residues.
    const Complex c1(0.2 + 0.03 * trial, 0.1);
    const Complex c2(-0.4, 0.2 - 0.02 * trial);
    MatrixXcd R1(2, 2), R2(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        R1(i, j) = Complex(g(rng), g(rng));
        R2(i, j) = Complex(g(rng), g(rng));
      }
    const Poly d1({-c1, Complex(1.0)}), d2({-c2, Complex(1.0)});
    PolyMatrix num = PolyMatrix::constant(R1).scaled(d2) + PolyMatrix::constant(R2).scaled(d1);
    RationalMatrix f(num, d1 * d2, Domain::Disc);
    const int expected = numerical_rank(R1, tol) + numerical_rank(R2, tol);
    CHECK(f.pole_mult_region(Region::Interior, tol) == expected);
  }
}

TEST_CASE("boundary sup norm distinguishes contractions from blowups") {
  // Constant contraction.
  MatrixXcd half = 0.5 * MatrixXcd::Identity(2, 2);
  CHECK(RationalMatrix::constant(half, Domain::Disc).boundary_sup_norm() ==
        doctest::Approx(0.5).epsilon(1e-12));

  // lambda is unimodular on the circle.
  PolyMatrix xnum(1, 1);
  xnum.at(0, 0) = Poly::x();
  RationalMatrix x(xnum, Poly(1.0), Domain::Disc);
  CHECK(x.boundary_sup_norm() == doctest::Approx(1.0).epsilon(1e-12));

  // 1/(lambda-1) blows up near the boundary sample closest to 1; finite but large.
  PolyMatrix one(1, 1);
  one.at(0, 0) = Poly(1.0);
  RationalMatrix f(one, Poly({-1.0, 1.0}), Domain::Disc);
  CHECK(f.boundary_sup_norm() > 5.0);
}

TEST_CASE("coprimeness checks detect shared interior structure") {
  Tolerances tol;
  // G = diag(lambda, 1), H = diag(1, lambda): no common interior zero direction.
  PolyMatrix gn(2, 2), hn(2, 2);
  gn.at(0, 0) = Poly::x();
  gn.at(1, 1) = Poly(1.0);
  hn.at(0, 0) = Poly(1.0);
  hn.at(1, 1) = Poly::x();
  RationalMatrix G(gn, Poly(1.0), Domain::Disc);
  RationalMatrix H(hn, Poly(1.0), Domain::Disc);
  CHECK(coprime_left_check(G, H, tol));
  CHECK(coprime_right_check(G, H, tol));

  // Shared factor: H2 = diag(lambda, lambda) cancels G's interior zero.
  PolyMatrix hn2(2, 2);
  hn2.at(0, 0) = Poly::x();
  hn2.at(1, 1) = Poly::x();
  RationalMatrix H2(hn2, Poly(1.0), Domain::Disc);
  CHECK(!coprime_left_check(G, H2, tol));
  CHECK(!coprime_right_check(G, H2, tol));
}

TEST_CASE("behavior at infinity is classified by degree comparison") {
  RationalMatrix f = recip_and_linear();
  CHECK(!f.bounded_at_infinity());

  PolyMatrix num(1, 1);
  num.at(0, 0) = Poly({1.0, 2.0});
  RationalMatrix g(num, Poly({0.5, 0.0, 1.0}), Domain::Disc);
  CHECK(g.bounded_at_infinity());
  CHECK(g.vanishes_at_infinity());
  CHECK(g.value_at_infinity()(0, 0) == Complex(0.0));

  RationalMatrix h(num, Poly({3.0, 4.0}), Domain::Disc);
  CHECK(h.bounded_at_infinity());
  CHECK(!h.vanishes_at_infinity());
  CHECK(std::abs(h.value_at_infinity()(0, 0) - Complex(0.5)) < 1e-12);
}

TEST_CASE("block extraction and concatenation round trip") {
  std::mt19937_64 rng(16);
  RationalMatrix a(random_poly_matrix(rng, 2, 2, 2), random_poly(rng, 1), Domain::Disc);
  RationalMatrix b(random_poly_matrix(rng, 2, 2, 1), random_poly(rng, 2), Domain::Disc);
  RationalMatrix ab = RationalMatrix::hcat(a, b);
  CHECK(ab.rows() == 2);
  CHECK(ab.cols() == 4);
  const Complex z(0.37, 0.11);
  if (a.is_finite_at(z) && b.is_finite_at(z)) {
    MatrixXcd expect(2, 4);
    expect << a.eval(z), b.eval(z);
    CHECK((ab.eval(z) - expect).norm() < 1e-9 * std::max(1.0, expect.norm()));
    CHECK((ab.block(0, 0, 2, 2).eval(z) - a.eval(z)).norm() <
          1e-9 * std::max(1.0, expect.norm()));
    CHECK((ab.block(0, 2, 2, 2).eval(z) - b.eval(z)).norm() <
          1e-9 * std::max(1.0, expect.norm()));
  }
  RationalMatrix stacked = RationalMatrix::vcat(a, b);
  CHECK(stacked.rows() == 4);
  CHECK(stacked.cols() == 2);
}
