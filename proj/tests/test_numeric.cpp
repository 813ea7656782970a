#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "schur/numeric.hpp"

using namespace schur;

namespace {

MatrixXcd m1(Complex a) {
  MatrixXcd M(1, 1);
  M << a;
  return M;
}

MatrixXcd random_hermitian(std::mt19937_64& rng, int n) {
  const MatrixXcd G = random_gaussian(rng, n, n);
  return (G + G.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("inertia on small fixed matrices") {
  CHECK(inertia(m1(-3.0)) == Inertia{1, 0, 0});
  CHECK(inertia(MatrixXcd::Zero(2, 2)) == Inertia{0, 2, 0});

  MatrixXcd j11(2, 2);
  j11 << -1.0, 0.0, 0.0, 1.0;
  CHECK(inertia(j11) == Inertia{1, 0, 1});
}

TEST_CASE("inertia rejects non-Hermitian input") {
  MatrixXcd M(2, 2);
  M << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(inertia(M), SolverError);
}

TEST_CASE("inertia mirror property on random Hermitian matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const MatrixXcd H = random_hermitian(rng, 1 + static_cast<int>(rng() % 5));
    const Inertia a = inertia(H);
    const Inertia b = inertia(MatrixXcd(-H));
    CHECK(a.n_neg == b.n_pos);
    CHECK(a.n_pos == b.n_neg);
    CHECK(a.n_zero == b.n_zero);
  }
}

TEST_CASE("numerical rank") {
  CHECK(numerical_rank(MatrixXcd::Identity(3, 3)) == 3);
  CHECK(numerical_rank(MatrixXcd::Zero(2, 3)) == 0);
  MatrixXcd nilp(2, 2);
  nilp << 0.0, 1.0, 0.0, 0.0;
  CHECK(numerical_rank(nilp) == 1);
}

TEST_CASE("one-node Stein equation reproduces the scalar coupling value") {
  // n1=1, n2=0, A1=[0], C=col(2,0,0,1), p=q=2: -P = 4-1 => P=-3.
  const MatrixXcd A1 = MatrixXcd::Zero(1, 1);
  const MatrixXcd A2(0, 0);
  MatrixXcd C(4, 1);
  C << 2.0, 0.0, 0.0, 1.0;
  const MatrixXcd P = solve_stein_disc(A1, A2, C, 2, 2);
  REQUIRE(P.rows() == 1);
  CHECK(std::abs(P(0, 0) - Complex(-3.0)) <= 1e-12);
}

TEST_CASE("Stein solution for two-node scalar data matches hand elimination") {
  // A1=diag(0,1/2), C=[[0,0],[1,1]], p=q=1: P = [[1,1],[1,4/3]].
  MatrixXcd A1(2, 2);
  A1 << 0.0, 0.0, 0.0, 0.5;
  MatrixXcd C(2, 2);
  C << 0.0, 0.0, 1.0, 1.0;
  const MatrixXcd P = solve_stein_disc(A1, MatrixXcd(0, 0), C, 1, 1);
  MatrixXcd expect(2, 2);
  expect << 1.0, 1.0, 1.0, 4.0 / 3.0;
  CHECK((P - expect).norm() <= 1e-12);
}

TEST_CASE("Stein solution vanishes for zero data") {
  std::mt19937_64 rng(3);
  const MatrixXcd A1 = random_stable(rng, 2, 0.7);
  const MatrixXcd A2 = random_stable(rng, 1, 0.7);
  const MatrixXcd C = MatrixXcd::Zero(3, 3);
  CHECK(solve_stein_disc(A1, A2, C, 2, 1).norm() <= 1e-14);
}

TEST_CASE("Stein solver satisfies the full pencil equation on random data") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n1 = static_cast<int>(rng() % 3);
    const int n2 = static_cast<int>(rng() % 3);
    if (n1 + n2 == 0) continue;
    const int p = 1 + static_cast<int>(rng() % 2);
    const int q = 1 + static_cast<int>(rng() % 2);
    const MatrixXcd A1 = random_stable(rng, n1, 0.8);
    const MatrixXcd A2 = random_stable(rng, n2, 0.8);
    const MatrixXcd C = random_gaussian(rng, p + q, n1 + n2);
    MatrixXcd P;
    try {
      P = solve_stein_disc(A1, A2, C, p, q);
    } catch (const SolverError&) {
      continue;  // random spectra may collide; uniqueness is tested elsewhere
    }
    MatrixXcd M = MatrixXcd::Identity(n1 + n2, n1 + n2);
    MatrixXcd N = MatrixXcd::Identity(n1 + n2, n1 + n2);
    M.topLeftCorner(n1, n1) = A1;
    N.bottomRightCorner(n2, n2) = A2;
    const MatrixXcd resid =
        M.adjoint() * P * M - N.adjoint() * P * N - C.adjoint() * signature_matrix(p, q) * C;
    CHECK(resid.norm() <= 1e-10 * std::max(1.0, P.norm() + C.squaredNorm()));
    CHECK((P - P.adjoint()).norm() <= 1e-12 * std::max(1.0, P.norm()));
  }
}

TEST_CASE("Stein solver rejects unstable spectra and colliding spectra") {
  const MatrixXcd A1 = m1(2.0);
  MatrixXcd C(2, 1);
  C << 1.0, 1.0;
  CHECK_THROWS_AS(solve_stein_disc(A1, MatrixXcd(0, 0), C, 1, 1), SolverError);

  // sigma(A1) = {1/2} meets sigma(A2*) = {1/2}: off-diagonal block non-unique.
  MatrixXcd C2(2, 2);
  C2 << 1.0, 0.5, 0.5, 1.0;
  try {
    solve_stein_disc(m1(0.5), m1(0.5), C2, 1, 1);
    FAIL("expected NonUniqueSylvester");
  } catch (const SolverError& e) {
    CHECK(e.code() == ErrorCode::NonUniqueSylvester);
  }
}

TEST_CASE("half-plane Lyapunov equation on scalar data") {
  MatrixXcd C1(2, 1);
  C1 << 1.0, 1.0;
  CHECK(solve_lyapunov_halfplane(m1(1.0), MatrixXcd(0, 0), C1, 1, 1).norm() <= 1e-14);

  MatrixXcd C2(2, 1);
  C2 << 2.0, 1.0;
  const MatrixXcd P = solve_lyapunov_halfplane(m1(1.0), MatrixXcd(0, 0), C2, 1, 1);
  CHECK(std::abs(P(0, 0) - Complex(-1.5)) <= 1e-12);

  CHECK(solve_lyapunov_halfplane(m1(1.0), MatrixXcd(0, 0), MatrixXcd::Zero(2, 1), 1, 1)
            .norm() <= 1e-14);
}

TEST_CASE("half-plane Lyapunov residual on random data") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int n1 = 1 + static_cast<int>(rng() % 2);
    const int n2 = static_cast<int>(rng() % 2);
    const int p = 1 + static_cast<int>(rng() % 2);
    const int q = 1;
    MatrixXcd A1 = random_gaussian(rng, n1, n1);
    A1 += (spectral_radius(A1) + 0.3) * MatrixXcd::Identity(n1, n1);
    MatrixXcd A2 = random_gaussian(rng, n2, n2);
    A2 -= (spectral_radius(A2) + 0.3) * MatrixXcd::Identity(n2, n2);
    const MatrixXcd C = random_gaussian(rng, p + q, n1 + n2);
    MatrixXcd P;
    try {
      P = solve_lyapunov_halfplane(A1, A2, C, p, q);
    } catch (const SolverError&) {
      continue;
    }
    MatrixXcd A = MatrixXcd::Zero(n1 + n2, n1 + n2);
    A.topLeftCorner(n1, n1) = A1;
    A.bottomRightCorner(n2, n2) = A2;
    const MatrixXcd resid =
        A.adjoint() * P + P * A + C.adjoint() * signature_matrix(p, q) * C;
    CHECK(resid.norm() <= 1e-9 * std::max(1.0, P.norm() + C.squaredNorm()));
  }
}

TEST_CASE("Hermitian pseudoinverse basics") {
  MatrixXcd P(2, 2);
  P << 2.0, 0.0, 0.0, 0.0;
  MatrixXcd X = pinv_hermitian(P);
  MatrixXcd expect(2, 2);
  expect << 0.5, 0.0, 0.0, 0.0;
  CHECK((X - expect).norm() <= 1e-14);

  CHECK(pinv_hermitian(MatrixXcd::Zero(3, 3)).norm() == 0.0);

  std::mt19937_64 rng(17);
  MatrixXcd H = random_hermitian(rng, 3);
  CHECK((pinv_hermitian(H) - H.inverse()).norm() <= 1e-10 * H.inverse().norm());
}

TEST_CASE("Hermitian pseudoinverse preserves rank and negative index") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const MatrixXcd U = random_unitary(rng, n);
    VectorXd d = VectorXd::Zero(n);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < n; ++i) d(i) = (rng() % 3 == 0) ? 0.0 : g(rng);
    const MatrixXcd P = U * d.cast<Complex>().asDiagonal() * U.adjoint();
    const MatrixXcd X = pinv_hermitian(P);
    CHECK((X * P * X - X).norm() <= 1e-9 * std::max(1.0, X.norm()));
    CHECK((P * X * P - P).norm() <= 1e-9 * std::max(1.0, P.norm()));
    CHECK((X - X.adjoint()).norm() <= 1e-12);
    CHECK(numerical_rank(X) == numerical_rank(P));
    CHECK(inertia(X).n_neg == inertia(P).n_neg);
  }
}

TEST_CASE("subspace helpers produce orthonormal bases") {
  std::mt19937_64 rng(23);
  MatrixXcd M = random_gaussian(rng, 4, 2);
  const MatrixXcd B = orthonormal_colspace(M);
  CHECK(B.cols() == 2);
  CHECK((B.adjoint() * B - MatrixXcd::Identity(2, 2)).norm() <= 1e-12);
  // Column space is preserved: projecting M on it loses nothing.
  CHECK((M - B * (B.adjoint() * M)).norm() <= 1e-12);

  const MatrixXcd Z = null_space(M.adjoint());
  CHECK(Z.cols() == 2);
  CHECK((M.adjoint() * Z).norm() <= 1e-12);

  const MatrixXcd comp = orthonormal_complement(B);
  MatrixXcd U(4, 4);
  U << comp, B;
  CHECK((U.adjoint() * U - MatrixXcd::Identity(4, 4)).norm() <= 1e-12);
}

TEST_CASE("random generators satisfy their advertised bounds") {
  std::mt19937_64 rng(29);
  const MatrixXcd U = random_unitary(rng, 4);
  CHECK((U.adjoint() * U - MatrixXcd::Identity(4, 4)).norm() <= 1e-12);

  const MatrixXcd K = random_contraction(rng, 3, 2, 0.75);
  Eigen::JacobiSVD<MatrixXcd> svd(K);
  CHECK(std::abs(svd.singularValues()(0) - 0.75) <= 1e-12);

  CHECK(spectral_radius(random_stable(rng, 4, 0.8)) <= 0.8 + 1e-12);
}
