#include "schur/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace schur {

namespace {

// Column-major Kronecker product, only needed at desk scale.
MatrixXcd kron(const MatrixXcd& A, const MatrixXcd& B) {
  MatrixXcd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

Eigen::Map<const VectorXcd> vec(const MatrixXcd& M) {
  return Eigen::Map<const VectorXcd>(M.data(), M.size());
}

MatrixXcd unvec(const VectorXcd& v, int rows, int cols) {
  return Eigen::Map<const MatrixXcd>(v.data(), rows, cols);
}

void require_hermitian(const MatrixXcd& H, const Tolerances& tol, const char* who) {
  if (H.rows() != H.cols())
    throw SolverError(ErrorCode::NotHermitian, std::string(who) + ": matrix not square");
  const double scale = std::max(1.0, H.norm());
  if ((H - H.adjoint()).norm() > tol.residual_tol * scale)
    throw SolverError(ErrorCode::NotHermitian, std::string(who) + ": symmetry residual too large");
}

}  // namespace

Inertia inertia(const MatrixXcd& H, const Tolerances& tol) {
  require_hermitian(H, tol, "inertia");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((H + H.adjoint()) / 2.0);
  const VectorXd ev = es.eigenvalues();
  const double scale = ev.size() ? std::max(1.0, ev.cwiseAbs().maxCoeff()) : 1.0;
  const double cut = tol.eig_tol * scale;
  Inertia r;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -cut)
      ++r.n_neg;
    else if (ev(i) > cut)
      ++r.n_pos;
    else
      ++r.n_zero;
  }
  return r;
}

int numerical_rank(const MatrixXcd& M, const Tolerances& tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXcd> svd(M);
  const VectorXd sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = tol.rank_tol * sv(0);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

std::vector<Complex> eigenvalues(const MatrixXcd& A) {
  if (A.rows() == 0) return {};
  Eigen::ComplexEigenSolver<MatrixXcd> es(A, /*computeEigenvectors=*/false);
  std::vector<Complex> out(A.rows());
  for (int i = 0; i < A.rows(); ++i) out[i] = es.eigenvalues()(i);
  return out;
}

double spectral_radius(const MatrixXcd& A) {
  double r = 0.0;
  for (const Complex& ev : eigenvalues(A)) r = std::max(r, std::abs(ev));
  return r;
}

MatrixXcd solve_stein(const MatrixXcd& A, const MatrixXcd& B, const MatrixXcd& Q) {
  const int r = Q.rows(), c = Q.cols();
  const MatrixXcd lhs =
      MatrixXcd::Identity(r * c, r * c) - kron(B.transpose(), A);
  Eigen::FullPivLU<MatrixXcd> lu(lhs);
  return unvec(lu.solve(vec(Q)), r, c);
}

MatrixXcd solve_sylvester(const MatrixXcd& A, const MatrixXcd& B, const MatrixXcd& Q) {
  const int r = Q.rows(), c = Q.cols();
  const MatrixXcd lhs = kron(MatrixXcd::Identity(c, c), A) +
                        kron(B.transpose(), MatrixXcd::Identity(r, r));
  Eigen::FullPivLU<MatrixXcd> lu(lhs);
  return unvec(lu.solve(vec(Q)), r, c);
}

MatrixXcd solve_stein_disc(const MatrixXcd& A1, const MatrixXcd& A2,
                           const MatrixXcd& C, int p, int q,
                           const Tolerances& tol) {
  const int n1 = static_cast<int>(A1.rows());
  const int n2 = static_cast<int>(A2.rows());
  const int n = n1 + n2;
  if (C.rows() != p + q || C.cols() != n)
    throw std::invalid_argument("solve_stein_disc: C must be (p+q) x (n1+n2)");
  if (n1 > 0 && spectral_radius(A1) >= 1.0 - tol.eig_tol)
    throw SolverError(ErrorCode::SpectrumViolation, "spectrum of A1 not inside the open disc");
  if (n2 > 0 && spectral_radius(A2) >= 1.0 - tol.eig_tol)
    throw SolverError(ErrorCode::SpectrumViolation, "spectrum of A2 not inside the open disc");

  const MatrixXcd rhs = C.adjoint() * signature_matrix(p, q) * C;
  MatrixXcd P = MatrixXcd::Zero(n, n);
  if (n1 > 0) {
    // A1* P11 A1 - P11 = rhs11  <=>  P11 - A1* P11 A1 = -rhs11
    P.topLeftCorner(n1, n1) =
        solve_stein(A1.adjoint(), A1, -rhs.topLeftCorner(n1, n1));
  }
  if (n2 > 0) {
    // P22 - A2* P22 A2 = rhs22
    P.bottomRightCorner(n2, n2) =
        solve_stein(A2.adjoint(), A2, rhs.bottomRightCorner(n2, n2));
  }
  if (n1 > 0 && n2 > 0) {
    // A1* P12 - P12 A2 = rhs12; unique iff sigma(A1) and sigma(A2*) are disjoint.
    for (const Complex& a : eigenvalues(A1))
      for (const Complex& b : eigenvalues(A2))
        if (std::abs(std::conj(a) - b) <= tol.eig_tol)
          throw SolverError(ErrorCode::NonUniqueSylvester,
                            "sigma(A1) meets sigma(A2*); supply the off-diagonal block");
    P.topRightCorner(n1, n2) =
        solve_sylvester(A1.adjoint(), -A2, rhs.topRightCorner(n1, n2));
    P.bottomLeftCorner(n2, n1) = P.topRightCorner(n1, n2).adjoint();
  }
  return (P + P.adjoint()) / 2.0;
}

MatrixXcd solve_lyapunov_halfplane(const MatrixXcd& A1, const MatrixXcd& A2,
                                   const MatrixXcd& C, int p, int q,
                                   const Tolerances& tol) {
  const int n1 = static_cast<int>(A1.rows());
  const int n2 = static_cast<int>(A2.rows());
  const int n = n1 + n2;
  if (C.rows() != p + q || C.cols() != n)
    throw std::invalid_argument("solve_lyapunov_halfplane: C must be (p+q) x (n1+n2)");
  for (const Complex& ev : eigenvalues(A1))
    if (ev.real() <= tol.eig_tol)
      throw SolverError(ErrorCode::SpectrumViolation, "spectrum of A1 not in the open right half-plane");
  for (const Complex& ev : eigenvalues(A2))
    if (ev.real() >= -tol.eig_tol)
      throw SolverError(ErrorCode::SpectrumViolation, "spectrum of A2 not in the open left half-plane");

  const MatrixXcd rhs = -(C.adjoint() * signature_matrix(p, q) * C);
  MatrixXcd P = MatrixXcd::Zero(n, n);
  if (n1 > 0)
    P.topLeftCorner(n1, n1) =
        solve_sylvester(A1.adjoint(), A1, rhs.topLeftCorner(n1, n1));
  if (n2 > 0)
    P.bottomRightCorner(n2, n2) =
        solve_sylvester(A2.adjoint(), A2, rhs.bottomRightCorner(n2, n2));
  if (n1 > 0 && n2 > 0) {
    // A1* P12 + P12 A2 = rhs12; unique iff sigma(A1) and sigma(-A2*) are disjoint.
    for (const Complex& a : eigenvalues(A1))
      for (const Complex& b : eigenvalues(A2))
        if (std::abs(std::conj(a) + b) <= tol.eig_tol)
          throw SolverError(ErrorCode::NonUniqueSylvester,
                            "sigma(A1) meets sigma(-A2*); supply the off-diagonal block");
    P.topRightCorner(n1, n2) =
        solve_sylvester(A1.adjoint(), A2, rhs.topRightCorner(n1, n2));
    P.bottomLeftCorner(n2, n1) = P.topRightCorner(n1, n2).adjoint();
  }
  return (P + P.adjoint()) / 2.0;
}

MatrixXcd pinv_hermitian(const MatrixXcd& P, const Tolerances& tol) {
  require_hermitian(P, tol, "pinv_hermitian");
  if (P.rows() == 0) return P;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((P + P.adjoint()) / 2.0);
  const VectorXd ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  const double cut = tol.eig_tol * std::max(scale, 1e-300);
  VectorXd inv = VectorXd::Zero(ev.size());
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cut) inv(i) = 1.0 / ev(i);
  MatrixXcd X = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
  return (X + X.adjoint()) / 2.0;
}

MatrixXcd pinv(const MatrixXcd& M, const Tolerances& tol) {
  if (M.size() == 0) return M.adjoint();
  Eigen::JacobiSVD<MatrixXcd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd sv = svd.singularValues();
  const double cut = sv.size() ? tol.rank_tol * std::max(sv(0), 1e-300) : 0.0;
  VectorXd inv = VectorXd::Zero(sv.size());
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

MatrixXcd orthonormal_colspace(const MatrixXcd& M, const Tolerances& tol) {
  if (M.size() == 0) return MatrixXcd(M.rows(), 0);
  Eigen::JacobiSVD<MatrixXcd> svd(M, Eigen::ComputeFullU);
  const int r = numerical_rank(M, tol);
  return svd.matrixU().leftCols(r);
}

MatrixXcd null_space(const MatrixXcd& M, const Tolerances& tol) {
  if (M.size() == 0) return MatrixXcd::Identity(M.cols(), M.cols());
  Eigen::JacobiSVD<MatrixXcd> svd(M, Eigen::ComputeFullV);
  const int r = numerical_rank(M, tol);
  return svd.matrixV().rightCols(M.cols() - r);
}

MatrixXcd orthonormal_complement(const MatrixXcd& Q) {
  const int m = static_cast<int>(Q.rows());
  const int k = static_cast<int>(Q.cols());
  if (k == 0) return MatrixXcd::Identity(m, m);
  // Null space of Q* is the orthogonal complement of rng Q.
  Eigen::JacobiSVD<MatrixXcd> svd(Q.adjoint(), Eigen::ComputeFullV);
  MatrixXcd comp = svd.matrixV().rightCols(m - k);
  // Deterministic phases: rotate each column so its largest entry is real > 0.
  for (int j = 0; j < comp.cols(); ++j) {
    int imax = 0;
    comp.col(j).cwiseAbs().maxCoeff(&imax);
    const Complex z = comp(imax, j);
    if (std::abs(z) > 0) comp.col(j) *= std::conj(z) / std::abs(z);
  }
  return comp;
}

MatrixXcd random_gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixXcd M(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) M(i, j) = Complex(g(rng), g(rng)) / std::sqrt(2.0);
  return M;
}

MatrixXcd random_unitary(std::mt19937_64& rng, int n) {
  const MatrixXcd G = random_gaussian(rng, n, n);
  Eigen::HouseholderQR<MatrixXcd> qr(G);
  MatrixXcd Q = qr.householderQ();
  const MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the factorization is a deterministic function
  // of G (Ginibre => Haar with this normalization).
  for (int i = 0; i < n; ++i) {
    const Complex d = R(i, i);
    Q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1.0);
  }
  return Q;
}

MatrixXcd random_contraction(std::mt19937_64& rng, int rows, int cols, double smax) {
  MatrixXcd G = random_gaussian(rng, rows, cols);
  Eigen::JacobiSVD<MatrixXcd> svd(G);
  const double top = svd.singularValues()(0);
  return (top > 0) ? MatrixXcd(G * (smax / top)) : G;
}

MatrixXcd random_stable(std::mt19937_64& rng, int n, double rad) {
  if (n == 0) return MatrixXcd(0, 0);
  MatrixXcd G = random_gaussian(rng, n, n);
  Eigen::JacobiSVD<MatrixXcd> svd(G);
  const double top = svd.singularValues()(0);
  // sigma_max bounds the spectral radius, so this is safely inside.
  return (top > 0) ? MatrixXcd(G * (rad / top)) : G;
}

}  // namespace schur
