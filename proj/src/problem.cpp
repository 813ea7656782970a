#include "schur/problem.hpp"

#include <cmath>
#include <limits>

namespace schur {

namespace {

MatrixXcd block_diag(const MatrixXcd& A, const MatrixXcd& B) {
  MatrixXcd out = MatrixXcd::Zero(A.rows() + B.rows(), A.cols() + B.cols());
  out.topLeftCorner(A.rows(), A.cols()) = A;
  out.bottomRightCorner(B.rows(), B.cols()) = B;
  return out;
}

MatrixXcd observability_matrix(const MatrixXcd& C, const MatrixXcd& A) {
  const int n = static_cast<int>(A.rows());
  MatrixXcd obs(C.rows() * n, n);
  MatrixXcd row = C;
  for (int k = 0; k < n; ++k) {
    obs.block(k * C.rows(), 0, C.rows(), n) = row;
    row = row * A;
  }
  return obs;
}

std::vector<Complex> sample_grid(Domain dom) {
  std::vector<Complex> pts;
  if (dom == Domain::Disc) {
    for (double r : {0.15, 0.35, 0.55, 0.75})
      for (int k = 0; k < 8; ++k) {
        const double th = 2.0 * M_PI * (k + 0.25) / 8.0;
        pts.emplace_back(r * std::cos(th), r * std::sin(th));
      }
  } else {
    for (double re : {0.2, 0.7, 1.5, 3.0})
      for (double im : {-2.0, -0.5, 0.0, 0.5, 2.0}) pts.emplace_back(re, im);
  }
  return pts;
}

}  // namespace

MatrixXcd DataSet::M() const {
  return (domain == Domain::Disc)
             ? block_diag(A1, MatrixXcd::Identity(n2(), n2()))
             : block_diag(A1, A2);
}

MatrixXcd DataSet::N() const {
  return (domain == Domain::Disc)
             ? block_diag(MatrixXcd::Identity(n1(), n1()), A2)
             : MatrixXcd::Identity(n(), n());
}

RationalMatrix transfer_F(const DataSet& ds) {
  const PolyMatrix pencil =
      PolyMatrix::constant(ds.M()) - PolyMatrix::constant(ds.N()).scaled(Poly::x());
  return RationalMatrix(PolyMatrix::constant(ds.C) * pencil.adjugate(),
                        pencil.determinant(), ds.domain);
}

Complex default_mu(const DataSet& ds, const Tolerances& tol) {
  const MatrixXcd M = ds.M(), N = ds.N();
  const double scale = std::max(1.0, std::max(M.norm(), N.norm()));
  auto usable = [&](Complex mu) {
    Eigen::FullPivLU<MatrixXcd> lu(M - mu * N);
    lu.setThreshold(tol.rank_tol);
    return lu.isInvertible() && (M - mu * N).norm() > tol.rank_tol * scale;
  };
  if (ds.mu != Complex(0.0, 0.0)) {
    if (on_boundary(ds.domain, ds.mu) && usable(ds.mu)) return ds.mu;
    throw SolverError(ErrorCode::ForbiddenMu,
                      "stored normalization point is off the boundary or hits the pencil");
  }
  if (ds.domain == Domain::Disc) {
    for (int k = 0; k < 17; ++k) {
      const double th = 2.0 * M_PI * k / 17.0;
      const Complex mu(std::cos(th), std::sin(th));
      if (usable(mu)) return mu;
    }
  } else {
    for (double y : {1.0, -1.0, 2.0, -2.0, 0.5, -0.5, 3.0, -3.0, 0.0}) {
      const Complex mu(0.0, y);
      if (usable(mu)) return mu;
    }
  }
  throw SolverError(ErrorCode::ForbiddenMu, "no boundary point avoids the pencil spectrum");
}

ValidationReport validate(const DataSet& ds, const Tolerances& tol) {
  if (ds.p < 0 || ds.q < 0 || ds.p + ds.q == 0)
    throw std::invalid_argument("validate: p + q must be positive");
  if (ds.n() == 0) throw std::invalid_argument("validate: empty node set");
  if (ds.C.rows() != ds.m() || ds.C.cols() != ds.n())
    throw std::invalid_argument("validate: C has the wrong shape");
  if (ds.P.rows() != ds.n() || ds.P.cols() != ds.n())
    throw std::invalid_argument("validate: P has the wrong shape");

  ValidationReport rep;
  const double pscale = std::max(1.0, ds.P.norm());
  if ((ds.P - ds.P.adjoint()).norm() > tol.residual_tol * pscale)
    rep.fail("coupling matrix is not Hermitian");
  const MatrixXcd P = 0.5 * (ds.P + ds.P.adjoint());

  if (ds.domain == Domain::Disc) {
    if (ds.n1() > 0 && spectral_radius(ds.A1) >= 1.0 - tol.eig_tol)
      rep.fail("spectrum of A1 is not strictly inside the disc");
    if (ds.n2() > 0 && spectral_radius(ds.A2) >= 1.0 - tol.eig_tol)
      rep.fail("spectrum of A2 is not strictly inside the disc");
  } else {
    if (ds.n1() > 0) {
      double lo = std::numeric_limits<double>::infinity();
      for (Complex ev : eigenvalues(ds.A1)) lo = std::min(lo, ev.real());
      if (lo <= tol.eig_tol) rep.fail("spectrum of A1 is not strictly in the right half-plane");
    }
    if (ds.n2() > 0) {
      double hi = -std::numeric_limits<double>::infinity();
      for (Complex ev : eigenvalues(ds.A2)) hi = std::max(hi, ev.real());
      if (hi >= -tol.eig_tol) rep.fail("spectrum of A2 is not strictly in the left half-plane");
    }
  }

  const MatrixXcd M = ds.M(), N = ds.N();
  const MatrixXcd J = signature_matrix(ds.p, ds.q);
  const double cscale = std::max({1.0, pscale, ds.C.squaredNorm()});
  const MatrixXcd coupling =
      (ds.domain == Domain::Disc)
          ? MatrixXcd(M.adjoint() * P * M - N.adjoint() * P * N - ds.C.adjoint() * J * ds.C)
          : MatrixXcd(M.adjoint() * P + P * M + ds.C.adjoint() * J * ds.C);
  if (coupling.norm() > tol.residual_tol * cscale)
    rep.fail("P does not solve the coupling equation for this data");

  if (ds.n1() > 0 && numerical_rank(observability_matrix(ds.C21(), ds.A1), tol) < ds.n1())
    rep.fail("pair (C21, A1) is not observable");
  if (ds.n2() > 0 && numerical_rank(observability_matrix(ds.C12(), ds.A2), tol) < ds.n2())
    rep.fail("pair (C12, A2) is not observable");

  rep.X = pinv_hermitian(P, tol);
  if (numerical_rank(P, tol) < ds.n()) {
    if (ds.domain == Domain::Disc) {
      const MatrixXcd proj = P * rep.X;  // orthogonal projector onto rng P
      const MatrixXcd rest = MatrixXcd::Identity(ds.n(), ds.n()) - proj;
      if ((rest * M * proj).norm() > tol.residual_tol * std::max(1.0, M.norm()) ||
          (rest * N * proj).norm() > tol.residual_tol * std::max(1.0, N.norm()))
        rep.fail("range of P is not invariant for the pencil");
    } else {
      const MatrixXcd ric = rep.X * M.adjoint() + M * rep.X +
                            rep.X * ds.C.adjoint() * J * ds.C * rep.X;
      if (ric.norm() > tol.residual_tol * std::max(1.0, cscale))
        rep.fail("pseudo-inverse of P does not solve the quadratic residual equation");
    }
  }

  rep.kappa_min = inertia(P, tol).n_neg;
  rep.kappa_feasible = ds.kappa >= rep.kappa_min;
  return rep;
}

MatrixXcd pick_matrix_np(const std::vector<Complex>& alphas,
                         const std::vector<MatrixXcd>& svalues) {
  if (alphas.empty() || alphas.size() != svalues.size())
    throw std::invalid_argument("pick_matrix_np: node/value count mismatch");
  const int t = static_cast<int>(alphas.size());
  const int q = static_cast<int>(svalues[0].cols());
  MatrixXcd P(t * q, t * q);
  for (int j = 0; j < t; ++j)
    for (int k = 0; k < t; ++k) {
      const Complex denom = 1.0 - std::conj(alphas[j]) * alphas[k];
      P.block(j * q, k * q, q, q) =
          (MatrixXcd::Identity(q, q) - svalues[j].adjoint() * svalues[k]) / denom;
    }
  return 0.5 * (P + P.adjoint());
}

DataSet make_np_dataset(const std::vector<Complex>& alphas,
                        const std::vector<MatrixXcd>& svalues, int kappa) {
  const int t = static_cast<int>(alphas.size());
  const int p = static_cast<int>(svalues[0].rows());
  const int q = static_cast<int>(svalues[0].cols());
  DataSet ds;
  ds.domain = Domain::Disc;
  ds.p = p;
  ds.q = q;
  ds.kappa = kappa;
  ds.A1 = MatrixXcd::Zero(t * q, t * q);
  ds.A2 = MatrixXcd(0, 0);
  ds.C = MatrixXcd(p + q, t * q);
  for (int j = 0; j < t; ++j) {
    ds.A1.block(j * q, j * q, q, q) = alphas[j] * MatrixXcd::Identity(q, q);
    ds.C.block(0, j * q, p, q) = svalues[j];
    ds.C.block(p, j * q, q, q) = MatrixXcd::Identity(q, q);
  }
  ds.P = pick_matrix_np(alphas, svalues);
  return ds;
}

int negative_squares_sample(const RationalMatrix& s, const Tolerances& tol) {
  const int p = s.rows();
  std::vector<Complex> pts;
  for (Complex w : sample_grid(s.domain()))
    if (s.is_finite_at(w)) pts.push_back(w);
  const int t = static_cast<int>(pts.size());
  MatrixXcd G(t * p, t * p);
  for (int j = 0; j < t; ++j)
    for (int k = 0; k < t; ++k)
      G.block(j * p, k * p, p, p) =
          (MatrixXcd::Identity(p, p) - s.eval(pts[j]) * s.eval(pts[k]).adjoint()) /
          rho(s.domain(), pts[k], pts[j]);
  G = 0.5 * (G + G.adjoint());
  return inertia(G, tol).n_neg;
}

int nu_degenerate(const DataSet& ds, const Tolerances& tol) {
  const MatrixXcd P = 0.5 * (ds.P + ds.P.adjoint());
  MatrixXcd probe;
  if (ds.domain == Domain::Disc) {
    const MatrixXcd M = ds.M(), N = ds.N();
    probe = M.adjoint() * P * P * M + N.adjoint() * P * P * N + ds.C.adjoint() * ds.C;
  } else {
    probe = P * P + ds.C.adjoint() * ds.C;
  }
  return numerical_rank(probe, tol) - numerical_rank(P, tol);
}

MatrixXcd neutral_subspace(const DataSet& ds, const Tolerances& tol) {
  const MatrixXcd kerP = null_space(0.5 * (ds.P + ds.P.adjoint()), tol);
  if (kerP.cols() == 0) return MatrixXcd(ds.m(), 0);
  const Complex mu = default_mu(ds, tol);
  const MatrixXcd Fmu =
      ds.C * (ds.M() - mu * ds.N()).fullPivLu().solve(MatrixXcd::Identity(ds.n(), ds.n()));
  const MatrixXcd K = orthonormal_colspace(Fmu * kerP, tol);
  const MatrixXcd J = signature_matrix(ds.p, ds.q);
  if ((K.adjoint() * J * K).norm() > tol.residual_tol)
    throw SolverError(ErrorCode::NotNeutral,
                      "image of ker P is not signature-neutral at the normalization point");
  return K;
}

AlignmentPair uv_from_neutral(const MatrixXcd& K, int p, int q, const Tolerances& tol) {
  if (K.rows() != p + q) throw std::invalid_argument("uv_from_neutral: bad row split");
  const int nu = static_cast<int>(K.cols());
  if (nu == 0)
    return {MatrixXcd::Identity(p, p), MatrixXcd::Identity(q, q)};
  if (nu > std::min(p, q))
    throw SolverError(ErrorCode::DegenerateAlignment,
                      "neutral subspace is larger than the smaller coefficient dimension");

  const MatrixXcd X = K.topRows(p), Y = K.bottomRows(q);
  if ((X.adjoint() * X - Y.adjoint() * Y).norm() > tol.residual_tol)
    throw SolverError(ErrorCode::NotNeutral, "component Gram matrices disagree");

  const MatrixXcd gram = 0.5 * (X.adjoint() * X + Y.adjoint() * Y);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gram);
  if (es.eigenvalues()(0) <= tol.rank_tol * std::max(1.0, es.eigenvalues()(nu - 1)))
    throw SolverError(ErrorCode::DegenerateAlignment, "neutral basis has a singular Gram");

  const MatrixXcd R = gram.llt().matrixU();  // gram = R^* R
  const MatrixXcd Qx = R.adjoint().triangularView<Eigen::Lower>().solve(X.adjoint()).adjoint();
  const MatrixXcd Qy = R.adjoint().triangularView<Eigen::Lower>().solve(Y.adjoint()).adjoint();
  if ((Qx.adjoint() * Qx - MatrixXcd::Identity(nu, nu)).norm() > 1e-8 ||
      (Qy.adjoint() * Qy - MatrixXcd::Identity(nu, nu)).norm() > 1e-8)
    throw SolverError(ErrorCode::DegenerateAlignment, "aligned frames are not orthonormal");

  AlignmentPair out;
  out.U = MatrixXcd(p, p);
  out.U << orthonormal_complement(Qx), Qx;
  out.V = MatrixXcd(q, q);
  out.V << orthonormal_complement(Qy), Qy;
  return out;
}

}  // namespace schur
