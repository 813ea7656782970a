#include "schur/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace schur {

namespace {

// rho_mu(lambda) as a polynomial in lambda for a fixed boundary point mu.
Poly rho_poly(Domain dom, Complex mu) {
  if (dom == Domain::Disc) return Poly({Complex(1.0), -std::conj(mu)});
  return Poly({std::conj(mu), Complex(1.0)});
}

// Interior evaluation grid used by the residual checks.
std::vector<Complex> interior_grid(Domain dom) {
  std::vector<Complex> pts;
  if (dom == Domain::Disc) {
    for (double r : {0.25, 0.62}) {
      for (int k = 0; k < 5; ++k) {
        const double th = 2.0 * M_PI * (k + 0.35) / 5.0;
        pts.emplace_back(r * std::cos(th), r * std::sin(th));
      }
    }
  } else {
    for (double re : {0.3, 1.1, 2.6}) {
      for (double im : {-1.7, -0.4, 0.6, 1.9}) pts.emplace_back(re, im);
    }
  }
  return pts;
}

std::vector<Complex> boundary_grid(Domain dom, int count = 8) {
  std::vector<Complex> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k)
    pts.push_back(boundary_point(dom, (k + 0.37) / count));
  return pts;
}

enum class Definiteness { Positive, Negative };

// Checks strict definiteness of a Hermitian Gramian and returns it
// symmetrized; throws DegenerateBlock otherwise.
MatrixXcd require_definite(MatrixXcd Q, Definiteness want, const Tolerances& tol,
                           const std::string& label) {
  Q = 0.5 * (Q + Q.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Q);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  const bool ok = (want == Definiteness::Positive) ? lo > tol.eig_tol * scale
                                                   : hi < -tol.eig_tol * scale;
  if (!ok)
    throw SolverError(ErrorCode::DegenerateBlock,
                      label + " observability Gramian lost definiteness");
  return Q;
}

// Restriction of an observed pair (Cblk, A) to the column space of the
// corresponding row block of X. Returns true when the restriction is
// nontrivial; the restricted pair comes back through the out-parameters.
bool restrict_pair(const MatrixXcd& Xrows, const MatrixXcd& A, const MatrixXcd& Cblk,
                   const Tolerances& tol, MatrixXcd& Ar, MatrixXcd& Cr) {
  if (Xrows.rows() == 0) return false;
  const MatrixXcd S = orthonormal_colspace(Xrows, tol);
  if (S.cols() == 0) return false;
  // The factorization needs this range to be A-invariant; with admissible X
  // it is, so a violation indicates inconsistent inputs.
  const MatrixXcd leak = (A * S - S * (S.adjoint() * A * S));
  if (leak.norm() > 1e-7 * std::max(1.0, A.norm()))
    throw SolverError(ErrorCode::DegenerateBlock,
                      "row-range of the Gram inverse is not invariant");
  Ar = S.adjoint() * A * S;
  Cr = Cblk * S;
  return true;
}

// Inner denominator attached to the right pair (C21, A1): it carries the
// spectrum of A1 reflected into Omega_- through an observability Gramian.
RationalMatrix right_denominator(Domain dom, const MatrixXcd& A1r,
                                 const MatrixXcd& C21r, Complex mu, int q,
                                 const Tolerances& tol) {
  const int r = static_cast<int>(A1r.rows());
  if (dom == Domain::Disc) {
    MatrixXcd Q = solve_stein(A1r.adjoint(), A1r, C21r.adjoint() * C21r);
    Q = require_definite(Q, Definiteness::Positive, tol, "right");
    // I_q + (lambda - mu) C21r (A1r - mu I)^{-1} Q^{-1} (lambda A1r^* - I)^{-1} C21r^*
    const MatrixXcd Qinv = Q.llt().solve(MatrixXcd::Identity(r, r));
    const MatrixXcd L =
        C21r * (A1r - mu * MatrixXcd::Identity(r, r)).fullPivLu().solve(Qinv);
    PolyMatrix pencil = PolyMatrix::constant(-MatrixXcd::Identity(r, r)) +
                        PolyMatrix::constant(A1r.adjoint()).scaled(Poly::x());
    const Poly det = pencil.determinant();
    const PolyMatrix mid = PolyMatrix::constant(L) * pencil.adjugate() *
                           PolyMatrix::constant(C21r.adjoint());
    const Poly shift({-mu, Complex(1.0)});
    PolyMatrix num = PolyMatrix::identity(q).scaled(det) + mid.scaled(shift);
    return RationalMatrix(std::move(num), det, dom);
  }
  MatrixXcd Q = solve_sylvester(A1r.adjoint(), A1r, -C21r.adjoint() * C21r);
  Q = require_definite(Q, Definiteness::Negative, tol, "right");
  // I_q + C21r Q^{-1} (A1r^* + lambda I)^{-1} C21r^*
  const MatrixXcd L = C21r * Q.fullPivLu().solve(MatrixXcd::Identity(r, r));
  PolyMatrix pencil = PolyMatrix::constant(A1r.adjoint()) +
                      PolyMatrix::identity(r).scaled(Poly::x());
  const Poly det = pencil.determinant();
  const PolyMatrix mid = PolyMatrix::constant(L) * pencil.adjugate() *
                         PolyMatrix::constant(C21r.adjoint());
  PolyMatrix num = PolyMatrix::identity(q).scaled(det) + mid;
  return RationalMatrix(std::move(num), det, dom);
}

// Inner denominator attached to the left pair (C12, A2): it carries the
// spectrum of A2 reflected into Omega_-.
RationalMatrix left_denominator(Domain dom, const MatrixXcd& A2r,
                                const MatrixXcd& C12r, Complex mu, int p,
                                const Tolerances& tol) {
  const int r = static_cast<int>(A2r.rows());
  if (dom == Domain::Disc) {
    MatrixXcd Q = solve_stein(A2r.adjoint(), A2r, -C12r.adjoint() * C12r);
    Q = require_definite(Q, Definiteness::Negative, tol, "left");
    // I_p + (1 - conj(mu) lambda) C12r (I - lambda A2r)^{-1} Q^{-1}
    //       (I - conj(mu) A2r^*)^{-1} C12r^*
    const MatrixXcd inner =
        (MatrixXcd::Identity(r, r) - std::conj(mu) * A2r.adjoint())
            .fullPivLu()
            .solve(C12r.adjoint());
    const MatrixXcd R = Q.fullPivLu().solve(inner);
    PolyMatrix pencil = PolyMatrix::constant(MatrixXcd::Identity(r, r)) +
                        PolyMatrix::constant(-A2r).scaled(Poly::x());
    const Poly det = pencil.determinant();
    const PolyMatrix mid = PolyMatrix::constant(C12r) * pencil.adjugate() *
                           PolyMatrix::constant(R);
    const Poly shift({Complex(1.0), -std::conj(mu)});
    PolyMatrix num = PolyMatrix::identity(p).scaled(det) + mid.scaled(shift);
    return RationalMatrix(std::move(num), det, dom);
  }
  MatrixXcd Q = solve_sylvester(A2r.adjoint(), A2r, -C12r.adjoint() * C12r);
  Q = require_definite(Q, Definiteness::Positive, tol, "left");
  // I_p + C12r (A2r - lambda I)^{-1} Q^{-1} C12r^*
  const MatrixXcd R = Q.llt().solve(C12r.adjoint());
  PolyMatrix pencil = PolyMatrix::constant(A2r) +
                      PolyMatrix::identity(r).scaled(-Poly::x());
  const Poly det = pencil.determinant();
  const PolyMatrix mid =
      PolyMatrix::constant(C12r) * pencil.adjugate() * PolyMatrix::constant(R);
  PolyMatrix num = PolyMatrix::identity(p).scaled(det) + mid;
  return RationalMatrix(std::move(num), det, dom);
}

// Polynomial whose roots are the reflections into Omega_- of the interior
// denominator roots of W; the natural pole locations for the kernel solve.
Poly reflected_interior_denominator(const RationalMatrix& W) {
  const Domain dom = W.domain();
  std::vector<Complex> roots;
  for (const RootCluster& cl : W.den_roots()) {
    if (!in_plus(dom, cl.location, 1e-7)) continue;
    if (dom == Domain::Disc && std::abs(cl.location) < 1e-7)
      continue;  // reflection through the origin lands at infinity
    for (int k = 0; k < cl.multiplicity; ++k)
      roots.push_back(reflect(dom, cl.location));
  }
  return Poly::from_roots(roots);
}

// Exterior-root part of a monic denominator polynomial.
Poly exterior_part(const Poly& den, Domain dom) {
  std::vector<Complex> roots;
  for (const RootCluster& cl : cluster_roots(den.roots()))
    if (in_minus(dom, cl.location, 1e-7))
      for (int k = 0; k < cl.multiplicity; ++k) roots.push_back(cl.location);
  return Poly::from_roots(roots);
}

}  // namespace

RationalMatrix build_w(const DataSet& ds, const MatrixXcd& X, const Tolerances& tol) {
  const int m = ds.m();
  const Domain dom = ds.domain;
  if (ds.n() == 0) return RationalMatrix::identity(m, dom);

  const Complex mu = default_mu(ds, tol);
  const MatrixXcd pencil_mu = ds.M() - mu * ds.N();
  const MatrixXcd Fmu =
      ds.C * pencil_mu.fullPivLu().solve(MatrixXcd::Identity(ds.n(), ds.n()));
  const MatrixXcd G = X * Fmu.adjoint() * signature_matrix(ds.p, ds.q);

  PolyMatrix pencil = PolyMatrix::constant(ds.M()) +
                      PolyMatrix::constant(-ds.N()).scaled(Poly::x());
  const Poly det = pencil.determinant();
  if (det.is_zero())
    throw SolverError(ErrorCode::SingularDeterminant, "node pencil is identically singular");
  const PolyMatrix mid =
      PolyMatrix::constant(ds.C) * pencil.adjugate() * PolyMatrix::constant(G);
  PolyMatrix num = PolyMatrix::identity(m).scaled(det) -
                   mid.scaled(rho_poly(dom, mu));
  RationalMatrix W(std::move(num), det, dom);

  // rho_mu vanishes at the boundary point mu, so W(mu) = I identically; a
  // visible deviation means the evaluation is numerically unreliable.
  const double dev = (W.eval(mu) - MatrixXcd::Identity(m, m)).norm();
  if (dev > 1e-8 * std::max(1.0, X.norm() * Fmu.squaredNorm()))
    throw SolverError(ErrorCode::FactorizationResidual,
                      "resolvent normalization at mu failed");
  return W;
}

RationalMatrix w_inverse(const RationalMatrix& W, int p, int q) {
  const RationalMatrix j = RationalMatrix::constant(signature_matrix(p, q), W.domain());
  return j * W.adjoint_sharp() * j;
}

double kernel_residual(const DataSet& ds, const MatrixXcd& X,
                       const RationalMatrix& W, const Tolerances& tol) {
  const RationalMatrix F = transfer_F(ds);
  const MatrixXcd j = signature_matrix(ds.p, ds.q);
  const std::vector<Complex> pts = interior_grid(ds.domain);

  double worst = 0.0;
  for (Complex lam : pts) {
    if (!F.is_finite_at(lam) || !W.is_finite_at(lam)) continue;
    const MatrixXcd Fl = F.eval(lam);
    const MatrixXcd Wl = W.eval(lam);
    for (Complex om : pts) {
      if (!F.is_finite_at(om) || !W.is_finite_at(om)) continue;
      const MatrixXcd Fo = F.eval(om);
      const MatrixXcd Wo = W.eval(om);
      const MatrixXcd lhs = Fl * X * Fo.adjoint();
      const MatrixXcd rhs = (j - Wl * j * Wo.adjoint()) / rho(ds.domain, om, lam);
      worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, lhs.norm()));
    }
  }
  (void)tol;
  return worst;
}

AssociatedPair associated_pair(const DataSet& ds, const MatrixXcd& X,
                               const Tolerances& tol) {
  const Domain dom = ds.domain;
  const Complex mu = default_mu(ds, tol);
  AssociatedPair pair{BPProduct(ds.p, dom), BPProduct(ds.q, dom)};

  MatrixXcd Ar, Cr;
  if (restrict_pair(X.topRows(ds.n1()), ds.A1, ds.C21(), tol, Ar, Cr))
    pair.b2 = inner_to_bp(right_denominator(dom, Ar, Cr, mu, ds.q, tol), tol);
  if (restrict_pair(X.bottomRows(ds.n2()), ds.A2, ds.C12(), tol, Ar, Cr))
    pair.b1 = inner_to_bp(left_denominator(dom, Ar, Cr, mu, ds.p, tol), tol);
  return pair;
}

PhiRows phi_rows(const RationalMatrix& W, const AssociatedPair& pair, int p, int q,
                 const Tolerances& tol) {
  const int m = p + q;
  PhiRows out;
  out.phi2 = pair.b2.to_rational() * W.block(p, 0, q, m);
  if (out.phi2.pole_mult_region(Region::Interior, tol) != 0 ||
      out.phi2.has_boundary_pole(tol))
    throw SolverError(ErrorCode::HolomorphyViolation,
                      "bottom row keeps poles in the closed right region");

  out.phi1_tilde = pair.b1.to_rational().inverse() * W.block(0, 0, p, m);
  if (out.phi1_tilde.pole_mult_region(Region::Exterior, tol) != 0 ||
      out.phi1_tilde.has_boundary_pole(tol) || !out.phi1_tilde.bounded_at_infinity())
    throw SolverError(ErrorCode::HolomorphyViolation,
                      "top row keeps poles in the closed left region");
  return out;
}

KResult compute_K(const RationalMatrix& W, const AssociatedPair& pair,
                  const PhiRows& phis, int p, int q, const Tolerances& tol) {
  const Domain dom = W.domain();
  const int m = p + q;
  const PolyMatrix& Phi = phis.phi2.num();  // q x m over the scalar e below
  const Poly& e = phis.phi2.den();

  int phi_deg = 0;
  for (int i = 0; i < q; ++i)
    for (int l = 0; l < m; ++l) phi_deg = std::max(phi_deg, Phi.at(i, l).degree());

  // Candidate denominators for (g1, g2): poles go to the reflections of the
  // interior spectrum and to the exterior poles the rows already carry, plus
  // auxiliary pole sites deep in Omega_-. The auxiliary sites are pairwise
  // distinct: a repeated root of high multiplicity cannot be re-identified
  // from computed coefficients, which wrecks every cancellation after it.
  const Poly capacity = reflected_interior_denominator(W) * exterior_part(e, dom);
  const auto pad = [dom](int extra) {
    std::vector<Complex> roots;
    roots.reserve(extra);
    for (int j = 0; j < extra; ++j) {
      if (dom == Domain::Disc) {
        const double th = 2.0 * M_PI * (j + 0.5) / 16.0;
        roots.emplace_back(1.7 * std::cos(th), 1.7 * std::sin(th));
      } else {
        roots.emplace_back(-1.0 - 0.4 * j, (j % 2) ? 0.3 : -0.3);
      }
    }
    return Poly::from_roots(roots);
  };
  const int slack0 = e.degree() + phi_deg + 2;
  const int extra1 = std::max(2, phi_deg);
  std::vector<std::pair<Poly, int>> attempts;  // (h, numerator degree cap)
  for (int c : {0, 1, 2}) {
    Poly base(1.0);
    for (int t = 0; t < c; ++t) base *= capacity;
    for (int extra : {0, extra1, slack0}) {
      const Poly h = base * pad(extra);
      // Disc solutions are free at infinity, so the numerator degree may
      // exceed deg h; proper half-plane solutions may not.
      const int D = (dom == Domain::Disc) ? h.degree() + slack0 + extra
                                          : h.degree();
      attempts.emplace_back(h, D);
    }
  }

  bool solved_but_not_holomorphic = false;
  for (const auto& [h, D] : attempts) {
    const Poly rhs_scalar = e * h;
    const int dmax = std::max(phi_deg + D, rhs_scalar.degree());

    MatrixXcd A = MatrixXcd::Zero(q * (dmax + 1), m * (D + 1));
    for (int i = 0; i < q; ++i)
      for (int k = 0; k <= dmax; ++k)
        for (int l = 0; l < m; ++l)
          for (int a = 0; a <= D; ++a)
            A(i * (dmax + 1) + k, l * (D + 1) + a) = Phi.at(i, l).coeff(k - a);

    const auto cod = A.completeOrthogonalDecomposition();
    PolyMatrix G1num(p, q), G2num(q, q);
    bool ok = true;
    for (int j = 0; j < q && ok; ++j) {
      VectorXcd rhs = VectorXcd::Zero(q * (dmax + 1));
      for (int k = 0; k <= dmax; ++k) rhs(j * (dmax + 1) + k) = rhs_scalar.coeff(k);
      VectorXcd u = cod.solve(rhs);
      // A couple of refinement sweeps: the raw solve leaves a residual whose
      // back-substitution error, amplified by the conditioning of the
      // convolution system, shows up as weak residual poles downstream.
      for (int sweep = 0; sweep < 2; ++sweep) u += cod.solve(rhs - A * u);
      // Only a near-exact polynomial identity is acceptable: an approximate
      // least-squares fit cannot induce a holomorphic kernel.
      if ((A * u - rhs).norm() > 5e-12 * std::max(1.0, rhs.norm())) {
        ok = false;
        break;
      }
      for (int l = 0; l < m; ++l) {
        std::vector<Complex> cs(D + 1);
        for (int a = 0; a <= D; ++a) cs[a] = u(l * (D + 1) + a);
        Poly entry{std::move(cs)};
        if (l < p)
          G1num.at(l, j) = std::move(entry);
        else
          G2num.at(l - p, j) = std::move(entry);
      }
    }
    if (!ok) continue;

    KResult out;
    out.g1 = RationalMatrix(std::move(G1num), h, dom);
    out.g2 = RationalMatrix(std::move(G2num), h, dom);
    out.K = (W.block(0, 0, p, p) * out.g1 + W.block(0, p, p, q) * out.g2) *
            pair.b2.to_rational();

    // Confirm the combination pointwise; forming the residual as one rational
    // function would square the denominators and drown it in roundoff.
    std::vector<Complex> pts = interior_grid(dom);
    const std::vector<Complex> bpts = boundary_grid(dom);
    pts.insert(pts.end(), bpts.begin(), bpts.end());
    double worst = 0.0;
    for (Complex z : pts) {
      if (!phis.phi2.is_finite_at(z) || !out.g1.is_finite_at(z) ||
          !out.g2.is_finite_at(z))
        continue;
      const MatrixXcd row = phis.phi2.eval(z);
      const MatrixXcd got = row.leftCols(p) * out.g1.eval(z) +
                            row.rightCols(q) * out.g2.eval(z);
      worst = std::max(worst, (got - MatrixXcd::Identity(q, q)).norm());
    }
    if (worst > 1e-9) continue;
    if (out.K.pole_mult_region(Region::Interior, tol) != 0 ||
        out.K.has_boundary_pole(tol) ||
        (dom == Domain::HalfPlane && !out.K.bounded_at_infinity())) {
      solved_but_not_holomorphic = true;
      continue;
    }
    return out;
  }
  if (solved_but_not_holomorphic)
    throw SolverError(ErrorCode::FactorizationResidual,
                      "induced kernel is not one-sided holomorphic");
  throw SolverError(ErrorCode::DegreeCapExceeded,
                    "no bounded rational solution within the degree cap");
}

ThetaFactorization theta_phi(const RationalMatrix& W, const AssociatedPair& pair,
                             const KResult& k, int p, int q, const Tolerances& tol) {
  const Domain dom = W.domain();
  const RationalMatrix b1 = pair.b1.to_rational();
  const RationalMatrix b2 = pair.b2.to_rational();
  const RationalMatrix b1inv = b1.inverse();
  const RationalMatrix b2inv = b2.inverse();

  ThetaFactorization out;
  out.theta = RationalMatrix::vcat(RationalMatrix::hcat(b1, k.K * b2inv),
                                   RationalMatrix::hcat(RationalMatrix::zero(q, p, dom), b2inv));
  out.theta_tilde =
      RationalMatrix::vcat(RationalMatrix::hcat(b1, RationalMatrix::zero(p, q, dom)),
                           RationalMatrix::hcat(k.K.adjoint_sharp() * b1, b2inv));
  // Block inverse of the triangular factor avoids an adjugate of the full
  // size.  It is assembled as a unipotent factor times a block-diagonal one;
  // concatenating the blocks directly would duplicate the denominator of
  // b1inv and leave near-double roots that spoil downstream cancellation.
  const RationalMatrix unipotent =
      RationalMatrix::vcat(RationalMatrix::hcat(RationalMatrix::identity(p, dom), -k.K),
                           RationalMatrix::hcat(RationalMatrix::zero(q, p, dom),
                                                RationalMatrix::identity(q, dom)));
  const RationalMatrix diag =
      RationalMatrix::vcat(RationalMatrix::hcat(b1inv, RationalMatrix::zero(p, q, dom)),
                           RationalMatrix::hcat(RationalMatrix::zero(q, p, dom), b2));
  out.phi = diag * (unipotent * W);

  if (out.phi.pole_mult_region(Region::Interior, tol) != 0 ||
      out.phi.has_boundary_pole(tol) ||
      (dom == Domain::HalfPlane && !out.phi.bounded_at_infinity()))
    throw SolverError(ErrorCode::FactorizationResidual,
                      "residual factor is not holomorphic on the right region");
  if (out.phi.zero_mult_region(Region::Interior, tol) != 0)
    throw SolverError(ErrorCode::FactorizationResidual,
                      "residual factor is not outer on the right region");

  // W = Theta * Phi and the twin signature identity, checked on samples.
  std::vector<Complex> pts = interior_grid(dom);
  const std::vector<Complex> bpts = boundary_grid(dom);
  pts.insert(pts.end(), bpts.begin(), bpts.end());
  const MatrixXcd j = signature_matrix(p, q);
  const RationalMatrix twin_sharp = out.theta_tilde.adjoint_sharp();
  double worst_split = 0.0, worst_twin = 0.0;
  for (Complex pt : pts) {
    if (out.theta.is_finite_at(pt) && out.phi.is_finite_at(pt) && W.is_finite_at(pt)) {
      const MatrixXcd Wv = W.eval(pt);
      worst_split = std::max(worst_split,
                             (Wv - out.theta.eval(pt) * out.phi.eval(pt)).norm() /
                                 std::max(1.0, Wv.norm()));
    }
    if (out.theta.is_finite_at(pt) && twin_sharp.is_finite_at(pt)) {
      const MatrixXcd tw = twin_sharp.eval(pt) * j * out.theta.eval(pt);
      worst_twin = std::max(worst_twin, (tw - j).norm());
    }
  }
  if (worst_split > 1e-7 || worst_twin > 1e-6)
    throw SolverError(ErrorCode::FactorizationResidual,
                      "triangular splitting residuals exceed tolerance");
  return out;
}

}  // namespace schur
