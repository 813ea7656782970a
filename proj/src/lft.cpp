#include "schur/lft.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace schur {

namespace {

// Deterministic interior sample points, spiralling away from the boundary so
// that pointwise checks see both near-boundary and central behaviour.
std::vector<Complex> interior_samples(Domain dom, int count) {
  std::vector<Complex> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double r = 0.15 + 0.75 * (k + 0.5) / count;
    const double th = 2.0 * M_PI * (0.37 * k + 0.11);
    const Complex zeta(r * std::cos(th), r * std::sin(th));
    pts.push_back(dom == Domain::Disc ? zeta
                                      : (1.0 + zeta) / (1.0 - zeta));
  }
  return pts;
}

// Largest singular value, zero for an empty matrix.
double sigma_max(const MatrixXcd& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXcd> svd(A);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

// True when det(block(lambda)) is numerically zero at every probe point, in
// which case the matrix is singular as a rational function.
bool det_vanishes_identically(const RationalMatrix& A, Domain dom) {
  for (const Complex& z : interior_samples(dom, 11)) {
    if (!A.is_finite_at(z)) continue;
    const MatrixXcd v = A.eval(z);
    const double scale = std::max(1.0, std::pow(sigma_max(v), v.rows()));
    if (std::abs(v.determinant()) > 1e-12 * scale) return false;
  }
  return true;
}

// Whether W is j-unitary on the boundary, the regime in which the two
// closed forms of the linear fractional transform coincide.
bool boundary_j_unitary(const RationalMatrix& W, int p, int q) {
  const MatrixXcd j = signature_matrix(p, q);
  bool seen = false;
  for (int k = 0; k < 8; ++k) {
    const Complex t = boundary_point(W.domain(), (k + 0.29) / 8.0);
    if (!W.is_finite_at(t)) continue;
    const MatrixXcd v = W.eval(t);
    const double scale = 1.0 + v.squaredNorm();
    if ((v * j * v.adjoint() - j).norm() > 1e-6 * scale) return false;
    seen = true;
  }
  return seen;
}

struct WBlocks {
  RationalMatrix w11, w12, w21, w22;
};

WBlocks split_w(const RationalMatrix& W, int p, int q) {
  return {W.block(0, 0, p, p), W.block(0, p, p, q), W.block(p, 0, q, p),
          W.block(p, p, q, q)};
}

// Groups a spectrum into distinct locations with multiplicities.
std::vector<RootCluster> spectrum_clusters(const MatrixXcd& A) {
  if (A.rows() == 0) return {};
  return cluster_roots(eigenvalues(A));
}

std::vector<Complex> conj_points(const MatrixXcd& A) {
  std::vector<Complex> out;
  for (const Complex& e : eigenvalues(A)) out.push_back(std::conj(e));
  return out;
}

// (lambda I - A)^{-1} as a rational matrix; A is a small dense block.
RationalMatrix resolvent_of(const MatrixXcd& A, Domain dom) {
  const int n = static_cast<int>(A.rows());
  PolyMatrix pencil(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pencil.at(i, j) = (i == j) ? Poly({-A(i, j), Complex(1.0)})
                                 : Poly({-A(i, j)});
  return RationalMatrix::from_poly(std::move(pencil), dom).inverse();
}

// Sum of residues of G over the given distinct points.  The contour radius
// around each point is chosen to enclose every nearby denominator root that
// belongs to it while staying clear of the other singularities of G.
MatrixXcd residue_sum(const RationalMatrix& G,
                      const std::vector<RootCluster>& points,
                      const Tolerances& tol) {
  const std::vector<RootCluster> dens = G.den_roots();
  MatrixXcd acc = MatrixXcd::Zero(G.rows(), G.cols());
  for (const RootCluster& c : points) {
    double radius = 0.25;
    for (const RootCluster& d : dens) {
      const double dist = std::abs(d.location - c.location);
      if (dist > 1e-6 * std::max(1.0, std::abs(c.location)))
        radius = std::min(radius, 0.5 * dist);
    }
    acc += G.laurent(c.location, 1, radius, 256, tol).get(-1);
  }
  return acc;
}

bool matrix_close(const MatrixXcd& got, const MatrixXcd& want, double tol) {
  return (got - want).norm() <= tol * std::max(1.0, want.norm());
}

}  // namespace

Parameter make_parameter(const RationalMatrix& eps, const Tolerances& tol) {
  KLFactorization left = kl_factor_left(eps, tol);
  KLFactorization right = kl_factor_right(eps, tol);
  if (left.b.bp_degree() != right.b.bp_degree())
    throw SolverError(ErrorCode::ExtractionStalled,
                      "left and right factorizations disagree on the pole "
                      "count of the parameter");
  // Both factorizations must reproduce eps away from its poles.
  for (const Complex& z : interior_samples(eps.domain(), 7)) {
    if (!eps.is_finite_at(z)) continue;
    const MatrixXcd v = eps.eval(z);
    const double gate = 1e-8 * (1.0 + v.norm());
    const MatrixXcd lv =
        left.b.bp_eval(z).partialPivLu().solve(left.s0.eval(z));
    const MatrixXcd rv = right.b.bp_eval(z)
                             .transpose()
                             .partialPivLu()
                             .solve(right.s0.eval(z).transpose())
                             .transpose();
    if ((lv - v).norm() > gate || (rv - v).norm() > gate)
      throw SolverError(ErrorCode::ExtractionStalled,
                        "factorizations fail to reconstruct the parameter");
  }
  const int kappa2 = left.b.bp_degree();
  return Parameter{eps, std::move(left.b), std::move(left.s0),
                   std::move(right.s0), std::move(right.b), kappa2};
}

RationalMatrix t_transform(const RationalMatrix& W, const RationalMatrix& eps,
                           const Tolerances& tol) {
  const int p = eps.rows();
  const int q = eps.cols();
  if (W.rows() != p + q || W.cols() != p + q)
    throw SolverError(ErrorCode::DegenerateBlock,
                      "coefficient matrix does not match the parameter size");
  const WBlocks wb = split_w(W, p, q);
  const RationalMatrix den = wb.w21 * eps + wb.w22;
  if (det_vanishes_identically(den, W.domain()))
    throw SolverError(ErrorCode::DegenerateDenominator,
                      "denominator block of the linear fractional transform "
                      "is identically singular");
  const RationalMatrix s = (wb.w11 * eps + wb.w12) * den.inverse();

  // The dual closed form is an identity only for j-unitary coefficients;
  // checking it there guards the block bookkeeping above.
  if (boundary_j_unitary(W, p, q)) {
    int checked = 0;
    for (const Complex& z : interior_samples(W.domain(), 40)) {
      if (checked >= 10) break;
      const Complex zr = reflect(W.domain(), z);
      if (!s.is_finite_at(z) || !eps.is_finite_at(z) || !W.is_finite_at(zr))
        continue;
      const MatrixXcd wsh = W.eval(zr).adjoint();
      const MatrixXcd ev = eps.eval(z);
      const MatrixXcd lhs =
          wsh.block(0, 0, p, p) + ev * wsh.block(p, 0, q, p);
      const MatrixXcd rhs =
          wsh.block(0, p, p, q) + ev * wsh.block(p, p, q, q);
      Eigen::JacobiSVD<MatrixXcd> svd(lhs);
      const auto& sv = svd.singularValues();
      if (sv.size() == 0 || sv(sv.size() - 1) < 1e-6 * std::max(1.0, sv(0)))
        continue;  // too close to the exceptional set to compare reliably
      const MatrixXcd sv1 = s.eval(z);
      const MatrixXcd sv2 = lhs.partialPivLu().solve(rhs);
      if ((sv1 - sv2).norm() > 1e-9 * std::max(1.0, sv1.norm()))
        throw SolverError(ErrorCode::FactorizationResidual,
                          "linear fractional transform disagrees with its "
                          "dual form");
      ++checked;
    }
  }
  return s;
}

RationalMatrix pg_transform(const RationalMatrix& W, int p,
                            const Tolerances& tol) {
  (void)tol;
  const int q = W.rows() - p;
  if (W.rows() != W.cols() || p < 0 || q <= 0)
    throw SolverError(ErrorCode::DegenerateBlock,
                      "coefficient matrix cannot be split at the given row");
  const WBlocks wb = split_w(W, p, q);
  if (det_vanishes_identically(wb.w22, W.domain()))
    throw SolverError(ErrorCode::DegenerateBlock,
                      "lower right block is identically singular");
  const RationalMatrix w22i = wb.w22.inverse();
  const RationalMatrix top =
      RationalMatrix::hcat(wb.w11 - wb.w12 * w22i * wb.w21, wb.w12 * w22i);
  const RationalMatrix bottom =
      RationalMatrix::hcat((w22i * wb.w21).scaled(-1.0), w22i);
  return RationalMatrix::vcat(top, bottom);
}

RationalMatrix parametrize(const DataSet& ds, const RationalMatrix& eps_tilde,
                           const Tolerances& tol) {
  ValidationReport vr = validate(ds, tol);
  if (!vr.ok)
    throw SolverError(ErrorCode::SpectrumViolation,
                      "data set fails validation: " + vr.failures.front());
  if (!vr.kappa_feasible)
    throw SolverError(ErrorCode::SpectrumViolation,
                      "target index below the negative index of the data");
  const RationalMatrix W = build_w(ds, vr.X, tol);
  const int p = ds.p;
  const int q = ds.q;

  RationalMatrix eps = eps_tilde;
  if (inertia(ds.P, tol).n_zero > 0) {
    const int nu = nu_degenerate(ds, tol);
    if (nu > 0) {
      if (eps_tilde.rows() != p - nu || eps_tilde.cols() != q - nu)
        throw SolverError(ErrorCode::DegenerateAlignment,
                          "free parameter block does not match the size of "
                          "the non-forced corner");
      const AlignmentPair uv = uv_from_neutral(neutral_subspace(ds, tol),
                                               p, q, tol);
      const Domain dom = ds.domain;
      // Assemble diag(eps_tilde, I_nu), tolerating empty corners.
      RationalMatrix core = RationalMatrix::identity(nu, dom);
      if (p - nu > 0 && q - nu > 0) {
        core = RationalMatrix::vcat(
            RationalMatrix::hcat(eps_tilde,
                                 RationalMatrix::zero(p - nu, nu, dom)),
            RationalMatrix::hcat(RationalMatrix::zero(nu, q - nu, dom),
                                 core));
      } else if (p - nu > 0) {
        core = RationalMatrix::vcat(RationalMatrix::zero(p - nu, nu, dom),
                                    core);
      } else if (q - nu > 0) {
        core = RationalMatrix::hcat(RationalMatrix::zero(nu, q - nu, dom),
                                    core);
      }
      eps = RationalMatrix::constant(uv.U, dom) * core *
            RationalMatrix::constant(uv.V.adjoint(), dom);
    }
  }
  if (eps.rows() != p || eps.cols() != q)
    throw SolverError(ErrorCode::DegenerateAlignment,
                      "parameter does not match the target dimensions");
  return t_transform(W, eps, tol);
}

VerificationReport verify_solution(const DataSet& ds, const RationalMatrix& s,
                                   const AssociatedPair& pair,
                                   const PhiRows& phis, int kappa,
                                   const Tolerances& tol) {
  VerificationReport rep;
  const Domain dom = ds.domain;
  const int p = ds.p;
  const int q = ds.q;

  // --- class membership: all probes must agree with the target index.
  rep.kappa_actual = s.pole_mult_region(Region::Interior, tol);
  rep.class_membership = negative_squares_sample(s, tol);
  const double sup = s.boundary_sup_norm(64);
  const bool contractive = sup <= 1.0 + 1e-7;
  if (!contractive)
    rep.diagnostics.push_back("boundary sup norm " + std::to_string(sup) +
                              " exceeds the contractivity gate");
  std::optional<KLFactorization> left, right;
  try {
    left = kl_factor_left(s, tol);
  } catch (const SolverError& e) {
    rep.diagnostics.push_back(std::string("left factorization failed: ") +
                              e.what());
  }
  try {
    right = kl_factor_right(s, tol);
  } catch (const SolverError& e) {
    rep.diagnostics.push_back(std::string("right factorization failed: ") +
                              e.what());
  }
  if (rep.kappa_actual != kappa)
    rep.diagnostics.push_back("interior pole count " +
                              std::to_string(rep.kappa_actual) +
                              " does not match the target index " +
                              std::to_string(kappa));
  if (rep.class_membership != kappa)
    rep.diagnostics.push_back("negative-squares sample " +
                              std::to_string(rep.class_membership) +
                              " does not match the target index " +
                              std::to_string(kappa));
  if (left && left->b.bp_degree() != kappa)
    rep.diagnostics.push_back("inner factor degree " +
                              std::to_string(left->b.bp_degree()) +
                              " does not match the target index " +
                              std::to_string(kappa));
  rep.class_ok = contractive && rep.kappa_actual == kappa &&
                 rep.class_membership == kappa && left.has_value() &&
                 left->b.bp_degree() == kappa;

  const RationalMatrix F = transfer_F(ds);
  const std::vector<RootCluster> left_nodes = spectrum_clusters(ds.A1);
  const std::vector<RootCluster> right_nodes =
      ds.A2.rows() ? cluster_roots(conj_points(ds.A2))
                   : std::vector<RootCluster>{};

  // --- C1: the left conditions localize at the spectrum of A1 inside the
  // region; the combination [b_left  -s_left] F must stay holomorphic there.
  if (left) {
    rep.c1 = true;
    const RationalMatrix G1 = RationalMatrix::hcat(left->b.to_rational(),
                                                   left->s0.scaled(-1.0)) *
                              F;
    for (const RootCluster& c : left_nodes) {
      if (!in_plus(dom, c.location)) continue;
      const int mult = G1.pole_mult_at(c.location, tol);
      if (mult != 0) {
        rep.c1 = false;
        rep.diagnostics.push_back(
            "left condition leaves pole multiplicity " +
            std::to_string(mult) + " at a spectral point of the left block");
      }
    }
  } else {
    rep.diagnostics.push_back(
        "left conditions unverifiable without a left factorization");
  }

  // --- C2: the mirrored conditions localize at the reflections of the
  // spectrum of A2.
  if (right) {
    rep.c2 = true;
    const RationalMatrix G2 =
        RationalMatrix::hcat(right->s0.adjoint_sharp().scaled(-1.0),
                             right->b.to_rational().adjoint_sharp()) *
        F;
    for (const RootCluster& c : spectrum_clusters(ds.A2)) {
      if (dom == Domain::Disc && std::abs(c.location) < tol.eig_tol) {
        // The reflected node is at infinity.
        if (!G2.bounded_at_infinity()) {
          rep.c2 = false;
          rep.diagnostics.push_back(
              "mirrored condition unbounded at the reflection of the origin");
        }
        continue;
      }
      const Complex node = reflect(dom, c.location);
      const int mult = G2.pole_mult_at(node, tol);
      if (mult != 0) {
        rep.c2 = false;
        rep.diagnostics.push_back(
            "mirrored condition leaves pole multiplicity " +
            std::to_string(mult) +
            " at a reflected spectral point of the right block");
      }
    }
  } else {
    rep.diagnostics.push_back(
        "mirrored conditions unverifiable without a right factorization");
  }

  // --- C4 and the residue conditions share the node set: the spectrum of A1
  // together with the conjugated spectrum of A2.
  std::vector<Complex> all_nodes;
  for (const RootCluster& c : left_nodes) all_nodes.push_back(c.location);
  for (const RootCluster& c : right_nodes) all_nodes.push_back(c.location);
  rep.c4 = true;
  bool holo_at_nodes = true;
  for (const Complex& a : all_nodes) {
    if (s.pole_mult_at(a, tol) != 0) {
      rep.c4 = false;
      holo_at_nodes = false;
      rep.diagnostics.push_back("candidate has a pole at an interpolation "
                                "node");
    }
  }

  // --- C3: with the candidate holomorphic at every node the three residue
  // sums are computable; otherwise they are implied by the localized
  // conditions whenever the coupling block is determined uniquely.
  const int n1 = ds.n1();
  const int n2 = ds.n2();
  if (holo_at_nodes) {
    bool ok = true;
    const RationalMatrix C21r = RationalMatrix::constant(ds.C21(), dom);
    const RationalMatrix C12sr =
        RationalMatrix::constant(ds.C12().adjoint(), dom);
    RationalMatrix RA1 = RationalMatrix::identity(std::max(n1, 1), dom);
    RationalMatrix RA2s = RationalMatrix::identity(std::max(n2, 1), dom);
    if (n1 > 0) RA1 = resolvent_of(ds.A1, dom);
    if (n2 > 0) RA2s = resolvent_of(ds.A2.adjoint(), dom);
    if (n1 > 0) {
      const MatrixXcd R1 = residue_sum(s * C21r * RA1, left_nodes, tol);
      if (!matrix_close(R1, ds.C11(), tol.residual_tol)) {
        ok = false;
        rep.diagnostics.push_back("left residue sum misses its target by " +
                                  std::to_string((R1 - ds.C11()).norm()));
      }
    }
    if (n2 > 0) {
      const MatrixXcd R2 = residue_sum(RA2s * C12sr * s, right_nodes, tol);
      if (!matrix_close(R2, ds.C22().adjoint(), tol.residual_tol)) {
        ok = false;
        rep.diagnostics.push_back("right residue sum misses its target by " +
                                  std::to_string(
                                      (R2 - ds.C22().adjoint()).norm()));
      }
    }
    if (n1 > 0 && n2 > 0) {
      std::vector<Complex> joint = all_nodes;
      const MatrixXcd P21 = ds.P.block(n1, 0, n2, n1);
      const MatrixXcd R3 = residue_sum(RA2s * C12sr * s * C21r * RA1,
                                       cluster_roots(joint), tol);
      if (!matrix_close(R3, P21, tol.residual_tol)) {
        ok = false;
        rep.diagnostics.push_back(
            "coupling residue sum misses its target by " +
            std::to_string((R3 - P21).norm()));
      }
    }
    rep.c3 = ok ? ResidueStatus::Verified : ResidueStatus::Failed;
  } else {
    bool disjoint = true;
    for (const RootCluster& a : left_nodes)
      for (const RootCluster& b : right_nodes)
        if (std::abs(a.location - b.location) < 1e-7) disjoint = false;
    rep.c3 = (rep.c1 && rep.c2 && disjoint) ? ResidueStatus::Implied
                                            : ResidueStatus::Undetermined;
  }

  // --- coprimeness of the two parametrization factorizations, with the
  // parameter recovered through the inverse transform.
  try {
    ValidationReport vr = validate(ds, tol);
    if (!vr.ok)
      throw SolverError(ErrorCode::SpectrumViolation,
                        "data set fails validation: " + vr.failures.front());
    const RationalMatrix W = build_w(ds, vr.X, tol);
    const RationalMatrix eps = t_transform(w_inverse(W, p, q), s, tol);
    const Parameter par = make_parameter(eps, tol);
    const RationalMatrix phi21 = phis.phi2.block(0, 0, q, p);
    const RationalMatrix phi22 = phis.phi2.block(0, p, q, q);
    const RationalMatrix phi11t = phis.phi1_tilde.block(0, 0, p, p);
    const RationalMatrix phi12t = phis.phi1_tilde.block(0, p, p, q);
    const RationalMatrix Ha =
        par.theta_left.to_rational() * phi11t.adjoint_sharp() +
        par.eps_left * phi12t.adjoint_sharp();
    rep.coprime_a = coprime_right_check(pair.b1.to_rational(), Ha, tol);
    const RationalMatrix Hb =
        phi21 * par.eps_right + phi22 * par.theta_right.to_rational();
    rep.coprime_b = coprime_left_check(pair.b2.to_rational(), Hb, tol);
    if (!rep.coprime_a)
      rep.diagnostics.push_back(
          "left factorization cancels inner zeros against the parameter");
    if (!rep.coprime_b)
      rep.diagnostics.push_back(
          "right factorization cancels inner zeros against the parameter");
  } catch (const SolverError& e) {
    rep.diagnostics.push_back(
        std::string("coprimeness checks unavailable: ") + e.what());
  }
  return rep;
}

int rouche_count(const PhiRows& phis, const Parameter& param,
                 const Tolerances& tol) {
  const int q = phis.phi2.rows();
  const int p = phis.phi2.cols() - q;
  const RationalMatrix combo =
      phis.phi2.block(0, 0, q, p) * param.eps_right +
      phis.phi2.block(0, p, q, q) * param.theta_right.to_rational();
  return combo.zero_mult_region(Region::Interior, tol);
}

std::vector<bool> excluded_check(const PhiRows& phis, const Parameter& param,
                                 const std::vector<Complex>& nodes,
                                 const Tolerances& tol) {
  const int q = phis.phi2.rows();
  const int p = phis.phi2.cols() - q;
  std::vector<bool> out;
  out.reserve(nodes.size());
  for (const Complex& a : nodes) {
    const MatrixXcd phi = phis.phi2.eval(a);
    const MatrixXcd E = phi.leftCols(p) * param.eps_right.eval(a) +
                        phi.rightCols(q) * param.theta_right.bp_eval(a);
    const double scale = std::max(1.0, std::pow(sigma_max(E), q));
    out.push_back(std::abs(E.determinant()) <= tol.eig_tol * scale);
  }
  return out;
}

std::vector<bool> no_excluded_criterion(const PhiRows& phis,
                                        const std::vector<Complex>& nodes,
                                        const Tolerances& tol) {
  const int q = phis.phi2.rows();
  const int p = phis.phi2.cols() - q;
  std::vector<bool> out;
  out.reserve(nodes.size());
  for (const Complex& a : nodes) {
    const MatrixXcd phi = phis.phi2.eval(a);
    MatrixXcd D = phi.leftCols(p) * phi.leftCols(p).adjoint() -
                  phi.rightCols(q) * phi.rightCols(q).adjoint();
    D = 0.5 * (D + D.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(D);
    const double scale = std::max(1.0, D.norm());
    out.push_back(es.eigenvalues().maxCoeff() < -tol.eig_tol * scale);
  }
  return out;
}

MatrixXcd find_admissible_constant(const DataSet& ds, const PhiRows& phis,
                                   const std::vector<Complex>& nodes,
                                   int max_tries, const Tolerances& tol) {
  const int p = ds.p;
  const int q = ds.q;
  const auto admissible = [&](const MatrixXcd& eps) {
    for (const Complex& a : nodes) {
      const MatrixXcd phi = phis.phi2.eval(a);
      const MatrixXcd E = phi.leftCols(p) * eps + phi.rightCols(q);
      const double scale = std::max(1.0, std::pow(sigma_max(E), q));
      if (std::abs(E.determinant()) <= tol.eig_tol * scale) return false;
    }
    return true;
  };
  MatrixXcd eps = MatrixXcd::Zero(p, q);
  if (admissible(eps)) return eps;
  std::mt19937_64 rng(0x1f2e3d4c5b6a798ULL);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int t = 1; t < max_tries; ++t) {
    const MatrixXcd G = random_gaussian(rng, p, q);
    const double top = sigma_max(G);
    if (top <= 0.0) continue;
    eps = (unif(rng) / top) * G;
    if (admissible(eps)) return eps;
  }
  throw SolverError(ErrorCode::SearchExhausted,
                    "no admissible constant parameter found within the try "
                    "budget");
}

bool takagi_sarason_membership(const RationalMatrix& s,
                               const AssociatedPair& pair,
                               const RationalMatrix& K, int kappa,
                               const Tolerances& tol) {
  const RationalMatrix shifted = pair.b1.to_rational().inverse() * (s - K) *
                                 pair.b2.to_rational().inverse();
  return shifted.pole_mult_region(Region::Interior, tol) == kappa;
}

}  // namespace schur
