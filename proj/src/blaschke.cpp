#include "schur/blaschke.hpp"

#include <algorithm>
#include <cmath>

namespace schur {

namespace {

constexpr double kBoundarySlack = 1e-7;  // allowed overshoot of the unit bound

// Numerator/denominator polynomials of beta_alpha.
void bp_scalar_polys(Domain dom, Complex alpha, Poly* num, Poly* den) {
  *num = Poly({-alpha, Complex(1.0)});  // lambda - alpha
  *den = (dom == Domain::Disc) ? Poly({Complex(1.0), -std::conj(alpha)})
                               : Poly({std::conj(alpha), Complex(1.0)});
}

RationalMatrix factor_to_rational(Domain dom, const BPFactor& f) {
  Poly num, den;
  bp_scalar_polys(dom, f.alpha, &num, &den);
  const int n = static_cast<int>(f.proj.rows());
  const MatrixXcd comp = MatrixXcd::Identity(n, n) - f.proj;
  return RationalMatrix(PolyMatrix::constant(comp).scaled(den) +
                            PolyMatrix::constant(f.proj).scaled(num),
                        den, dom);
}

// Lexicographically smallest (Re, Im) location among the clusters.
std::vector<RootCluster> sort_lex(std::vector<RootCluster> cl) {
  std::sort(cl.begin(), cl.end(), [](const RootCluster& a, const RootCluster& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  return cl;
}

void screen_schur_boundary(const RationalMatrix& s, const Tolerances& tol) {
  if (s.has_boundary_pole(tol))
    throw SolverError(ErrorCode::NotSchurClass, "pole on the boundary of Omega_+");
  if (s.boundary_sup_norm(64) > 1.0 + kBoundarySlack)
    throw SolverError(ErrorCode::NotSchurClass, "boundary norm exceeds the unit bound");
}

// Leading Laurent data of s at the pole cluster: order k and coefficient
// G_{-k}. Returns k == 0 when the pole is removable in every entry.
int leading_laurent(const RationalMatrix& s, const RootCluster& cl, const Tolerances& tol,
                    MatrixXcd* lead) {
  const LaurentBlock lb = s.laurent(cl.location, cl.multiplicity, 0.0, 256, tol);
  for (int k = cl.multiplicity; k >= 1; --k)
    if (lb.get(-k).norm() > 0.0) {
      *lead = lb.get(-k);
      return k;
    }
  return 0;
}

KLFactorization kl_factor_impl(const RationalMatrix& s, bool left, const Tolerances& tol) {
  screen_schur_boundary(s, tol);
  const int n = left ? s.rows() : s.cols();
  KLFactorization out{BPProduct(n, s.domain()), s};

  int remaining = out.s0.pole_mult_region(Region::Interior, tol);
  while (remaining > 0) {
    std::vector<RootCluster> clusters;
    for (const RootCluster& cl : out.s0.den_roots())
      if (in_plus(s.domain(), cl.location) && out.s0.pole_mult_at(cl.location, tol) > 0)
        clusters.push_back(cl);
    if (clusters.empty())
      throw SolverError(ErrorCode::ExtractionStalled,
                        "interior pole count positive but no pole cluster found");
    const RootCluster target = sort_lex(clusters).front();

    MatrixXcd lead;
    if (leading_laurent(out.s0, target, tol, &lead) == 0)
      throw SolverError(ErrorCode::ExtractionStalled, "leading Laurent coefficient vanished");
    Eigen::JacobiSVD<MatrixXcd> svd(lead, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXcd u = left ? svd.matrixU().col(0) : svd.matrixV().col(0);

    BPFactor f{target.location, u * u.adjoint()};
    const RationalMatrix fr = factor_to_rational(s.domain(), f);
    const RationalMatrix next = left ? fr * out.s0 : out.s0 * fr;
    const int next_count = next.pole_mult_region(Region::Interior, tol);
    if (next_count != remaining - 1)
      throw SolverError(ErrorCode::ExtractionStalled,
                        "factor removal did not reduce the pole multiplicity by one");
    if (left)
      out.b.push_front(std::move(f));
    else
      out.b.push_back(std::move(f));
    out.s0 = next;
    remaining = next_count;
  }
  return out;
}

bool noncancellation_impl(const BPProduct& b, const RationalMatrix& s0, bool left,
                          const Tolerances& tol) {
  const RationalMatrix br = b.to_rational();
  for (const RootCluster& cl : cluster_roots(br.num().determinant().roots())) {
    if (!in_plus(b.domain(), cl.location) || !br.is_finite_at(cl.location)) continue;
    if (!s0.is_finite_at(cl.location)) return false;
    MatrixXcd stacked;
    if (left) {
      stacked.resize(b.size(), b.size() + s0.cols());
      stacked << br.eval(cl.location), s0.eval(cl.location);
      if (numerical_rank(stacked, tol) < b.size()) return false;
    } else {
      stacked.resize(b.size() + s0.rows(), b.size());
      stacked << br.eval(cl.location), s0.eval(cl.location);
      if (numerical_rank(stacked, tol) < b.size()) return false;
    }
  }
  return true;
}

}  // namespace

Complex bp_scalar(Domain dom, Complex alpha, Complex lambda) {
  return (dom == Domain::Disc) ? (lambda - alpha) / (1.0 - std::conj(alpha) * lambda)
                               : (lambda - alpha) / (lambda + std::conj(alpha));
}

MatrixXcd BPProduct::bp_eval(Complex lambda) const {
  MatrixXcd out = MatrixXcd::Identity(size(), size());
  for (const BPFactor& f : factors_) {
    const int n = static_cast<int>(f.proj.rows());
    out *= MatrixXcd::Identity(n, n) - f.proj + bp_scalar(domain_, f.alpha, lambda) * f.proj;
  }
  return out * tail_;
}

int BPProduct::bp_degree() const {
  int deg = 0;
  for (const BPFactor& f : factors_) deg += static_cast<int>(std::llround(f.proj.trace().real()));
  return deg;
}

RationalMatrix BPProduct::to_rational() const {
  RationalMatrix out = RationalMatrix::constant(tail_, domain_);
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it)
    out = factor_to_rational(domain_, *it) * out;
  return out;
}

KLFactorization kl_factor_left(const RationalMatrix& s, const Tolerances& tol) {
  return kl_factor_impl(s, true, tol);
}

KLFactorization kl_factor_right(const RationalMatrix& s, const Tolerances& tol) {
  return kl_factor_impl(s, false, tol);
}

bool check_noncancellation_left(const BPProduct& b, const RationalMatrix& s0,
                                const Tolerances& tol) {
  return noncancellation_impl(b, s0, true, tol);
}

bool check_noncancellation_right(const BPProduct& b, const RationalMatrix& s0,
                                 const Tolerances& tol) {
  return noncancellation_impl(b, s0, false, tol);
}

BPProduct inner_to_bp(const RationalMatrix& B, const Tolerances& tol) {
  if (B.rows() != B.cols()) throw std::invalid_argument("inner_to_bp: matrix not square");
  if (B.has_boundary_pole(tol) || B.pole_mult_region(Region::Interior, tol) > 0)
    throw SolverError(ErrorCode::NotSchurClass, "input has poles on closed Omega_+");
  for (int k = 0; k < 16; ++k) {
    const Complex t = boundary_point(B.domain(), (k + 0.5) / 16.0);
    const MatrixXcd V = B.eval(t);
    if ((V.adjoint() * V - MatrixXcd::Identity(B.rows(), B.cols())).norm() > 1e-6)
      throw SolverError(ErrorCode::NotSchurClass, "input is not unitary on the boundary");
  }

  BPProduct out(B.rows(), B.domain());
  RationalMatrix work = B;
  for (int guard = 0; guard < 1024; ++guard) {
    std::vector<RootCluster> zeros;
    for (const RootCluster& cl : cluster_roots(work.num().determinant().roots()))
      if (in_plus(work.domain(), cl.location) && work.is_finite_at(cl.location))
        zeros.push_back(cl);
    if (zeros.empty()) break;
    const RootCluster target = sort_lex(zeros).front();

    // Inner functions have unit scale, so the null cut is absolute: a
    // relative cut would see a tiny-but-nonzero evaluation as full rank.
    Eigen::JacobiSVD<MatrixXcd> svd(work.eval(target.location), Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > tol.rank_tol * std::max(1.0, sv(0)))
      throw SolverError(ErrorCode::ExtractionStalled,
                        "determinant zero without a left null direction");
    const Eigen::VectorXcd u = svd.matrixU().col(sv.size() - 1);
    BPFactor f{target.location, u * u.adjoint()};
    work = factor_to_rational(work.domain(), f).adjoint_sharp() * work;
    if (work.pole_mult_region(Region::Interior, tol) > 0)
      throw SolverError(ErrorCode::ExtractionStalled, "peeled factor left an interior pole");
    out.push_back(std::move(f));
  }

  if (work.num().max_degree() > 0 || work.den().degree() > 0)
    throw SolverError(ErrorCode::ExtractionStalled, "zero-free remainder is not constant");
  MatrixXcd tail = work.eval(Complex(0.0, 0.0));
  if ((tail - MatrixXcd::Identity(B.rows(), B.cols())).norm() < 1e-9)
    tail = MatrixXcd::Identity(B.rows(), B.cols());
  out.set_tail(std::move(tail));
  return out;
}

}  // namespace schur
