#include "schur/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace schur {

namespace {

constexpr double kNoiseFloor = 1e-11;  // coefficient-level noise, with margin
constexpr double kClusterTol = 1e-7;   // matches root clustering

double point_match_tol(Complex z) { return kClusterTol * std::max(1.0, std::abs(z)); }

// One Newton refinement pass for a zero of P near z0.  Returns the refined
// point; the caller decides acceptance from the distance moved.
Complex refine_zero(const Poly& P, Complex z0, int iters = 20) {
  Complex z = z0;
  for (int k = 0; k < iters; ++k) {
    const Complex f = P.eval(z);
    Complex fp = 0.0;
    const auto& c = P.coeffs();
    for (int j = int(c.size()) - 1; j >= 1; --j) fp = fp * z + double(j) * c[j];
    if (std::abs(fp) == 0.0) break;
    const Complex step = f / fp;
    z -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
  }
  return z;
}

std::vector<Complex> derivative_coeffs(const std::vector<Complex>& c) {
  std::vector<Complex> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(double(k) * c[k]);
  return d;
}

// |P^(j)(c) / j!| for j = 0..count-1, read off as the remainders of repeated
// synthetic division by (z - c).
std::vector<double> taylor_mags(std::vector<Complex> w, Complex c, int count) {
  std::vector<double> out;
  for (int j = 0; j < count && !w.empty(); ++j) {
    Complex acc = w.back();
    std::vector<Complex> q(w.size() - 1);
    for (int k = int(w.size()) - 2; k >= 0; --k) {
      q[k] = acc;
      acc = w[k] + c * acc;
    }
    out.push_back(std::abs(acc));
    w = std::move(q);
  }
  out.resize(count, 0.0);
  return out;
}

// How strongly unit coefficient noise feeds the local Taylor coefficients at
// a point of modulus ac: the same repeated division applied to the polynomial
// with every coefficient replaced by one.
std::vector<double> noise_accumulation(int deg, double ac, int count) {
  std::vector<double> w(std::size_t(std::max(deg + 1, 1)), 1.0);
  std::vector<double> out;
  for (int j = 0; j < count && !w.empty(); ++j) {
    double acc = w.back();
    std::vector<double> q(w.size() - 1);
    for (int k = int(w.size()) - 2; k >= 0; --k) {
      q[k] = acc;
      acc = w[k] + ac * acc;
    }
    out.push_back(acc);
    w = std::move(q);
  }
  out.resize(count, 1.0);
  return out;
}

}  // namespace

RationalMatrix::RationalMatrix(PolyMatrix num, Poly den, Domain dom)
    : num_(std::move(num)), den_(std::move(den)), domain_(dom) {
  den_.trim();
  num_.trim_all();
  if (den_.is_zero())
    throw std::invalid_argument("RationalMatrix: denominator identically zero");
  normalize();
}

void RationalMatrix::normalize() {
  bool all_zero = true;
  for (int i = 0; i < num_.rows() && all_zero; ++i)
    for (int j = 0; j < num_.cols(); ++j)
      if (!num_.at(i, j).is_zero()) {
        all_zero = false;
        break;
      }
  if (all_zero) {
    den_ = Poly(1.0);
    return;
  }

  // Drop coefficients that are roundoff noise relative to the matrix-wide
  // numerator scale; per-entry trimming cannot see them because a pure-noise
  // entry looks like an honest polynomial at its own scale.
  const double gmax = num_.max_abs_coeff();
  for (int i = 0; i < num_.rows(); ++i)
    for (int j = 0; j < num_.cols(); ++j) {
      std::vector<Complex> c = num_.at(i, j).coeffs();
      while (!c.empty() && std::abs(c.back()) <= 1e-13 * gmax) c.pop_back();
      num_.at(i, j) = Poly(std::move(c));
    }

  // Cancel denominator roots against which every numerator entry carries a
  // matching zero.  Computed roots of a multiple factor scatter over a disc
  // of radius noise^(1/mult), so near-coincident denominator roots are first
  // grouped back into one cluster, and all divisions run at the polished
  // cluster centre: the centre is a simple zero of den^(mult-1) and therefore
  // recoverable to near machine accuracy even when the individual roots are
  // not.  A numerator entry joins the cancellation for as many orders as its
  // Taylor coefficients at the centre stay below the level that matrix-wide
  // coefficient noise reaches after accumulating through the shift, which
  // keeps every dropped division remainder at noise size globally.
  if (den_.degree() > 0) {
    struct Group {
      Complex mean;
      double radius = 0.0;
      int mult = 0;
    };
    std::vector<Group> groups;
    for (const RootCluster& cl : cluster_roots(den_.roots())) {
      Group* home = nullptr;
      for (Group& g : groups)
        if (std::abs(cl.location - g.mean) <= 1e-4 * (1.0 + std::abs(g.mean))) {
          home = &g;
          break;
        }
      if (!home) {
        groups.push_back({cl.location, 0.0, 0});
        home = &groups.back();
      }
      home->mean = (double(home->mult) * home->mean +
                    double(cl.multiplicity) * cl.location) /
                   double(home->mult + cl.multiplicity);
      home->mult += cl.multiplicity;
      home->radius = std::max(home->radius, std::abs(cl.location - home->mean));
    }

    const Poly den0 = den_;
    for (const Group& g : groups) {
      std::vector<Complex> dc = den0.coeffs();
      for (int k = 0; k + 1 < g.mult; ++k) dc = derivative_coeffs(dc);
      Complex c = refine_zero(Poly(std::move(dc)), g.mean);
      if (std::abs(c - g.mean) >
          std::max(3.0 * g.radius, 1e-5 * (1.0 + std::abs(g.mean))))
        c = g.mean;  // runaway refinement; the multiplicity-weighted mean is
                     // already coefficient-accurate for a coherent cluster

      // Entries holding nothing but matrix-wide roundoff noise carry no
      // information about zeros and must not block a cancellation.
      int v = g.mult;
      for (int i = 0; i < num_.rows() && v > 0; ++i)
        for (int j = 0; j < num_.cols() && v > 0; ++j) {
          const Poly& entry = num_.at(i, j);
          if (entry.is_zero() || entry.max_abs_coeff() <= 1e-12 * gmax)
            continue;
          const std::vector<double> mags = taylor_mags(entry.coeffs(), c, v);
          const std::vector<double> acc =
              noise_accumulation(entry.degree(), std::abs(c), v);
          int t = 0;
          while (t < v && mags[t] <= kNoiseFloor * gmax * acc[t]) ++t;
          v = t;
        }
      if (v == 0) continue;

      for (int i = 0; i < num_.rows(); ++i)
        for (int j = 0; j < num_.cols(); ++j) {
          Poly& entry = num_.at(i, j);
          for (int t = 0; t < v && !entry.is_zero(); ++t)
            entry = entry.deflate(c);
        }
      for (int t = 0; t < v; ++t) den_ = den_.deflate(c);
    }
  }

  // Monic denominator.
  const Complex lead = den_.lead();
  den_ = (Complex(1.0) / lead) * den_;
  for (int i = 0; i < num_.rows(); ++i)
    for (int j = 0; j < num_.cols(); ++j) num_.at(i, j) = (Complex(1.0) / lead) * num_.at(i, j);
  num_.trim_all();
  den_.trim();
}

bool RationalMatrix::is_finite_at(Complex lambda) const {
  const double scale = std::max(den_.abs_eval(std::abs(lambda)), 1e-300);
  return std::abs(den_.eval(lambda)) > 1e-12 * scale;
}

MatrixXcd RationalMatrix::eval(Complex lambda) const {
  if (!is_finite_at(lambda))
    throw SolverError(ErrorCode::PoleAtPoint, "evaluation at a denominator root");
  return num_.eval(lambda) / den_.eval(lambda);
}

RationalMatrix RationalMatrix::operator-() const {
  RationalMatrix r = *this;
  r.num_ = -r.num_;
  return r;
}

namespace {

// Coefficient-wise equality of two monic denominators.  Detecting this lets
// arithmetic keep a shared denominator instead of squaring it; the squared
// form has near-double roots whose locations are only known to the square
// root of the coefficient error, which defeats later pole cancellation.
bool same_denominator(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return false;
  double scale = std::max({1.0, a.max_abs_coeff(), b.max_abs_coeff()});
  for (int k = 0; k <= a.degree(); ++k)
    if (std::abs(a.coeff(k) - b.coeff(k)) > 1e-12 * scale) return false;
  return true;
}

}  // namespace

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.domain_ != b.domain_) throw std::invalid_argument("RationalMatrix+: domain mismatch");
  if (same_denominator(a.den_, b.den_))
    return RationalMatrix(a.num_ + b.num_, a.den_, a.domain_);
  return RationalMatrix(a.num_.scaled(b.den_) + b.num_.scaled(a.den_), a.den_ * b.den_,
                        a.domain_);
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) { return a + (-b); }

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.domain_ != b.domain_) throw std::invalid_argument("RationalMatrix*: domain mismatch");
  return RationalMatrix(a.num_ * b.num_, a.den_ * b.den_, a.domain_);
}

RationalMatrix RationalMatrix::scaled(Complex s) const {
  RationalMatrix r = *this;
  for (int i = 0; i < r.num_.rows(); ++i)
    for (int j = 0; j < r.num_.cols(); ++j) r.num_.at(i, j) = s * r.num_.at(i, j);
  return r;
}

RationalMatrix RationalMatrix::inverse() const {
  if (rows() != cols()) throw std::invalid_argument("inverse: matrix not square");
  Poly det = num_.determinant();
  if (det.is_zero())
    throw SolverError(ErrorCode::SingularDeterminant, "numerator determinant vanishes identically");
  return RationalMatrix(num_.adjugate().scaled(den_), det, domain_);
}

RationalMatrix RationalMatrix::adjoint_sharp() const {
  if (domain_ == Domain::HalfPlane)
    return RationalMatrix(num_.sharp_halfplane_transposed(), den_.sharp_halfplane(), domain_);
  const int D = std::max(num_.max_degree(), den_.degree());
  return RationalMatrix(num_.conj_reversed_transposed(D), den_.conj_reversed(D), domain_);
}

RationalMatrix RationalMatrix::block(int i0, int j0, int r, int c) const {
  return RationalMatrix(num_.block(i0, j0, r, c), den_, domain_);
}

RationalMatrix RationalMatrix::hcat(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.domain_ != b.domain_) throw std::invalid_argument("hcat: domain mismatch");
  if (same_denominator(a.den_, b.den_))
    return RationalMatrix(PolyMatrix::hcat(a.num_, b.num_), a.den_, a.domain_);
  return RationalMatrix(PolyMatrix::hcat(a.num_.scaled(b.den_), b.num_.scaled(a.den_)),
                        a.den_ * b.den_, a.domain_);
}

RationalMatrix RationalMatrix::vcat(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.domain_ != b.domain_) throw std::invalid_argument("vcat: domain mismatch");
  if (same_denominator(a.den_, b.den_))
    return RationalMatrix(PolyMatrix::vcat(a.num_, b.num_), a.den_, a.domain_);
  return RationalMatrix(PolyMatrix::vcat(a.num_.scaled(b.den_), b.num_.scaled(a.den_)),
                        a.den_ * b.den_, a.domain_);
}

std::vector<RootCluster> RationalMatrix::den_roots() const {
  if (den_.degree() <= 0) return {};
  return cluster_roots(den_.roots());
}

bool RationalMatrix::bounded_at_infinity() const {
  return num_.max_degree() <= den_.degree();
}

bool RationalMatrix::vanishes_at_infinity() const {
  return num_.max_degree() < den_.degree();
}

MatrixXcd RationalMatrix::value_at_infinity() const {
  if (!bounded_at_infinity())
    throw SolverError(ErrorCode::PoleAtPoint, "function unbounded at infinity");
  const int d = den_.degree();
  MatrixXcd A(rows(), cols());
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < cols(); ++j) A(i, j) = num_.at(i, j).coeff(d) / den_.lead();
  return A;
}

LaurentBlock RationalMatrix::laurent(Complex center, int k_max, double radius,
                                     int n_quad, const Tolerances& tol) const {
  // Distance to the nearest *other* denominator root.
  double nearest = std::numeric_limits<double>::infinity();
  for (const RootCluster& cl : den_roots()) {
    const double dist = std::abs(cl.location - center);
    if (dist > point_match_tol(center)) nearest = std::min(nearest, dist);
  }
  if (radius <= 0.0)
    radius = std::isfinite(nearest) ? nearest / 2.0 : 0.5;
  else if (radius >= nearest - point_match_tol(center))
    throw SolverError(ErrorCode::RadiusTooLarge,
                      "another denominator root lies inside the quadrature circle");

  LaurentBlock out;
  out.center = center;
  out.k_min = -k_max;
  out.coeffs.assign(2 * k_max + 1, MatrixXcd::Zero(rows(), cols()));
  for (int t = 0; t < n_quad; ++t) {
    const double th = 2.0 * M_PI * double(t) / double(n_quad);
    const Complex zeta = Complex(radius * std::cos(th), radius * std::sin(th));
    const MatrixXcd val = num_.eval(center + zeta) / den_.eval(center + zeta);
    for (int j = -k_max; j <= k_max; ++j)
      out.coeffs[j + k_max] += val * std::pow(zeta, -j);
  }
  for (MatrixXcd& G : out.coeffs) G /= double(n_quad);

  double top = 0.0;
  for (const MatrixXcd& G : out.coeffs) top = std::max(top, G.norm());
  for (MatrixXcd& G : out.coeffs)
    if (G.norm() <= tol.eig_tol * top) G.setZero();
  return out;
}

int RationalMatrix::pole_mult_at(Complex center, const Tolerances& tol) const {
  int mult = 0;
  for (const RootCluster& cl : den_roots())
    if (std::abs(cl.location - center) <= point_match_tol(center)) {
      mult = cl.multiplicity;
      center = cl.location;  // evaluate around the cluster mean
      break;
    }
  if (mult == 0) return 0;

  const LaurentBlock lb = laurent(center, mult, 0.0, 256, tol);
  int k = 0;  // actual pole order
  for (int j = 1; j <= mult; ++j)
    if (lb.get(-j).norm() > 0.0) k = j;
  if (k == 0) return 0;

  const int p = rows(), q = cols();
  MatrixXcd T = MatrixXcd::Zero(k * p, k * q);
  for (int i = 0; i < k; ++i)
    for (int l = 0; l <= i; ++l) T.block(i * p, l * q, p, q) = lb.get(-k + i - l);
  return numerical_rank(T, tol);
}

int RationalMatrix::pole_mult_region(Region reg, const Tolerances& tol,
                                     double boundary_tol) const {
  int total = 0;
  for (const RootCluster& cl : den_roots()) {
    const bool pick = (reg == Region::Interior) ? in_plus(domain_, cl.location, boundary_tol)
                                                : in_minus(domain_, cl.location, boundary_tol);
    if (pick) total += pole_mult_at(cl.location, tol);
  }
  return total;
}

bool RationalMatrix::has_boundary_pole(const Tolerances& tol, double boundary_tol) const {
  for (const RootCluster& cl : den_roots())
    if (on_boundary(domain_, cl.location, boundary_tol) && pole_mult_at(cl.location, tol) > 0)
      return true;
  return false;
}

namespace {

// Interior zero count of det R by the argument principle, for R with no
// interior poles.  The determinant is evaluated pointwise on a contour just
// inside the boundary; assembling det R as one polynomial is hopeless at
// these degrees because its coefficients cancel below roundoff.
int det_winding_interior(const RationalMatrix& R) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    const double rad = 1.0 - 1e-7 * std::pow(10.0, attempt);
    for (int n = 2048; n <= (1 << 16); n *= 2) {
      double total = 0.0;
      bool good = true;
      Complex prev;
      for (int k = 0; k <= n && good; ++k) {
        Complex z = rad * std::exp(Complex(0.0, 2.0 * M_PI * k / n));
        if (R.domain() == Domain::HalfPlane) z = (1.0 - z) / (1.0 + z);
        if (!R.is_finite_at(z)) {
          good = false;
          break;
        }
        const Complex d = R.eval(z).determinant();
        if (!std::isfinite(std::abs(d)) || std::abs(d) < 1e-280) {
          good = false;
          break;
        }
        if (k > 0) {
          const double step = std::arg(d / prev);
          if (std::abs(step) > 0.8 * M_PI) {
            good = false;  // under-sampled or a zero hugging the contour
            break;
          }
          total += step;
        }
        prev = d;
      }
      if (!good) continue;
      const double w = total / (2.0 * M_PI);
      if (std::abs(w - std::round(w)) < 0.05) return int(std::lround(w));
    }
  }
  throw SolverError(ErrorCode::SearchExhausted,
                    "boundary winding of the determinant did not stabilize");
}

}  // namespace

int RationalMatrix::zero_mult_region(Region reg, const Tolerances& tol) const {
  // With no interior poles the argument principle counts the interior zeros
  // directly; otherwise fall back to the pole structure of the inverse.
  if (reg == Region::Interior && rows() == cols() && pole_mult_region(reg, tol) == 0)
    return det_winding_interior(*this);
  return inverse().pole_mult_region(reg, tol);
}

double RationalMatrix::boundary_sup_norm(int samples) const {
  double top = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Complex t = boundary_point(domain_, (k + 0.5) / double(samples));
    if (!is_finite_at(t)) return std::numeric_limits<double>::infinity();
    Eigen::JacobiSVD<MatrixXcd> svd(eval(t));
    if (svd.singularValues().size())
      top = std::max(top, svd.singularValues()(0));
  }
  return top;
}

bool coprime_left_check(const RationalMatrix& G, const RationalMatrix& H,
                        const Tolerances& tol) {
  const RationalMatrix Gi = G.inverse();
  return (Gi * H).pole_mult_region(Region::Interior, tol) ==
         Gi.pole_mult_region(Region::Interior, tol);
}

bool coprime_right_check(const RationalMatrix& G, const RationalMatrix& H,
                         const Tolerances& tol) {
  const RationalMatrix Gi = G.inverse();
  return (H * Gi).pole_mult_region(Region::Interior, tol) ==
         Gi.pole_mult_region(Region::Interior, tol);
}

}  // namespace schur
