#include "schur/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace schur {

Poly Poly::from_roots(const std::vector<Complex>& roots, Complex lead) {
  Poly p(lead);
  for (const Complex& r : roots) p *= Poly({-r, Complex(1.0)});
  return p;
}

double Poly::max_abs_coeff() const {
  double m = 0.0;
  for (const Complex& c : c_) m = std::max(m, std::abs(c));
  return m;
}

Complex Poly::eval(Complex z) const {
  Complex acc(0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double Poly::abs_eval(double r) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

Poly& Poly::trim(double rel) {
  const double m = max_abs_coeff();
  if (m < 1e-300) {
    c_.clear();
    return *this;
  }
  const double cut = rel * m;
  while (!c_.empty() && std::abs(c_.back()) <= cut) c_.pop_back();
  return *this;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (Complex& c : r.c_) c = -c;
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.c_.resize(std::max(a.c_.size(), b.c_.size()), Complex(0.0));
  for (size_t k = 0; k < a.c_.size(); ++k) r.c_[k] += a.c_[k];
  for (size_t k = 0; k < b.c_.size(); ++k) r.c_[k] += b.c_[k];
  return r.trim();
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  Poly r;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, Complex(0.0));
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  return r.trim();
}

Poly operator*(Complex s, const Poly& a) {
  Poly r = a;
  for (Complex& c : r.c_) c *= s;
  return r.trim();
}

Poly Poly::conj_reversed(int target_degree) const {
  if (is_zero()) return Poly();
  if (target_degree < degree())
    throw std::invalid_argument("conj_reversed: target degree below actual degree");
  std::vector<Complex> out(target_degree + 1, Complex(0.0));
  for (int k = 0; k <= target_degree; ++k) out[k] = std::conj(coeff(target_degree - k));
  return Poly(std::move(out));
}

Poly Poly::sharp_halfplane() const {
  std::vector<Complex> out(c_.size());
  for (size_t k = 0; k < c_.size(); ++k)
    out[k] = (k % 2 == 0) ? std::conj(c_[k]) : -std::conj(c_[k]);
  return Poly(std::move(out));
}

Poly Poly::deflate(Complex alpha) const {
  const int d = degree();
  if (d < 1) return Poly();
  std::vector<Complex> b(d, Complex(0.0));
  b[d - 1] = c_[d];
  for (int k = d - 1; k >= 1; --k) b[k - 1] = c_[k] + alpha * b[k];
  return Poly(std::move(b));
}

std::vector<Complex> Poly::roots() const {
  Poly p = *this;
  p.trim();
  const int d = p.degree();
  if (d <= 0) return {};
  MatrixXcd comp = MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -p.c_[i] / p.c_[d];
  Eigen::ComplexEigenSolver<MatrixXcd> es(comp, /*computeEigenvectors=*/false);
  std::vector<Complex> out(d);
  for (int i = 0; i < d; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

std::vector<RootCluster> cluster_roots(const std::vector<Complex>& roots,
                                       double cluster_tol) {
  std::vector<Complex> sorted = roots;
  std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<RootCluster> clusters;
  for (const Complex& r : sorted) {
    bool merged = false;
    if (!clusters.empty()) {
      RootCluster& c = clusters.back();
      const double tol_eff = cluster_tol * std::max(1.0, std::abs(c.location));
      if (std::abs(r - c.location) <= tol_eff) {
        c.location = (c.location * double(c.multiplicity) + r) / double(c.multiplicity + 1);
        ++c.multiplicity;
        merged = true;
      }
    }
    if (!merged) clusters.push_back({r, 1});
  }
  std::sort(clusters.begin(), clusters.end(), [](const RootCluster& a, const RootCluster& b) {
    return a.location.real() != b.location.real()
               ? a.location.real() < b.location.real()
               : a.location.imag() < b.location.imag();
  });
  return clusters;
}

PolyMatrix PolyMatrix::constant(const MatrixXcd& A) {
  PolyMatrix M(static_cast<int>(A.rows()), static_cast<int>(A.cols()));
  for (int i = 0; i < M.rows_; ++i)
    for (int j = 0; j < M.cols_; ++j) M.at(i, j) = Poly(A(i, j));
  return M;
}

PolyMatrix PolyMatrix::identity(int n) {
  PolyMatrix M(n, n);
  for (int i = 0; i < n; ++i) M.at(i, i) = Poly(1.0);
  return M;
}

MatrixXcd PolyMatrix::eval(Complex z) const {
  MatrixXcd A(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) A(i, j) = at(i, j).eval(z);
  return A;
}

int PolyMatrix::max_degree() const {
  int d = -1;
  for (const Poly& p : e_) d = std::max(d, p.degree());
  return d;
}

double PolyMatrix::max_abs_coeff() const {
  double m = 0.0;
  for (const Poly& p : e_) m = std::max(m, p.max_abs_coeff());
  return m;
}

PolyMatrix& PolyMatrix::trim_all(double rel) {
  for (Poly& p : e_) p.trim(rel);
  return *this;
}

PolyMatrix PolyMatrix::operator-() const {
  PolyMatrix r = *this;
  for (Poly& p : r.e_) p = -p;
  return r;
}

PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("PolyMatrix+: size mismatch");
  PolyMatrix r(a.rows_, a.cols_);
  for (size_t k = 0; k < r.e_.size(); ++k) r.e_[k] = a.e_[k] + b.e_[k];
  return r;
}

PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b) { return a + (-b); }

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("PolyMatrix*: size mismatch");
  PolyMatrix r(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int j = 0; j < b.cols_; ++j) {
      Poly acc;
      for (int k = 0; k < a.cols_; ++k) acc += a.at(i, k) * b.at(k, j);
      r.at(i, j) = acc;
    }
  return r;
}

PolyMatrix PolyMatrix::scaled(const Poly& s) const {
  PolyMatrix r = *this;
  for (Poly& p : r.e_) p = p * s;
  return r;
}

PolyMatrix PolyMatrix::block(int i0, int j0, int r, int c) const {
  PolyMatrix B(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) B.at(i, j) = at(i0 + i, j0 + j);
  return B;
}

void PolyMatrix::set_block(int i0, int j0, const PolyMatrix& B) {
  for (int i = 0; i < B.rows_; ++i)
    for (int j = 0; j < B.cols_; ++j) at(i0 + i, j0 + j) = B.at(i, j);
}

PolyMatrix PolyMatrix::hcat(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows_ != b.rows_) throw std::invalid_argument("PolyMatrix::hcat: row mismatch");
  PolyMatrix r(a.rows_, a.cols_ + b.cols_);
  r.set_block(0, 0, a);
  r.set_block(0, a.cols_, b);
  return r;
}

PolyMatrix PolyMatrix::vcat(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.cols_) throw std::invalid_argument("PolyMatrix::vcat: col mismatch");
  PolyMatrix r(a.rows_ + b.rows_, a.cols_);
  r.set_block(0, 0, a);
  r.set_block(a.rows_, 0, b);
  return r;
}

PolyMatrix PolyMatrix::conj_reversed_transposed(int target_degree) const {
  PolyMatrix r(cols_, rows_);
  for (int i = 0; i < cols_; ++i)
    for (int j = 0; j < rows_; ++j) r.at(i, j) = at(j, i).conj_reversed(target_degree);
  return r;
}

PolyMatrix PolyMatrix::sharp_halfplane_transposed() const {
  PolyMatrix r(cols_, rows_);
  for (int i = 0; i < cols_; ++i)
    for (int j = 0; j < rows_; ++j) r.at(i, j) = at(j, i).sharp_halfplane();
  return r;
}

namespace {

// Inverse DFT of K samples taken at the K-th roots of unity.
std::vector<Complex> inverse_dft(const std::vector<Complex>& vals) {
  const int K = static_cast<int>(vals.size());
  std::vector<Complex> coeffs(K, Complex(0.0));
  for (int j = 0; j < K; ++j) {
    Complex acc(0.0);
    for (int k = 0; k < K; ++k) {
      const double th = -2.0 * M_PI * double(j) * double(k) / double(K);
      acc += vals[k] * Complex(std::cos(th), std::sin(th));
    }
    coeffs[j] = acc / double(K);
  }
  return coeffs;
}

MatrixXcd drop_row_col(const MatrixXcd& A, int row, int col) {
  const int n = static_cast<int>(A.rows());
  MatrixXcd M(n - 1, n - 1);
  for (int i = 0, ii = 0; i < n; ++i) {
    if (i == row) continue;
    for (int j = 0, jj = 0; j < n; ++j) {
      if (j == col) continue;
      M(ii, jj++) = A(i, j);
    }
    ++ii;
  }
  return M;
}

}  // namespace

Poly PolyMatrix::determinant() const {
  if (rows_ != cols_) throw std::invalid_argument("determinant: matrix not square");
  const int n = rows_;
  if (n == 0) return Poly(1.0);
  const int d = std::max(max_degree(), 0);
  const int K = n * d + 1;
  std::vector<Complex> vals(K);
  for (int k = 0; k < K; ++k) {
    const double th = 2.0 * M_PI * double(k) / double(K);
    vals[k] = eval(Complex(std::cos(th), std::sin(th))).determinant();
  }
  Poly p(inverse_dft(vals));
  return p.trim();
}

PolyMatrix PolyMatrix::adjugate() const {
  if (rows_ != cols_) throw std::invalid_argument("adjugate: matrix not square");
  const int n = rows_;
  if (n == 0) return PolyMatrix(0, 0);
  if (n == 1) {
    PolyMatrix r(1, 1);
    r.at(0, 0) = Poly(1.0);
    return r;
  }
  const int d = std::max(max_degree(), 0);
  const int K = (n - 1) * d + 1;
  // samples[i][j][k]: cofactor-transpose entry (i,j) at the k-th root of unity
  std::vector<std::vector<std::vector<Complex>>> samples(
      n, std::vector<std::vector<Complex>>(n, std::vector<Complex>(K)));
  for (int k = 0; k < K; ++k) {
    const double th = 2.0 * M_PI * double(k) / double(K);
    const MatrixXcd A = eval(Complex(std::cos(th), std::sin(th)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Complex cof = drop_row_col(A, i, j).determinant();
        samples[j][i][k] = ((i + j) % 2 == 0) ? cof : -cof;
      }
  }
  PolyMatrix adj(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) adj.at(i, j) = Poly(inverse_dft(samples[i][j])).trim();
  return adj;
}

}  // namespace schur
