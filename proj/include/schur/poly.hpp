#pragma once

#include <initializer_list>
#include <vector>

#include "schur/types.hpp"

namespace schur {

// Scalar polynomial with complex coefficients stored in ascending degree
// order. The zero polynomial has an empty coefficient list and degree -1.
class Poly {
 public:
  Poly() = default;
  Poly(double c0) { if (c0 != 0.0) c_ = {Complex(c0)}; }
  Poly(Complex c0) { if (c0 != Complex(0.0)) c_ = {c0}; }
  Poly(std::initializer_list<Complex> cs) : c_(cs) { trim(); }
  explicit Poly(std::vector<Complex> cs) : c_(std::move(cs)) { trim(); }

  static Poly x() { return Poly({Complex(0.0), Complex(1.0)}); }
  static Poly from_roots(const std::vector<Complex>& roots, Complex lead = Complex(1.0));

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Complex coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : Complex(0.0);
  }
  const std::vector<Complex>& coeffs() const { return c_; }
  Complex lead() const { return c_.empty() ? Complex(0.0) : c_.back(); }
  double max_abs_coeff() const;

  Complex eval(Complex z) const;
  // Evaluation of the absolute-value polynomial sum |c_k| r^k; the natural
  // backward-error scale for deciding whether eval(z) is "zero".
  double abs_eval(double r) const;

  // Drops trailing (and all) coefficients below rel * max_abs_coeff().
  Poly& trim(double rel = 1e-12);

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Complex s, const Poly& a);
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  // Coefficient-wise conjugation composed with z -> 1/z, cleared to the given
  // degree: result coeff k equals conj(coeff(target_degree - k)).
  Poly conj_reversed(int target_degree) const;
  // conj(c_k) (-1)^k: realizes f(-conj(z))^* for half-plane adjoints.
  Poly sharp_halfplane() const;

  // Quotient of division by (z - alpha); the remainder is discarded.
  Poly deflate(Complex alpha) const;

  // All roots (with multiplicity, unordered) via the companion matrix.
  std::vector<Complex> roots() const;

 private:
  std::vector<Complex> c_;
};

struct RootCluster {
  Complex location;   // arithmetic mean of the clustered roots
  int multiplicity;
};

// Groups numerically coincident roots (within cluster_tol, relative for large
// magnitudes) and orders clusters lexicographically by (Re, Im).
std::vector<RootCluster> cluster_roots(const std::vector<Complex>& roots,
                                       double cluster_tol = 1e-7);

// Dense matrix of polynomials, row-major.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(rows * cols) {}
  static PolyMatrix constant(const MatrixXcd& A);
  static PolyMatrix identity(int n);
  static PolyMatrix zero(int rows, int cols) { return PolyMatrix(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Poly& at(int i, int j) { return e_[i * cols_ + j]; }
  const Poly& at(int i, int j) const { return e_[i * cols_ + j]; }

  MatrixXcd eval(Complex z) const;
  int max_degree() const;
  double max_abs_coeff() const;
  PolyMatrix& trim_all(double rel = 1e-12);

  PolyMatrix operator-() const;
  friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  // Entry-wise multiplication by a scalar polynomial.
  PolyMatrix scaled(const Poly& s) const;

  PolyMatrix block(int i0, int j0, int r, int c) const;
  void set_block(int i0, int j0, const PolyMatrix& B);
  static PolyMatrix hcat(const PolyMatrix& a, const PolyMatrix& b);
  static PolyMatrix vcat(const PolyMatrix& a, const PolyMatrix& b);

  // Entry (i,j) of the result is conj_reversed(target_degree) of entry (j,i).
  PolyMatrix conj_reversed_transposed(int target_degree) const;
  // Entry (i,j) of the result is sharp_halfplane() of entry (j,i).
  PolyMatrix sharp_halfplane_transposed() const;

  // Determinant and adjugate by evaluation at roots of unity followed by an
  // inverse DFT on the samples; exact for polynomial data up to rounding.
  Poly determinant() const;
  PolyMatrix adjugate() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Poly> e_;
};

}  // namespace schur
