#pragma once

#include <vector>

#include "schur/numeric.hpp"
#include "schur/poly.hpp"

namespace schur {

// Open region selector relative to Omega_+ of the tagged domain. Exterior
// means the finite part of Omega_-; behavior at infinity is queried
// separately via bounded_at_infinity()/vanishes_at_infinity().
enum class Region { Interior, Exterior };

// Laurent data around a center: coeffs[t] is G_{k_min + t}.
struct LaurentBlock {
  Complex center;
  int k_min = 0;
  std::vector<MatrixXcd> coeffs;

  // G_j, or a zero matrix outside the stored range.
  MatrixXcd get(int j) const {
    const int t = j - k_min;
    if (t < 0 || t >= static_cast<int>(coeffs.size()))
      return coeffs.empty() ? MatrixXcd() : MatrixXcd::Zero(coeffs[0].rows(), coeffs[0].cols());
    return coeffs[t];
  }
};

// Rational matrix-valued function: polynomial numerator matrix over a scalar
// monic denominator, tagged with its domain. Construction normalizes: common
// numerator/denominator roots are cancelled and the denominator is made monic.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(PolyMatrix num, Poly den, Domain dom);
  static RationalMatrix constant(const MatrixXcd& A, Domain dom) {
    return RationalMatrix(PolyMatrix::constant(A), Poly(1.0), dom);
  }
  static RationalMatrix from_poly(PolyMatrix num, Domain dom) {
    return RationalMatrix(std::move(num), Poly(1.0), dom);
  }
  static RationalMatrix identity(int n, Domain dom) {
    return RationalMatrix(PolyMatrix::identity(n), Poly(1.0), dom);
  }
  static RationalMatrix zero(int rows, int cols, Domain dom) {
    return RationalMatrix(PolyMatrix::zero(rows, cols), Poly(1.0), dom);
  }

  int rows() const { return num_.rows(); }
  int cols() const { return num_.cols(); }
  Domain domain() const { return domain_; }
  const PolyMatrix& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_finite_at(Complex lambda) const;
  MatrixXcd eval(Complex lambda) const;  // throws PoleAtPoint

  RationalMatrix operator-() const;
  friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  RationalMatrix scaled(Complex s) const;

  // Inverse via adjugate over determinant; throws SingularDeterminant.
  RationalMatrix inverse() const;

  // The #-adjoint f^#(lambda) = f(lambda^circ)^* in rational closed form.
  RationalMatrix adjoint_sharp() const;

  RationalMatrix block(int i0, int j0, int r, int c) const;
  static RationalMatrix hcat(const RationalMatrix& a, const RationalMatrix& b);
  static RationalMatrix vcat(const RationalMatrix& a, const RationalMatrix& b);

  // Clustered denominator roots (candidate pole locations).
  std::vector<RootCluster> den_roots() const;

  bool bounded_at_infinity() const;   // all entry degrees <= den degree
  bool vanishes_at_infinity() const;  // all entry degrees <  den degree
  MatrixXcd value_at_infinity() const;

  // Laurent coefficients G_{-k_max}..G_{+k_max} at the center by trapezoidal
  // contour quadrature. radius <= 0 selects half the distance to the nearest
  // other denominator root (0.5 when there is none). Coefficients below
  // eig_tol * (largest coefficient norm) are rounded to zero.
  LaurentBlock laurent(Complex center, int k_max, double radius = 0.0,
                       int n_quad = 256, const Tolerances& tol = {}) const;

  // Rank of the block-Toeplitz matrix of negative Laurent coefficients.
  int pole_mult_at(Complex center, const Tolerances& tol = {}) const;

  // Sum of pole multiplicities over denominator roots strictly inside the
  // selected open region (boundary-tolerant).
  int pole_mult_region(Region reg, const Tolerances& tol = {},
                       double boundary_tol = 1e-9) const;

  bool has_boundary_pole(const Tolerances& tol = {}, double boundary_tol = 1e-9) const;

  // Zero multiplicity of a square rational function: pole multiplicity of the
  // inverse. Throws SingularDeterminant.
  int zero_mult_region(Region reg, const Tolerances& tol = {}) const;

  // Largest singular value over a boundary sample grid (infinity if a sample
  // hits a pole).
  double boundary_sup_norm(int samples = 64) const;

 private:
  PolyMatrix num_;
  Poly den_{1.0};
  Domain domain_ = Domain::Disc;

  void normalize();
};

// Left coprimeness of the factorization G^{-1} H over Omega_+, decided by the
// pole-multiplicity identity M_pi(G^{-1} H) = M_pi(G^{-1}).
bool coprime_left_check(const RationalMatrix& G, const RationalMatrix& H,
                        const Tolerances& tol = {});
// Right coprimeness of H G^{-1} over Omega_+.
bool coprime_right_check(const RationalMatrix& G, const RationalMatrix& H,
                         const Tolerances& tol = {});

}  // namespace schur
