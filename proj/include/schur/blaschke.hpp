#pragma once

#include <vector>

#include "schur/rational.hpp"

namespace schur {

// Elementary factor I - P + beta_alpha(lambda) P, where P is an orthogonal
// projection and beta_alpha is the scalar automorphism of Omega_+ vanishing
// at alpha. The factor is unitary on the boundary and kills rng(P) at alpha.
struct BPFactor {
  Complex alpha;
  MatrixXcd proj;
};

// Scalar boundary-unimodular automorphism with zero at alpha.
Complex bp_scalar(Domain dom, Complex alpha, Complex lambda);

// Finite product of elementary factors times a constant unitary tail,
// evaluated left to right: f_0(lambda) f_1(lambda) ... tail.
class BPProduct {
 public:
  BPProduct(int size, Domain dom)
      : domain_(dom), tail_(MatrixXcd::Identity(size, size)) {}

  Domain domain() const { return domain_; }
  int size() const { return static_cast<int>(tail_.rows()); }
  const std::vector<BPFactor>& factors() const { return factors_; }
  const MatrixXcd& tail() const { return tail_; }

  void push_front(BPFactor f) { factors_.insert(factors_.begin(), std::move(f)); }
  void push_back(BPFactor f) { factors_.push_back(std::move(f)); }
  void set_tail(MatrixXcd t) { tail_ = std::move(t); }

  MatrixXcd bp_eval(Complex lambda) const;
  // Total rank of the factor projections.
  int bp_degree() const;
  RationalMatrix to_rational() const;

 private:
  Domain domain_;
  std::vector<BPFactor> factors_;
  MatrixXcd tail_;
};

// Krein-Langer coprime factorization s = b^{-1} s0 (left) or s = s0 b^{-1}
// (right): b collects the poles of s in Omega_+ as a product of deg-1
// factors, s0 is holomorphic and contractive there.
struct KLFactorization {
  BPProduct b;
  RationalMatrix s0;
};

// Extracts the left factorization by successive pole removal. Throws
// NotSchurClass when s has boundary poles or exceeds the boundary
// contractivity screen, ExtractionStalled when a removal step fails to
// reduce the total interior pole multiplicity by one.
KLFactorization kl_factor_left(const RationalMatrix& s, const Tolerances& tol = {});
KLFactorization kl_factor_right(const RationalMatrix& s, const Tolerances& tol = {});

// rank [b(alpha) s0(alpha)] == rows at every interior zero of det b
// (no common left zero direction).
bool check_noncancellation_left(const BPProduct& b, const RationalMatrix& s0,
                                const Tolerances& tol = {});
// rank [b(alpha); s0(alpha)] == cols at every interior zero of det b.
bool check_noncancellation_right(const BPProduct& b, const RationalMatrix& s0,
                                 const Tolerances& tol = {});

// Rewrites a rational inner function (unitary on the boundary, holomorphic
// on closed Omega_+) as a product of elementary factors times a constant
// unitary, by peeling left zero directions. Throws NotSchurClass when the
// input fails the boundary-unitarity screen, ExtractionStalled when peeling
// does not terminate in a constant.
BPProduct inner_to_bp(const RationalMatrix& B, const Tolerances& tol = {});

}  // namespace schur
