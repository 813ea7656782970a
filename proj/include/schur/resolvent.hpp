#pragma once

#include "schur/blaschke.hpp"
#include "schur/problem.hpp"
#include "schur/rational.hpp"

namespace schur {

// Resolvent matrix W(lambda) = I_m - rho_mu(lambda) * F(lambda) * X * F(mu)^* * j,
// normalized so that W(mu) = I at the chosen boundary point mu.  X is the
// (pseudo-)inverse of the coupling Gram matrix, as produced by validate().
RationalMatrix build_w(const DataSet& ds, const Eigen::MatrixXcd& X,
                       const Tolerances& tol = Tolerances{});

// The rational inverse of W obtained structurally as j * W^# * j rather than
// by adjugate division; valid whenever W is j-unitary on the boundary.
RationalMatrix w_inverse(const RationalMatrix& W, int p, int q);

// Largest relative deviation of (j - W(lambda) j W(omega)^*) / rho_omega(lambda)
// from F(lambda) X F(omega)^* over a grid of interior sample pairs.  This ties
// the displacement structure of W to the problem data.
double kernel_residual(const DataSet& ds, const Eigen::MatrixXcd& X,
                       const RationalMatrix& W, const Tolerances& tol = Tolerances{});

// Inner denominators (b1, b2) attached to a data set: b2 absorbs the poles of
// the bottom rows of W inside Omega_+, b1 the reflected poles of the top rows.
// They are built from restrictions of (C21, A1) and (C12, A2) to the ranges of
// the corresponding row blocks of X, via observability Gramians.
struct AssociatedPair {
  BPProduct b1;
  BPProduct b2;
};

AssociatedPair associated_pair(const DataSet& ds, const Eigen::MatrixXcd& X,
                               const Tolerances& tol = Tolerances{});

// Row factorizations of W induced by the associated pair:
//   phi2       = b2 * [w21 w22]        holomorphic in the closed Omega_+,
//   phi1_tilde = b1^{-1} * [w11 w12]   holomorphic in Omega_- including infinity.
// Throws HolomorphyViolation when the expected pole cancellation fails.
struct PhiRows {
  RationalMatrix phi2;        // q x m
  RationalMatrix phi1_tilde;  // p x m
};

PhiRows phi_rows(const RationalMatrix& W, const AssociatedPair& pair, int p, int q,
                 const Tolerances& tol = Tolerances{});

// A bounded rational solution (g1, g2) of
//   w21 * g1 + w22 * g2 = b2^{-1}
// with g1, g2 holomorphic in the closed Omega_+, and the induced kernel
//   K = (w11 * g1 + w12 * g2) * b2,
// which is then holomorphic in the closed Omega_+ as well.  The pair (g1, g2)
// is not unique; only the stated properties are guaranteed.
struct KResult {
  RationalMatrix g1;  // p x q
  RationalMatrix g2;  // q x q
  RationalMatrix K;   // p x q
};

KResult compute_K(const RationalMatrix& W, const AssociatedPair& pair,
                  const PhiRows& phis, int p, int q,
                  const Tolerances& tol = Tolerances{});

// Triangular outer-inner splitting W = Theta * Phi with
//   Theta       = [ b1   K * b2^{-1} ]          Theta_tilde = [ b1          0      ]
//                 [ 0        b2^{-1} ]                        [ K^# * b1    b2^{-1} ]
// where Phi is holomorphic and invertible-in-class on Omega_+ and the twin
// identity Theta_tilde^# * j * Theta = j holds.  Residual violations raise
// FactorizationResidual.
struct ThetaFactorization {
  RationalMatrix theta;
  RationalMatrix theta_tilde;
  RationalMatrix phi;
};

ThetaFactorization theta_phi(const RationalMatrix& W, const AssociatedPair& pair,
                             const KResult& k, int p, int q,
                             const Tolerances& tol = Tolerances{});

}  // namespace schur
