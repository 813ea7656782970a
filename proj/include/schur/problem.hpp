#pragma once

#include <string>
#include <vector>

#include "schur/rational.hpp"

namespace schur {

// Two-sided boundary interpolation data. The first n1 pencil columns carry
// left conditions (matrix A1), the last n2 carry right conditions (A2); C
// stacks a p-row block over a q-row block, and P is the Hermitian coupling
// matrix tied to the data by a Lyapunov-Stein (disc) or Lyapunov
// (half-plane) equation.
struct DataSet {
  Domain domain = Domain::Disc;
  MatrixXcd A1;  // n1 x n1
  MatrixXcd A2;  // n2 x n2
  MatrixXcd C;   // (p+q) x (n1+n2)
  MatrixXcd P;   // (n1+n2) x (n1+n2), Hermitian
  int p = 0;
  int q = 0;
  int kappa = 0;          // requested negative-square count of solutions
  Complex mu{0.0, 0.0};   // boundary normalization point; 0 selects a default

  int n1() const { return static_cast<int>(A1.rows()); }
  int n2() const { return static_cast<int>(A2.rows()); }
  int n() const { return n1() + n2(); }
  int m() const { return p + q; }

  // Pencil factors: disc uses M = diag(A1, I), N = diag(I, A2); the
  // half-plane uses M = diag(A1, A2), N = I.
  MatrixXcd M() const;
  MatrixXcd N() const;

  MatrixXcd C11() const { return C.block(0, 0, p, n1()); }
  MatrixXcd C12() const { return C.block(0, n1(), p, n2()); }
  MatrixXcd C21() const { return C.block(p, 0, q, n1()); }
  MatrixXcd C22() const { return C.block(p, n1(), q, n2()); }
};

// C (M - lambda N)^{-1} as a rational matrix.
RationalMatrix transfer_F(const DataSet& ds);

// The stored mu if nonzero, otherwise the first boundary point (1 on the
// disc, i on the half-plane, then a deterministic rotation) at which the
// pencil M - mu N is invertible. Throws ForbiddenMu when every candidate
// fails.
Complex default_mu(const DataSet& ds, const Tolerances& tol = {});

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> failures;
  int kappa_min = 0;       // negative eigenvalues of P
  bool kappa_feasible = true;  // requested kappa >= kappa_min
  MatrixXcd X;             // Hermitian pseudo-inverse of P used downstream

  void fail(std::string msg) {
    ok = false;
    failures.push_back(std::move(msg));
  }
};

// Checks the structural assumptions: spectra of A1/A2 sit strictly in the
// correct regions, P is Hermitian and solves the coupling equation, the
// cross pairs (C21, A1) and (C12, A2) are observable, and when P is
// singular its pseudo-inverse is compatible with the pencil (range
// invariance on the disc, the quadratic residual equation on the
// half-plane).
ValidationReport validate(const DataSet& ds, const Tolerances& tol = {});

// Block Pick matrix [ (I_q - s_j^* s_k) / (1 - conj(alpha_j) alpha_k) ] of a
// full-matrix Nevanlinna-Pick problem s(alpha_j) = s_j on the disc.
MatrixXcd pick_matrix_np(const std::vector<Complex>& alphas,
                         const std::vector<MatrixXcd>& svalues);

// Packs Nevanlinna-Pick nodes/values into interpolation data: A1 is
// diag(alpha_j I_q), C stacks the values over identity blocks, P is the
// Pick matrix.
DataSet make_np_dataset(const std::vector<Complex>& alphas,
                        const std::vector<MatrixXcd>& svalues, int kappa);

// Lower bound for the number of negative squares of the kernel
// (I - s(z) s(w)^*) / rho_w(z) from a fixed interior sample grid: the
// negative eigenvalue count of the sampled block Gram matrix. Exact for
// rational s once the grid is fine enough.
int negative_squares_sample(const RationalMatrix& s, const Tolerances& tol = {});

// Defect dimension of the degenerate (singular P) parametrization:
// rank(M*P^2M + N*P^2N + C*C) - rank(P) on the disc,
// rank(P^2 + C*C) - rank(P) on the half-plane.
int nu_degenerate(const DataSet& ds, const Tolerances& tol = {});

// Orthonormal basis of F(mu) ker P, the signature-neutral subspace that
// pins down the degenerate directions. Throws NotNeutral when the computed
// subspace is not j-neutral within tolerance.
MatrixXcd neutral_subspace(const DataSet& ds, const Tolerances& tol = {});

struct AlignmentPair {
  MatrixXcd U;  // p x p unitary
  MatrixXcd V;  // q x q unitary
};

// Unitaries whose trailing nu columns align the upper and lower components
// of the neutral basis K: every parameter U diag(eps, I_nu) V^* maps the
// lower frame onto the upper frame. Throws NotNeutral when the two Gram
// matrices disagree, DegenerateAlignment when the common Gram is singular.
AlignmentPair uv_from_neutral(const MatrixXcd& K, int p, int q,
                              const Tolerances& tol = {});

}  // namespace schur
