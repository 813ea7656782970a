#pragma once

#include <random>
#include <vector>

#include "schur/types.hpp"

namespace schur {

// Eigenvalue signature of a Hermitian matrix.
struct Inertia {
  int n_neg = 0;
  int n_zero = 0;
  int n_pos = 0;
  bool operator==(const Inertia&) const = default;
};

// Counts of eigenvalues of a Hermitian H below -eig_tol, within +-eig_tol
// (relative to the largest magnitude), and above +eig_tol.
Inertia inertia(const MatrixXcd& H, const Tolerances& tol = {});

// Number of singular values exceeding rank_tol * sigma_max.
int numerical_rank(const MatrixXcd& M, const Tolerances& tol = {});

// Eigenvalues of a general complex square matrix.
std::vector<Complex> eigenvalues(const MatrixXcd& A);
double spectral_radius(const MatrixXcd& A);

// Solves X - A X B = Q by Kronecker vectorization (sizes here are tiny).
MatrixXcd solve_stein(const MatrixXcd& A, const MatrixXcd& B, const MatrixXcd& Q);

// Solves A X + X B = Q by Kronecker vectorization.
MatrixXcd solve_sylvester(const MatrixXcd& A, const MatrixXcd& B, const MatrixXcd& Q);

// Solves M*PM - N*PN = C* j_pq C blockwise for the disc-domain pencil
// M = diag(A1, I), N = diag(I, A2). C has p+q rows and n1+n2 columns.
// Throws SpectrumViolation if a spectrum leaves the open disc and
// NonUniqueSylvester if the off-diagonal block is not uniquely determined.
MatrixXcd solve_stein_disc(const MatrixXcd& A1, const MatrixXcd& A2,
                           const MatrixXcd& C, int p, int q,
                           const Tolerances& tol = {});

// Solves A*P + PA + C*JC = 0 blockwise for A = diag(A1, A2) with
// sigma(A1) in the open right half-plane and sigma(A2) in the open left one.
MatrixXcd solve_lyapunov_halfplane(const MatrixXcd& A1, const MatrixXcd& A2,
                                   const MatrixXcd& C, int p, int q,
                                   const Tolerances& tol = {});

// Spectral (Moore-Penrose) pseudoinverse of a Hermitian matrix; the result is
// Hermitian, satisfies XPX=X and PXP=P, and shares rank and negative index
// with P. Throws NotHermitian.
MatrixXcd pinv_hermitian(const MatrixXcd& P, const Tolerances& tol = {});

// General SVD pseudoinverse.
MatrixXcd pinv(const MatrixXcd& M, const Tolerances& tol = {});

// Orthonormal basis of the column space (m x rank).
MatrixXcd orthonormal_colspace(const MatrixXcd& M, const Tolerances& tol = {});

// Orthonormal basis of the null space (n x nullity).
MatrixXcd null_space(const MatrixXcd& M, const Tolerances& tol = {});

// Columns completing an isometry Q (m x k, Q*Q = I) to a unitary [comp, Q];
// each complement column's largest-magnitude entry is made real positive.
MatrixXcd orthonormal_complement(const MatrixXcd& Q);

// Deterministic random helpers (all consumption comes from the caller's rng).
MatrixXcd random_gaussian(std::mt19937_64& rng, int rows, int cols);
MatrixXcd random_unitary(std::mt19937_64& rng, int n);
// Random matrix with largest singular value exactly smax.
MatrixXcd random_contraction(std::mt19937_64& rng, int rows, int cols, double smax);
// Random matrix with spectral radius at most rad (scaled Ginibre).
MatrixXcd random_stable(std::mt19937_64& rng, int n, double rad);

}  // namespace schur
