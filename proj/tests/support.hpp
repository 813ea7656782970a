#pragma once

#include <random>
#include <stdexcept>

#include "schur/numeric.hpp"
#include "schur/problem.hpp"

namespace schur::testing {

// Two-sided boundary data on the disc: p = q = 2, one left node at the
// origin, invertible indefinite Gram matrix P = -3.
inline DataSet anchor_dataset() {
  DataSet ds;
  ds.domain = Domain::Disc;
  ds.p = 2;
  ds.q = 2;
  ds.kappa = 1;
  ds.A1 = MatrixXcd::Zero(1, 1);
  ds.A2 = MatrixXcd(0, 0);
  ds.C = MatrixXcd(4, 1);
  ds.C << 2, 0, 0, 1;
  ds.P = -3.0 * MatrixXcd::Identity(1, 1);
  ds.mu = Complex(1.0);
  return ds;
}

// Scalar disc data with P = 0 and a one-dimensional neutral subspace.
inline DataSet degenerate_dataset() {
  DataSet ds;
  ds.domain = Domain::Disc;
  ds.p = 1;
  ds.q = 1;
  ds.kappa = 0;
  ds.A1 = MatrixXcd::Zero(1, 1);
  ds.A2 = MatrixXcd(0, 0);
  ds.C = MatrixXcd(2, 1);
  ds.C << 1, 1;
  ds.P = MatrixXcd::Zero(1, 1);
  return ds;
}

// Scalar-target disc data with a double node at the origin whose left pair is
// unobservable: the resolvent exists but the parametrization breaks down.
inline DataSet unobservable_dataset() {
  DataSet ds;
  ds.domain = Domain::Disc;
  ds.p = 1;
  ds.q = 1;
  ds.kappa = 1;
  ds.A1 = MatrixXcd::Zero(2, 2);
  ds.A2 = MatrixXcd(0, 0);
  ds.C = MatrixXcd::Identity(2, 2);
  ds.P = MatrixXcd::Zero(2, 2);
  ds.P(0, 0) = -1.0;
  ds.P(1, 1) = 1.0;
  ds.mu = Complex(1.0);
  return ds;
}

// Random admissible data; the coupling identity holds by construction because
// P is produced by the matching displacement solver.
inline DataSet random_dataset(std::mt19937_64& rng, Domain dom, int n1, int n2,
                              int p, int q) {
  DataSet ds;
  ds.domain = dom;
  ds.p = p;
  ds.q = q;
  ds.A1 = random_stable(rng, n1, 0.8);
  ds.A2 = random_stable(rng, n2, 0.8);
  if (dom == Domain::HalfPlane) {
    ds.A1 = ds.A1 + 1.5 * MatrixXcd::Identity(n1, n1);
    ds.A2 = ds.A2 - 1.5 * MatrixXcd::Identity(n2, n2);
  }
  ds.C = random_gaussian(rng, p + q, n1 + n2);
  ds.P = (dom == Domain::Disc)
             ? solve_stein_disc(ds.A1, ds.A2, ds.C, p, q)
             : solve_lyapunov_halfplane(ds.A1, ds.A2, ds.C, p, q);
  ds.kappa = inertia(ds.P).n_neg;
  return ds;
}

// Redraws until the Gram matrix is boundedly invertible, so X = P^{-1} is a
// safe normalization.
inline DataSet random_invertible_dataset(std::mt19937_64& rng, Domain dom,
                                         int n1, int n2, int p, int q) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    DataSet ds;
    try {
      ds = random_dataset(rng, dom, n1, n2, p, q);
    } catch (const SolverError&) {
      continue;  // resonance in the displacement solve; try again
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(ds.P);
    const double lo = es.eigenvalues().cwiseAbs().minCoeff();
    const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
    if (lo > 0.02 * std::max(1.0, hi)) return ds;
  }
  throw std::runtime_error("no well-conditioned random data set in 256 draws");
}

}  // namespace schur::testing
