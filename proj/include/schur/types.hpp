#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace schur {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// The two supported domains Omega_+: the open unit disc and the open right
// half-plane. Omega_0 denotes the boundary (unit circle / imaginary axis).
enum class Domain { Disc, HalfPlane };

// rho_omega(lambda): denominator of the reproducing kernels.
//   disc:       1 - lambda*conj(omega)
//   half-plane: lambda + conj(omega)
inline Complex rho(Domain d, Complex omega, Complex lambda) {
  return d == Domain::Disc ? Complex(1.0) - lambda * std::conj(omega)
                           : lambda + std::conj(omega);
}

// Reflection lambda -> lambda^circ across the boundary of Omega_+.
inline Complex reflect(Domain d, Complex lambda) {
  return d == Domain::Disc ? Complex(1.0) / std::conj(lambda) : -std::conj(lambda);
}

// Signed distance-like coordinate: positive inside Omega_+, negative outside.
inline double interior_coordinate(Domain d, Complex lambda) {
  return d == Domain::Disc ? 1.0 - std::abs(lambda) : lambda.real();
}

inline bool in_plus(Domain d, Complex lambda, double boundary_tol = 1e-9) {
  return interior_coordinate(d, lambda) > boundary_tol;
}
inline bool in_minus(Domain d, Complex lambda, double boundary_tol = 1e-9) {
  return interior_coordinate(d, lambda) < -boundary_tol;
}
inline bool on_boundary(Domain d, Complex lambda, double boundary_tol = 1e-9) {
  return std::abs(interior_coordinate(d, lambda)) <= boundary_tol;
}

// Boundary sample for t in [0,1): disc uses the unit circle, the half-plane
// uses a tangent reparametrization of the imaginary axis that spreads samples
// over (-i*T, i*T) without hitting infinity.
inline Complex boundary_point(Domain d, double t) {
  if (d == Domain::Disc) {
    const double th = 2.0 * M_PI * t;
    return Complex(std::cos(th), std::sin(th));
  }
  // Avoid the extreme ends of tan: map t to (-0.49, 0.49) of a period.
  const double th = M_PI * (t - 0.5) * 0.98;
  return Complex(0.0, std::tan(th));
}

// Signature matrix j_pq = diag(I_p, -I_q).
inline MatrixXcd signature_matrix(int p, int q) {
  MatrixXcd j = MatrixXcd::Identity(p + q, p + q);
  j.bottomRightCorner(q, q) *= -1.0;
  return j;
}

struct Tolerances {
  double rank_tol = 1e-9;      // singular values below rank_tol*sigma_max are zero
  double eig_tol = 1e-9;       // eigenvalues within +-eig_tol count as zero
  double residual_tol = 1e-8;  // acceptable residual for equation solutions
};

enum class ErrorCode {
  NotHermitian,
  SpectrumViolation,
  NonUniqueSylvester,
  PoleAtPoint,
  RadiusTooLarge,
  SingularDeterminant,
  NotSchurClass,
  ExtractionStalled,
  NotNeutral,
  DegenerateAlignment,
  ForbiddenMu,
  HolomorphyViolation,
  DegreeCapExceeded,
  FactorizationResidual,
  DegenerateDenominator,
  DegenerateBlock,
  SearchExhausted,
  ParseError,
};

const char* error_code_name(ErrorCode c);

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace schur
