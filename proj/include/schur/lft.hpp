#pragma once

#include <string>
#include <vector>

#include "schur/blaschke.hpp"
#include "schur/problem.hpp"
#include "schur/rational.hpp"
#include "schur/resolvent.hpp"

namespace schur {

// A free parameter eps together with both of its Krein-Langer
// factorizations eps = theta_left^{-1} eps_left = eps_right theta_right^{-1}.
// The inner factors collect the interior poles of eps, so their common
// degree is the pole count kappa2.
struct Parameter {
  RationalMatrix eps;
  BPProduct theta_left;
  RationalMatrix eps_left;
  RationalMatrix eps_right;
  BPProduct theta_right;
  int kappa2 = 0;
};

// Builds both factorizations of eps and cross-checks that they agree on the
// interior pole count and reconstruct eps at sample points. Throws
// NotSchurClass / ExtractionStalled when the factorizations do not exist.
Parameter make_parameter(const RationalMatrix& eps, const Tolerances& tol = {});

// Outcome of the residue-sum interpolation check: Verified when the sums
// were computed directly, Implied when the function has poles at the nodes
// but the remaining conditions force the sums through the unique coupling
// block, Undetermined when the coupling block is not unique, Failed when a
// directly computed sum misses its target.
enum class ResidueStatus { Verified, Implied, Undetermined, Failed };

struct VerificationReport {
  bool c1 = false;             // left conditions hold at the left spectrum
  bool c2 = false;             // right conditions hold at the reflected spectrum
  ResidueStatus c3 = ResidueStatus::Undetermined;
  bool c4 = false;             // holomorphy at every interpolation node
  bool class_ok = false;       // all class probes agree with the target index
  int kappa_actual = 0;        // interior pole multiplicity of the candidate
  int class_membership = 0;    // saturated negative-squares sample count
  bool coprime_a = false;      // left factorization has no interior cancellation
  bool coprime_b = false;      // right factorization has no interior cancellation
  std::vector<std::string> diagnostics;

  bool c3_pass() const {
    return c3 == ResidueStatus::Verified || c3 == ResidueStatus::Implied;
  }
  // Full interpolation-problem solution: class plus all four conditions.
  bool solution() const { return class_ok && c1 && c2 && c3_pass() && c4; }
};

// s = (w11 eps + w12)(w21 eps + w22)^{-1} with W split at p = eps.rows().
// Requires det(w21 eps + w22) not identically zero (DegenerateDenominator
// otherwise). When W is j-unitary on the boundary the result is
// cross-checked against the dual form (w11# + eps w12#)^{-1}(w21# + eps w22#)
// at interior sample points.
RationalMatrix t_transform(const RationalMatrix& W, const RationalMatrix& eps,
                           const Tolerances& tol = {});

// Potapov-Ginzburg transform
//   S = [[w11, w12], [0, I]] [[I, 0], [w21, w22]]^{-1}
//     = [[w11 - w12 w22^{-1} w21, w12 w22^{-1}], [-w22^{-1} w21, w22^{-1}]]
// for W split at row/column p. Requires det w22 not identically zero
// (DegenerateBlock otherwise). Applying it twice restores W.
RationalMatrix pg_transform(const RationalMatrix& W, int p,
                            const Tolerances& tol = {});

// Full parametrization step: validates the data, builds the resolvent, and
// returns s = T_W[eps]. For invertible P the parameter is eps_tilde itself;
// for singular P the forced part of the parameter is filled in from the
// neutral subspace alignment, eps = U diag(eps_tilde, I_nu) V^*, and
// eps_tilde must be (p-nu) x (q-nu).
RationalMatrix parametrize(const DataSet& ds, const RationalMatrix& eps_tilde,
                           const Tolerances& tol = {});

// Checks a candidate s against the full interpolation problem: class
// membership (boundary contractivity, interior pole count, negative-squares
// sample, left inner degree), the left/right vanishing conditions at the
// data spectra, the residue sums, holomorphy at the nodes, and the two
// coprimeness conditions of the parametrization. Purely diagnostic: never
// throws, failures are recorded in the report.
VerificationReport verify_solution(const DataSet& ds, const RationalMatrix& s,
                                   const AssociatedPair& pair,
                                   const PhiRows& phis, int kappa,
                                   const Tolerances& tol = {});

// Interior zero count of phi21 eps_r + phi22 theta_r; equals the sum of the
// negative index of the data and the parameter's pole count.
int rouche_count(const PhiRows& phis, const Parameter& param,
                 const Tolerances& tol = {});

// Per-node excluded-parameter test: true where
// det(phi21(a) eps_r(a) + phi22(a) theta_r(a)) vanishes, i.e. where the
// transformed function fails to be holomorphic although the node demands it.
std::vector<bool> excluded_check(const PhiRows& phis, const Parameter& param,
                                 const std::vector<Complex>& nodes,
                                 const Tolerances& tol = {});

// Per-node criterion for the absence of excluded parameters altogether:
// phi21(a) phi21(a)^* - phi22(a) phi22(a)^* negative definite.
std::vector<bool> no_excluded_criterion(const PhiRows& phis,
                                        const std::vector<Complex>& nodes,
                                        const Tolerances& tol = {});

// Searches for a constant contraction eps with
// det(phi21(a) eps + phi22(a)) != 0 at every node: the zero matrix first,
// then seeded random scaled Gaussian contractions. Throws SearchExhausted
// after max_tries draws.
MatrixXcd find_admissible_constant(const DataSet& ds, const PhiRows& phis,
                                   const std::vector<Complex>& nodes,
                                   int max_tries = 64,
                                   const Tolerances& tol = {});

// Membership test for the inner-shifted interpolation problem:
// b1^{-1} (s - K) b2^{-1} has interior pole multiplicity exactly kappa.
bool takagi_sarason_membership(const RationalMatrix& s,
                               const AssociatedPair& pair,
                               const RationalMatrix& K, int kappa,
                               const Tolerances& tol = {});

}  // namespace schur
