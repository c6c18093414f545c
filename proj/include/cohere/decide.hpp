/** @file
 * Exact decision of whether the convex-roof l1 coherence of a 3x3 density
 * matrix equals its l1 coherence. The engine routes on the zero pattern and
 * entry phases: vanishing diagonal (S1) and vanishing off-diagonal (S2)
 * reduce to qubit constructions, aligned phases (S3) peel rank-one pieces off
 * an entrywise positive conjugate, and obstructed phases (S4) reduce to a
 * one-parameter positive-definiteness problem with an analytic optimizer.
 * EQUAL verdicts carry a witness ensemble whose cross-term phases match the
 * state; STRICT verdicts carry an infeasibility certificate.
 */

#ifndef COHERE_DECIDE_HPP
#define COHERE_DECIDE_HPP

#include <optional>
#include <string>
#include <vector>

#include "cohere/matrix.hpp"
#include "cohere/measures.hpp"
#include "cohere/roof.hpp"

namespace cohere {

enum class Verdict { Equal, Strict, Boundary };
enum class Situation { ZeroDiagonal, ZeroOffDiagonal, AlignedPhases, ObstructedPhases };

std::string verdict_name(Verdict v);
// S1, S2, S3, or S4 qualified by the verdict (S4-equal, S4-strict, S4-boundary).
std::string situation_label(Situation s, Verdict v);

/** First ensemble member whose cross-term phase disagrees with the state. */
struct Theorem1Violation {
  int state_index;
  int row;
  int col;
  double phase_mismatch;  // radians
};

struct Theorem1Report {
  bool ok = false;
  std::optional<Theorem1Violation> violation;
  explicit operator bool() const { return ok; }
};

// True iff every cross term psi_j * conj(psi_k) of every member carries the
// phase of rho_jk. Entries of rho with modulus below tol::zero_entry impose
// no constraint, nor do cross terms below 1e-12. The ensemble must
// reconstruct rho to tol::reconstruction.
Theorem1Report theorem1_check(const DensityMatrix& rho, const PureEnsemble& e);

/** One pure piece of the qubit construction: weight, Bloch direction, and
 * the factor scaling the state's equatorial part into the piece's. */
struct QubitPiece {
  double weight;
  BlochVector direction;  // unit length
  double scale;
};

// Geometric decomposition of a Bloch vector into pure pieces whose
// equatorial parts are nonnegative multiples of the state's. Mixed states
// split into an equatorial piece plus polar pieces when the equatorial
// radius and |z| fit inside the ball, and into an equatorial piece plus one
// tilted piece otherwise.
std::vector<QubitPiece> qubit_pieces(const BlochVector& b);

// The pieces as a pure-state ensemble; always satisfies theorem1_check
// against the state, so qubit roof and l1 coherence agree.
PureEnsemble qubit_decomposition(const BlochVector& b);

// Decomposition of an entrywise nonnegative real 3x3 density matrix by
// repeatedly subtracting the largest multiple of the dominant eigenvector
// projector that keeps the remainder entrywise nonnegative; remainders with
// zero entries finish through the zero-pattern splits.
PureEnsemble peel_positive(const DensityMatrix& rho_nonneg);

// Decomposition of a 3x3 density matrix with a vanishing off-diagonal pair
// and positive diagonal: the zero pair is relabeled to the corner, phases
// are conjugated away, and the two overlapping 2x2 blocks are split through
// the qubit construction.
PureEnsemble split_situation2(const DensityMatrix& rho);

/** Infeasibility record for the one-parameter split. x1_star maximizes the
 * determinant profile; max_det below -1e-12 proves no valid split exists. */
struct InfeasibilityCertificate {
  double x1_star = 0.0;
  double max_det = 0.0;
  std::vector<int> failing_minor;  // index set, empty unless STRICT
};

struct DecisionReport {
  Verdict verdict = Verdict::Equal;
  Situation situation = Situation::AlignedPhases;
  std::optional<PureEnsemble> witness;                 // present iff EQUAL
  std::optional<InfeasibilityCertificate> certificate; // present for S4
  std::vector<std::string> trace;                      // reduction steps
};

DecisionReport decide_equality_d3(const DensityMatrix& rho);

}  // namespace cohere

#endif
