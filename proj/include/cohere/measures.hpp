/** @file
 * Coherence measures on density matrices: the l1-norm of the off-diagonal
 * part, the relative entropy of coherence, closed forms for qubits in Bloch
 * coordinates, and the pure-state functionals fed to the roof optimizer.
 */

#ifndef COHERE_MEASURES_HPP
#define COHERE_MEASURES_HPP

#include <functional>
#include <string>

#include "cohere/matrix.hpp"

namespace cohere {

// Base-2 binary entropy, clamped to [0, 1] with 1e-12 slack; h(0) = h(1) = 0.
double binary_entropy(double x);

// Base-2 Shannon entropy of a subnormalized probability vector; terms below
// tol::entropy_floor contribute zero.
double shannon_entropy(const RealVector& p);

/** Qubit state in Bloch coordinates, rho = (I + x X + y Y + z Z) / 2. */
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double r() const { return std::sqrt(x * x + y * y + z * z); }
};

// Rejects vectors outside the closed unit ball (slack 1e-10).
void validate_bloch(const BlochVector& b);

Eigen::Matrix2cd bloch_to_density(const BlochVector& b);
BlochVector bloch_from_density(const Matrix& rho2);

// Pure state for a unit-length Bloch direction.
Eigen::Vector2cd bloch_to_pure(const BlochVector& direction);

// Sum of off-diagonal entry moduli.
double c_l1(const DensityMatrix& rho);

// Entropy of the dephased state minus entropy of the state, base 2.
double c_r(const DensityMatrix& rho);

// Closed forms for qubits; qubit_cr_roof is the convex-roof value.
double qubit_cr(const BlochVector& b);
double qubit_cr_roof(const BlochVector& b);

// l1 coherence of a unit vector (norm residual above tol::unit_norm rejects).
double pure_c_l1(const Vector& psi);

/** Coherence functional evaluated on normalized pure states. */
struct PureStateFunctional {
  std::string name;
  std::function<double(const Vector&)> eval;
  double operator()(const Vector& psi) const { return eval(psi); }
};

PureStateFunctional pure_l1_functional();
PureStateFunctional pure_relent_functional();

}  // namespace cohere

#endif
