/** @file
 * Convex-roof upper bounds. A size-m pure-state ensemble of rho is encoded
 * as an m x r isometry applied to the scaled eigenvectors of rho; every such
 * isometry reproduces rho exactly, so the optimizer moves on the isometry
 * manifold and the reported value is always a sound upper bound.
 */

#ifndef COHERE_ROOF_HPP
#define COHERE_ROOF_HPP

#include <cstdint>
#include <vector>

#include "cohere/matrix.hpp"
#include "cohere/measures.hpp"

namespace cohere {

/** Weighted pure-state ensemble; column l of states pairs with weights[l]. */
struct PureEnsemble {
  RealVector weights;
  Matrix states;

  int size() const { return static_cast<int>(weights.size()); }
  Eigen::Index dim() const { return states.rows(); }
};

// Sum of weights[l] * |psi_l><psi_l|.
Matrix ensemble_matrix(const PureEnsemble& e);

// Weights nonnegative and summing to 1, states normalized.
void validate_ensemble(const PureEnsemble& e);

// Rejects ensembles whose assembled matrix strays from target entrywise.
void validate_reconstruction(const PureEnsemble& e, const Matrix& target,
                             double tolerance = tol::reconstruction);

double ensemble_average(const PureEnsemble& e, const PureStateFunctional& f);

struct RoofOptions {
  int ensemble_size = 0;       // 0 means dim^2
  int restarts = 8;            // restart k draws from seed + k
  std::uint64_t seed = 1;
  int max_iters = 150;         // sweep cap per restart
  double tol = 1e-10;          // relative improvement cutoff per sweep
  const PureEnsemble* warm_start = nullptr;  // refined as restart 0
};

struct RoofResult {
  double value = 0.0;
  PureEnsemble ensemble;
  int restarts_used = 0;
  std::vector<char> converged;  // per restart
};

// Minimizes the ensemble average of f over size-m decompositions of rho by
// random-restart pairwise rotations. Requires m >= rank(rho).
RoofResult roof_upper(const DensityMatrix& rho, const PureStateFunctional& f,
                      const RoofOptions& opts = {});

// Brute-force screen over two-element qubit decompositions: every chord of
// the Bloch ball through b, directions on a grid_n x grid_n sphere grid with
// local refinement around the best cell. grid_n must be at least 90.
double qubit_roof_oracle(const BlochVector& b, const PureStateFunctional& f, int grid_n);

}  // namespace cohere

#endif
