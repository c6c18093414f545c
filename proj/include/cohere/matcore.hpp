/** @file
 * Spectral and structural primitives: Hermitian eigendecomposition, the
 * all-principal-minors positivity test, the dominant eigenpair of entrywise
 * positive matrices, and diagonal-unitary phase conjugation.
 */

#ifndef COHERE_MATCORE_HPP
#define COHERE_MATCORE_HPP

#include <optional>
#include <vector>

#include "cohere/matrix.hpp"

namespace cohere {

/** Eigendecomposition of a Hermitian matrix, eigenvalues descending. */
struct Spectrum {
  RealVector eigenvalues;  // sorted descending
  Matrix eigenvectors;     // column j pairs with eigenvalues[j]
};

// Rejects inputs whose symmetry residual exceeds tol::hermitian.
Spectrum eigh(const Matrix& m);

/** Index set and value of a principal minor that breaks positivity. */
struct MinorCertificate {
  std::vector<int> indices;  // ascending row/column subset
  double value;
};

struct PsdByMinors {
  bool psd = true;
  std::optional<MinorCertificate> witness;  // present iff !psd
  explicit operator bool() const { return psd; }
};

// True iff every principal minor is >= -tol::minor_sign. Subsets are scanned
// smallest first, lexicographic within a size; the first failure is returned.
PsdByMinors is_psd_minors(const Matrix& m);

/** Dominant eigenvalue and its positive unit eigenvector. */
struct PerronPair {
  double value;
  RealVector vector;  // entrywise positive, unit norm
};

// Requires a Hermitian matrix whose entries are all real and strictly
// positive; the dominant eigenvalue is then simple and its eigenvector can be
// oriented entrywise positive.
PerronPair perron_vector(const Matrix& m);

// diag(e^{i phases}) * m * diag(e^{-i phases}). Preserves entry moduli,
// eigenvalues, and the diagonal.
Matrix phase_conjugate(const Matrix& m, const RealVector& phases);
DensityMatrix phase_conjugate(const DensityMatrix& rho, const RealVector& phases);

// For a 3x3 density matrix, the phase triple (0, t12, t13) that conjugates
// every entry to a nonnegative real, when the entry phases close up (zero
// entries impose no constraint). Empty when no such triple exists.
std::optional<Eigen::Vector3d> phase_align_unitary(const DensityMatrix& rho);

}  // namespace cohere

#endif
