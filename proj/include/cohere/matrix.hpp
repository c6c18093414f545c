/** @file
 * Dense complex matrix aliases, pinned tolerances, and the validated
 * density-matrix wrapper used by every other component.
 */

#ifndef COHERE_MATRIX_HPP
#define COHERE_MATRIX_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace cohere {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Numerical thresholds, fixed project-wide. Validation tolerances are looser
// than construction noise; sign tests sit just above double round-off.
namespace tol {
inline constexpr double hermitian = 1e-10;       // input symmetry residual
inline constexpr double trace = 1e-10;           // unit-trace residual
inline constexpr double psd = 1e-10;             // eigenvalue floor on inputs
inline constexpr double minor_sign = 1e-12;      // principal-minor sign test
inline constexpr double zero_entry = 1e-14;      // modulus below this is zero
inline constexpr double phase_match = 1e-9;      // cross-term phase agreement
inline constexpr double phase_align = 1e-10;     // phase-closure defect
inline constexpr double reconstruction = 1e-8;   // ensemble-vs-state residual
inline constexpr double unit_norm = 1e-10;       // pure-state norm residual
inline constexpr double weight_sum = 1e-10;      // ensemble weight-sum residual
inline constexpr double boundary_det = 1e-12;    // verdict band around det = 0
inline constexpr double entropy_floor = 1e-15;   // eigenvalues below give 0 log
}  // namespace tol

// Largest |m - m^dagger| entry.
double hermiticity_error(const Matrix& m);

bool is_hermitian(const Matrix& m, double tolerance = tol::hermitian);

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

// arg(v), with modulus below tol::zero_entry reading as phase 0.
double entry_phase(const Complex& v);

struct ValidationTolerances {
  double hermitian = tol::hermitian;
  double trace = tol::trace;
  double psd = tol::psd;
};

/** Unit-trace positive semidefinite Hermitian matrix.
 *
 * Construction validates symmetry, trace, and spectrum, then symmetrizes so
 * that mat() is Hermitian to the last bit and the diagonal is real.
 */
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m) : DensityMatrix(std::move(m), ValidationTolerances{}) {}
  DensityMatrix(Matrix m, const ValidationTolerances& tols);

  const Matrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

  Complex operator()(Eigen::Index j, Eigen::Index k) const { return mat_(j, k); }
  double modulus(Eigen::Index j, Eigen::Index k) const { return std::abs(mat_(j, k)); }
  double phase(Eigen::Index j, Eigen::Index k) const { return entry_phase(mat_(j, k)); }

 private:
  Matrix mat_;
};

}  // namespace cohere

#endif
