#include "cohere/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cohere {

double hermiticity_error(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermiticity_error: matrix must be square");
  }
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tolerance) {
  return hermiticity_error(m) <= tolerance;
}

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  double w = std::remainder(a, 2.0 * pi);
  if (w <= -pi) w += 2.0 * pi;
  return w;
}

double entry_phase(const Complex& v) {
  if (std::abs(v) < tol::zero_entry) return 0.0;
  return std::arg(v);
}

DensityMatrix::DensityMatrix(Matrix m, const ValidationTolerances& tols) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
  }
  const double herm = hermiticity_error(m);
  if (herm > tols.hermitian) {
    throw std::invalid_argument("DensityMatrix: symmetry residual " + std::to_string(herm));
  }
  mat_ = 0.5 * (m + m.adjoint().eval());
  mat_.diagonal() = mat_.diagonal().real().cast<Complex>();
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > tols.trace) {
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(mat_, Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues().minCoeff();
  if (lo < -tols.psd) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(lo));
  }
}

Spectrum eigh(const Matrix& m) {
  const double herm = hermiticity_error(m);
  if (herm > tol::hermitian) {
    throw std::invalid_argument("eigh: symmetry residual " + std::to_string(herm));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint().eval()));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigh: eigensolver failed to converge");
  }
  Spectrum s;
  s.eigenvalues = solver.eigenvalues().reverse();
  s.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return s;
}

namespace {

// Determinant of the principal submatrix picked out by indices.
double principal_minor(const Matrix& m, const std::vector<int>& indices) {
  const int n = static_cast<int>(indices.size());
  Matrix sub(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) sub(a, b) = m(indices[a], indices[b]);
  }
  return sub.determinant().real();
}

}  // namespace

PsdByMinors is_psd_minors(const Matrix& m) {
  const double herm = hermiticity_error(m);
  if (herm > tol::hermitian) {
    throw std::invalid_argument("is_psd_minors: symmetry residual " + std::to_string(herm));
  }
  const int d = static_cast<int>(m.rows());
  if (d > 8) {
    throw std::invalid_argument("is_psd_minors: dimension above 8 is not supported");
  }
  // Subsets ordered by size then lexicographically, so the first failure is
  // the smallest offending block.
  for (int size = 1; size <= d; ++size) {
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      const double value = principal_minor(m, idx);
      if (value < -tol::minor_sign) {
        return {false, MinorCertificate{idx, value}};
      }
      int pos = size - 1;
      while (pos >= 0 && idx[pos] == d - size + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return {true, std::nullopt};
}

PerronPair perron_vector(const Matrix& m) {
  const Eigen::Index d = m.rows();
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      if (std::abs(m(j, k).imag()) > tol::minor_sign) {
        throw std::invalid_argument("perron_vector: entry (" + std::to_string(j) + "," +
                                    std::to_string(k) + ") is not real");
      }
      if (m(j, k).real() <= tol::zero_entry) {
        throw std::invalid_argument("perron_vector: entry (" + std::to_string(j) + "," +
                                    std::to_string(k) + ") is not strictly positive");
      }
    }
  }
  Spectrum s = eigh(m);
  RealVector chi = s.eigenvectors.col(0).real();
  const RealVector imag_part = s.eigenvectors.col(0).imag();
  // A simple real eigenvalue of a real matrix carries a real eigenvector up
  // to a global phase; rotate that phase away before orienting.
  if (imag_part.cwiseAbs().maxCoeff() > 1e-12) {
    Eigen::Index top;
    s.eigenvectors.col(0).cwiseAbs().maxCoeff(&top);
    const Complex u = s.eigenvectors.col(0)(top) / std::abs(s.eigenvectors.col(0)(top));
    chi = (s.eigenvectors.col(0) / u).real();
  }
  if (chi.sum() < 0.0) chi = -chi;
  if (chi.minCoeff() <= 0.0) {
    throw std::runtime_error("perron_vector: dominant eigenvector is not positive");
  }
  chi.normalize();
  return {s.eigenvalues(0), chi};
}

Matrix phase_conjugate(const Matrix& m, const RealVector& phases) {
  if (phases.size() != m.rows() || m.rows() != m.cols()) {
    throw std::invalid_argument("phase_conjugate: phase count must match dimension");
  }
  const Eigen::Index d = m.rows();
  Vector u(d);
  for (Eigen::Index j = 0; j < d; ++j) u(j) = std::polar(1.0, phases(j));
  return u.asDiagonal() * m * u.conjugate().asDiagonal();
}

DensityMatrix phase_conjugate(const DensityMatrix& rho, const RealVector& phases) {
  return DensityMatrix(phase_conjugate(rho.mat(), phases));
}

std::optional<Eigen::Vector3d> phase_align_unitary(const DensityMatrix& rho) {
  if (rho.dim() != 3) {
    throw std::invalid_argument("phase_align_unitary: dimension must be 3");
  }
  const double t12 = rho.phase(0, 1);
  const double t13 = rho.phase(0, 2);
  const double t23 = rho.phase(1, 2);
  // Conjugating by (0, t12, t13) makes the (0,1) and (0,2) entries
  // nonnegative; the (1,2) entry follows exactly when the phases close up.
  // A vanishing (1,2) entry leaves nothing to align.
  if (rho.modulus(1, 2) >= tol::zero_entry &&
      std::abs(wrap_angle(t23 - (t13 - t12))) > tol::phase_align) {
    return std::nullopt;
  }
  return Eigen::Vector3d(0.0, t12, t13);
}

}  // namespace cohere
