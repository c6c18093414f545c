#include "cohere/measures.hpp"

#include <algorithm>
#include <cmath>

#include "cohere/matcore.hpp"

namespace cohere {

double binary_entropy(double x) {
  if (x < -1e-12 || x > 1.0 + 1e-12) {
    throw std::invalid_argument("binary_entropy: argument " + std::to_string(x) +
                                " outside [0, 1]");
  }
  x = std::clamp(x, 0.0, 1.0);
  double h = 0.0;
  if (x > tol::entropy_floor) h -= x * std::log2(x);
  if (1.0 - x > tol::entropy_floor) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

double shannon_entropy(const RealVector& p) {
  double h = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    if (p(j) > tol::entropy_floor) h -= p(j) * std::log2(p(j));
  }
  return h;
}

void validate_bloch(const BlochVector& b) {
  if (b.r() > 1.0 + 1e-10) {
    throw std::invalid_argument("BlochVector: length " + std::to_string(b.r()) +
                                " exceeds the unit ball");
  }
}

Eigen::Matrix2cd bloch_to_density(const BlochVector& b) {
  validate_bloch(b);
  Eigen::Matrix2cd m;
  m << Complex(0.5 * (1.0 + b.z), 0.0), Complex(0.5 * b.x, -0.5 * b.y),
      Complex(0.5 * b.x, 0.5 * b.y), Complex(0.5 * (1.0 - b.z), 0.0);
  return m;
}

BlochVector bloch_from_density(const Matrix& rho2) {
  if (rho2.rows() != 2 || rho2.cols() != 2) {
    throw std::invalid_argument("bloch_from_density: dimension must be 2");
  }
  return {2.0 * rho2(0, 1).real(), -2.0 * rho2(0, 1).imag(),
          rho2(0, 0).real() - rho2(1, 1).real()};
}

Eigen::Vector2cd bloch_to_pure(const BlochVector& direction) {
  if (std::abs(direction.r() - 1.0) > 1e-9) {
    throw std::invalid_argument("bloch_to_pure: direction must have unit length");
  }
  const double a = std::sqrt(std::clamp(0.5 * (1.0 + direction.z), 0.0, 1.0));
  const double b = std::sqrt(std::clamp(0.5 * (1.0 - direction.z), 0.0, 1.0));
  const double beta = (std::abs(direction.x) + std::abs(direction.y) < tol::zero_entry)
                          ? 0.0
                          : std::atan2(direction.y, direction.x);
  Eigen::Vector2cd psi;
  psi << Complex(a, 0.0), std::polar(b, beta);
  return psi;
}

double c_l1(const DensityMatrix& rho) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < rho.dim(); ++j) {
    for (Eigen::Index k = 0; k < rho.dim(); ++k) {
      if (j != k) sum += rho.modulus(j, k);
    }
  }
  return sum;
}

double c_r(const DensityMatrix& rho) {
  const Spectrum s = eigh(rho.mat());
  const double state_entropy = shannon_entropy(s.eigenvalues);
  const double dephased_entropy = shannon_entropy(rho.mat().diagonal().real());
  return dephased_entropy - state_entropy;
}

double qubit_cr(const BlochVector& b) {
  validate_bloch(b);
  return binary_entropy(0.5 * (1.0 + b.z)) - binary_entropy(0.5 * (1.0 + b.r()));
}

double qubit_cr_roof(const BlochVector& b) {
  validate_bloch(b);
  const double s = 1.0 - b.r() * b.r() + b.z * b.z;
  return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(s, 0.0))));
}

double pure_c_l1(const Vector& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > tol::unit_norm) {
    throw std::invalid_argument("pure_c_l1: state norm " + std::to_string(norm) + " is not 1");
  }
  const double abs_sum = psi.cwiseAbs().sum();
  return abs_sum * abs_sum - psi.squaredNorm();
}

PureStateFunctional pure_l1_functional() {
  return {"l1", [](const Vector& psi) {
            const double abs_sum = psi.cwiseAbs().sum();
            return abs_sum * abs_sum - psi.squaredNorm();
          }};
}

PureStateFunctional pure_relent_functional() {
  return {"rel-entropy", [](const Vector& psi) {
            return shannon_entropy(psi.cwiseAbs2());
          }};
}

}  // namespace cohere
