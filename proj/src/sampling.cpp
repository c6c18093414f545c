#include "cohere/sampling.hpp"

#include <cmath>
#include <numbers>

namespace cohere {

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

Vector random_pure(int dim, Rng& rng) {
  Vector psi(dim);
  for (int j = 0; j < dim; ++j) psi(j) = rng.complex_gaussian();
  psi.normalize();
  return psi;
}

Matrix random_hermitian(int dim, Rng& rng) {
  Matrix g(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) g(j, k) = rng.complex_gaussian();
  }
  return 0.5 * (g + g.adjoint().eval());
}

DensityMatrix hs_random_density(int dim, Rng& rng) {
  Matrix g(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) g(j, k) = rng.complex_gaussian();
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

}  // namespace cohere
