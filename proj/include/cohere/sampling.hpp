/** @file
 * Seeded random states and matrices. The Gaussian source is built on
 * mt19937_64 with an explicit Box-Muller transform so that streams are
 * reproducible across standard libraries.
 */

#ifndef COHERE_SAMPLING_HPP
#define COHERE_SAMPLING_HPP

#include <cstdint>
#include <random>

#include "cohere/matrix.hpp"

namespace cohere {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double gaussian();

  Complex complex_gaussian() { return {gaussian(), gaussian()}; }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

Vector random_pure(int dim, Rng& rng);
Matrix random_hermitian(int dim, Rng& rng);

// Density matrix G G^dagger / tr(G G^dagger) for a square Gaussian G, the
// Hilbert-Schmidt ensemble.
DensityMatrix hs_random_density(int dim, Rng& rng);

}  // namespace cohere

#endif
