#include "cohere/roof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cohere/matcore.hpp"
#include "cohere/sampling.hpp"

namespace cohere {

Matrix ensemble_matrix(const PureEnsemble& e) {
  Matrix sum = Matrix::Zero(e.dim(), e.dim());
  for (int l = 0; l < e.size(); ++l) {
    sum += e.weights(l) * (e.states.col(l) * e.states.col(l).adjoint());
  }
  return sum;
}

void validate_ensemble(const PureEnsemble& e) {
  if (e.states.cols() != e.weights.size() || e.size() < 1) {
    throw std::invalid_argument("PureEnsemble: weight and state counts differ");
  }
  if (e.weights.minCoeff() < -tol::weight_sum) {
    throw std::invalid_argument("PureEnsemble: negative weight");
  }
  if (std::abs(e.weights.sum() - 1.0) > tol::weight_sum) {
    throw std::invalid_argument("PureEnsemble: weights sum to " +
                                std::to_string(e.weights.sum()));
  }
  for (int l = 0; l < e.size(); ++l) {
    const double norm = e.states.col(l).norm();
    if (std::abs(norm - 1.0) > tol::unit_norm) {
      throw std::invalid_argument("PureEnsemble: state " + std::to_string(l) +
                                  " has norm " + std::to_string(norm));
    }
  }
}

void validate_reconstruction(const PureEnsemble& e, const Matrix& target, double tolerance) {
  const double residual = (ensemble_matrix(e) - target).cwiseAbs().maxCoeff();
  if (residual > tolerance) {
    throw std::invalid_argument("ensemble reconstruction residual " +
                                std::to_string(residual));
  }
}

double ensemble_average(const PureEnsemble& e, const PureStateFunctional& f) {
  validate_ensemble(e);
  double avg = 0.0;
  for (int l = 0; l < e.size(); ++l) {
    if (e.weights(l) > tol::entropy_floor) avg += e.weights(l) * f(e.states.col(l));
  }
  return avg;
}

namespace {

// Contribution of one unnormalized ensemble member: weight times the
// functional of the normalized state.
double member_value(const Vector& column, const PureStateFunctional& f) {
  const double w = column.squaredNorm();
  if (w < 1e-30) return 0.0;
  return w * f(column / std::sqrt(w));
}

double total_value(const Matrix& members, const PureStateFunctional& f) {
  double sum = 0.0;
  for (Eigen::Index l = 0; l < members.cols(); ++l) sum += member_value(members.col(l), f);
  return sum;
}

// Columns of members always satisfy members * members^dagger = rho; pairwise
// unitary mixing of two columns preserves that exactly.
struct PairRotation {
  double c;
  Complex s;
};

void apply_rotation(Matrix& members, int i, int j, const PairRotation& g) {
  const Vector a = members.col(i);
  const Vector b = members.col(j);
  members.col(i) = g.c * a + g.s * b;
  members.col(j) = -std::conj(g.s) * a + g.c * b;
}

double rotated_pair_value(const Matrix& members, int i, int j, double t, double phase,
                          const PureStateFunctional& f) {
  const double c = std::cos(t);
  const Complex s = std::polar(std::sin(t), phase);
  const Vector a = c * members.col(i) + s * members.col(j);
  const Vector b = -std::conj(s) * members.col(i) + c * members.col(j);
  return member_value(a, f) + member_value(b, f);
}

// Golden-section minimization of the pair objective over the rotation angle.
double minimize_angle(const Matrix& members, int i, int j, double phase,
                      const PureStateFunctional& f, double lo, double hi, int coarse) {
  double best_t = 0.0;
  double best_v = rotated_pair_value(members, i, j, 0.0, phase, f);
  for (int k = 0; k <= coarse; ++k) {
    const double t = lo + (hi - lo) * k / coarse;
    const double v = rotated_pair_value(members, i, j, t, phase, f);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  const double step = (hi - lo) / coarse;
  double a = best_t - step;
  double b = best_t + step;
  constexpr double inv_golden = 0.6180339887498949;
  double x1 = b - inv_golden * (b - a);
  double x2 = a + inv_golden * (b - a);
  double f1 = rotated_pair_value(members, i, j, x1, phase, f);
  double f2 = rotated_pair_value(members, i, j, x2, phase, f);
  while (b - a > 1e-9) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_golden * (b - a);
      f1 = rotated_pair_value(members, i, j, x1, phase, f);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_golden * (b - a);
      f2 = rotated_pair_value(members, i, j, x2, phase, f);
    }
  }
  const double mid = 0.5 * (a + b);
  return rotated_pair_value(members, i, j, mid, phase, f) < best_v ? mid : best_t;
}

// One pass of pairwise rotations over all column pairs and both rotation
// planes. Returns the objective after the pass.
double sweep(Matrix& members, const PureStateFunctional& f) {
  const int m = static_cast<int>(members.cols());
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      for (const double phase : {0.0, half_pi}) {
        const double t = minimize_angle(members, i, j, phase, f, -half_pi, half_pi, 12);
        if (t != 0.0) {
          const double before = member_value(members.col(i), f) + member_value(members.col(j), f);
          const double after = rotated_pair_value(members, i, j, t, phase, f);
          if (after < before - 1e-15) {
            apply_rotation(members, i, j, {std::cos(t), std::polar(std::sin(t), phase)});
          }
        }
      }
    }
  }
  return total_value(members, f);
}

// Haar-like random isometry via QR of a Gaussian matrix.
Matrix random_isometry(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int a = 0; a < rows; ++a) {
    for (int b = 0; b < cols; ++b) g(a, b) = rng.complex_gaussian();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  return q;
}

PureEnsemble ensemble_from_members(const Matrix& members) {
  const Eigen::Index d = members.rows();
  std::vector<int> keep;
  for (Eigen::Index l = 0; l < members.cols(); ++l) {
    if (members.col(l).squaredNorm() > 1e-12) keep.push_back(static_cast<int>(l));
  }
  PureEnsemble e;
  e.weights.resize(keep.size());
  e.states.resize(d, keep.size());
  for (std::size_t n = 0; n < keep.size(); ++n) {
    const Vector col = members.col(keep[n]);
    const double w = col.squaredNorm();
    e.weights(n) = w;
    e.states.col(n) = col / std::sqrt(w);
  }
  e.weights /= e.weights.sum();
  return e;
}

}  // namespace

RoofResult roof_upper(const DensityMatrix& rho, const PureStateFunctional& f,
                      const RoofOptions& opts) {
  const int d = static_cast<int>(rho.dim());
  const Spectrum s = eigh(rho.mat());
  int rank = 0;
  while (rank < d && s.eigenvalues(rank) > 1e-12) ++rank;
  if (rank == 0) {
    throw std::invalid_argument("roof_upper: state has no positive eigenvalues");
  }

  int m = opts.ensemble_size > 0 ? opts.ensemble_size : d * d;
  if (opts.warm_start != nullptr) m = std::max(m, opts.warm_start->size());
  if (m < rank) {
    throw std::invalid_argument("roof_upper: ensemble size " + std::to_string(m) +
                                " is below rank " + std::to_string(rank));
  }
  if (opts.restarts < 1 || opts.max_iters < 1 || opts.tol <= 0.0) {
    throw std::invalid_argument("roof_upper: restarts, max_iters, and tol must be positive");
  }

  // Rank-one states admit only the trivial decomposition.
  if (rank == 1) {
    PureEnsemble e;
    e.weights = RealVector::Ones(1);
    e.states = s.eigenvectors.col(0);
    return {f(e.states.col(0)), std::move(e), 0, {}};
  }

  Matrix scaled_basis(d, rank);  // column j = sqrt(lambda_j) e_j
  for (int j = 0; j < rank; ++j) {
    scaled_basis.col(j) = s.eigenvectors.col(j) * std::sqrt(s.eigenvalues(j));
  }

  RoofResult result;
  result.restarts_used = opts.restarts;
  double best_value = std::numeric_limits<double>::infinity();
  Matrix best_members;

  for (int k = 0; k < opts.restarts; ++k) {
    Matrix members(d, m);
    if (k == 0 && opts.warm_start != nullptr) {
      validate_reconstruction(*opts.warm_start, rho.mat());
      members.setZero();
      for (int l = 0; l < opts.warm_start->size(); ++l) {
        members.col(l) = std::sqrt(opts.warm_start->weights(l)) * opts.warm_start->states.col(l);
      }
    } else {
      Rng rng(opts.seed + static_cast<std::uint64_t>(k));
      const Matrix v = random_isometry(m, rank, rng);
      members = scaled_basis * v.transpose();
    }

    double value = total_value(members, f);
    bool converged = false;
    for (int iter = 0; iter < opts.max_iters; ++iter) {
      const double next = sweep(members, f);
      if (value - next <= opts.tol * std::max(1.0, std::abs(value))) {
        value = next;
        converged = true;
        break;
      }
      value = next;
    }
    result.converged.push_back(converged ? 1 : 0);
    if (value < best_value) {
      best_value = value;
      best_members = members;
    }
  }

  result.ensemble = ensemble_from_members(best_members);
  result.value = ensemble_average(result.ensemble, f);
  return result;
}

namespace {

// Best two-element split along the chord through b with direction u.
double chord_value(const BlochVector& b, const Eigen::Vector3d& u,
                   const PureStateFunctional& f) {
  const Eigen::Vector3d center(b.x, b.y, b.z);
  const double proj = center.dot(u);
  const double disc = proj * proj + 1.0 - center.squaredNorm();
  const double root = std::sqrt(std::max(disc, 0.0));
  const double t_fwd = -proj + root;
  const double t_bwd = -proj - root;
  if (t_fwd - t_bwd < 1e-14) return std::numeric_limits<double>::infinity();
  const Eigen::Vector3d n1 = (center + t_fwd * u).normalized();
  const Eigen::Vector3d n2 = (center + t_bwd * u).normalized();
  const double p = -t_bwd / (t_fwd - t_bwd);
  const double v1 = f(bloch_to_pure({n1.x(), n1.y(), n1.z()}));
  const double v2 = f(bloch_to_pure({n2.x(), n2.y(), n2.z()}));
  return p * v1 + (1.0 - p) * v2;
}

Eigen::Vector3d sphere_point(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

}  // namespace

double qubit_roof_oracle(const BlochVector& b, const PureStateFunctional& f, int grid_n) {
  validate_bloch(b);
  if (grid_n < 90) {
    throw std::invalid_argument("qubit_roof_oracle: grid_n must be at least 90");
  }
  if (b.r() >= 1.0 - 1e-10) {
    const double r = b.r();
    return f(bloch_to_pure({b.x / r, b.y / r, b.z / r}));
  }

  constexpr double pi = std::numbers::pi;
  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  double best_phi = 0.0;
  for (int i = 0; i <= grid_n; ++i) {
    const double theta = pi * i / grid_n;
    for (int j = 0; j < grid_n; ++j) {
      const double phi = 2.0 * pi * j / grid_n;
      const double v = chord_value(b, sphere_point(theta, phi), f);
      if (v < best) {
        best = v;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  // Shrinking local grid around the best cell.
  double radius = pi / grid_n;
  for (int round = 0; round < 8; ++round) {
    double round_best = best;
    double round_theta = best_theta;
    double round_phi = best_phi;
    for (int a = -2; a <= 2; ++a) {
      for (int c = -2; c <= 2; ++c) {
        const double theta = best_theta + radius * a / 2.0;
        const double phi = best_phi + radius * c / 2.0;
        const double v = chord_value(b, sphere_point(theta, phi), f);
        if (v < round_best) {
          round_best = v;
          round_theta = theta;
          round_phi = phi;
        }
      }
    }
    best = round_best;
    best_theta = round_theta;
    best_phi = round_phi;
    radius *= 0.3;
  }
  return best;
}

}  // namespace cohere
