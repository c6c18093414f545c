#include "cohere/decide.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cohere/matcore.hpp"

namespace cohere {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "EQUAL";
    case Verdict::Strict: return "STRICT";
    case Verdict::Boundary: return "BOUNDARY";
  }
  return "?";
}

std::string situation_label(Situation s, Verdict v) {
  switch (s) {
    case Situation::ZeroDiagonal: return "S1";
    case Situation::ZeroOffDiagonal: return "S2";
    case Situation::AlignedPhases: return "S3";
    case Situation::ObstructedPhases:
      switch (v) {
        case Verdict::Equal: return "S4-equal";
        case Verdict::Strict: return "S4-strict";
        case Verdict::Boundary: return "S4-boundary";
      }
  }
  return "?";
}

Theorem1Report theorem1_check(const DensityMatrix& rho, const PureEnsemble& e) {
  validate_ensemble(e);
  if (e.dim() != rho.dim()) {
    throw std::invalid_argument("theorem1_check: ensemble dimension mismatch");
  }
  validate_reconstruction(e, rho.mat());
  for (int l = 0; l < e.size(); ++l) {
    for (Eigen::Index j = 0; j < rho.dim(); ++j) {
      for (Eigen::Index k = j + 1; k < rho.dim(); ++k) {
        if (rho.modulus(j, k) < tol::zero_entry) continue;
        const Complex cross = e.states(j, l) * std::conj(e.states(k, l));
        if (std::abs(cross) <= 1e-12) continue;
        const double mismatch = std::abs(wrap_angle(std::arg(cross) - rho.phase(j, k)));
        if (mismatch > tol::phase_match) {
          return {false, Theorem1Violation{l, static_cast<int>(j), static_cast<int>(k),
                                           mismatch}};
        }
      }
    }
  }
  return {true, std::nullopt};
}

std::vector<QubitPiece> qubit_pieces(const BlochVector& b) {
  validate_bloch(b);
  const double r = b.r();
  const double eq = std::hypot(b.x, b.y);  // equatorial radius
  const double az = std::abs(b.z);
  std::vector<QubitPiece> pieces;
  auto push = [&pieces](double w, BlochVector dir, double scale) {
    if (w > 1e-15) pieces.push_back({w, dir, scale});
  };

  if (r >= 1.0 - 1e-10) {
    push(1.0, {b.x / r, b.y / r, b.z / r}, eq > tol::zero_entry ? 1.0 / r : 0.0);
    return pieces;
  }
  if (eq < tol::zero_entry) {
    // Diagonal state: mixture of the poles.
    push(0.5 * (1.0 + b.z), {0.0, 0.0, 1.0}, 0.0);
    push(0.5 * (1.0 - b.z), {0.0, 0.0, -1.0}, 0.0);
    return pieces;
  }
  const BlochVector equatorial{b.x / eq, b.y / eq, 0.0};
  if (eq + az <= 1.0) {
    // Equatorial piece carrying all the coherence plus two polar pieces.
    if (az < tol::zero_entry) {
      push(eq, equatorial, 1.0 / eq);
      push(0.5 * (1.0 - eq), {0.0, 0.0, 1.0}, 0.0);
      push(0.5 * (1.0 - eq), {0.0, 0.0, -1.0}, 0.0);
    } else {
      const double s = 0.5 * ((1.0 - eq) / az - 1.0);  // >= 0 in this branch
      const double sign = b.z > 0.0 ? 1.0 : -1.0;
      push(eq, equatorial, 1.0 / eq);
      push(s * az, {0.0, 0.0, -sign}, 0.0);
      push((1.0 + s) * az, {0.0, 0.0, sign}, 0.0);
    }
    return pieces;
  }
  // Equatorial piece plus one tilted surface piece.
  const double s = (1.0 - r * r) / (2.0 * eq * (1.0 - eq));
  const double w1 = s * eq;
  const Eigen::Vector3d tilted((1.0 - s) * b.x, (1.0 - s) * b.y, b.z);
  const double w2 = tilted.norm();  // equals 1 - w1
  push(w1, equatorial, 1.0 / eq);
  push(w2, {tilted.x() / w2, tilted.y() / w2, tilted.z() / w2}, (1.0 - s) / w2);
  return pieces;
}

PureEnsemble qubit_decomposition(const BlochVector& b) {
  const std::vector<QubitPiece> pieces = qubit_pieces(b);
  PureEnsemble e;
  e.weights.resize(pieces.size());
  e.states.resize(2, pieces.size());
  for (std::size_t l = 0; l < pieces.size(); ++l) {
    e.weights(l) = pieces[l].weight;
    e.states.col(l) = bloch_to_pure(pieces[l].direction);
  }
  e.weights /= e.weights.sum();
  return e;
}

namespace {

using Piece3 = std::pair<double, Eigen::Vector3d>;  // weight, nonnegative unit vector

// Pure pieces of a 2x2 real symmetric nonnegative PSD block, weights summing
// to the block trace. Goes through the qubit construction; the aligned frame
// keeps every amplitude nonnegative.
void nonneg_block_pieces(double a, double offd, double c, int row, int col,
                         std::vector<Piece3>& out) {
  if (a < -tol::psd || c < -tol::psd || offd < -tol::psd) {
    throw std::invalid_argument("block split: negative block entry");
  }
  a = std::max(a, 0.0);
  c = std::max(c, 0.0);
  offd = std::max(offd, 0.0);
  const double trace = a + c;
  if (trace < 1e-13) return;
  if (a * c - offd * offd < -tol::psd) {
    throw std::invalid_argument("block split: block fails positivity");
  }
  BlochVector bl{2.0 * offd / trace, 0.0, (a - c) / trace};
  const double r = bl.r();
  if (r > 1.0) {
    // Round-off can push a PSD block a hair outside the ball.
    bl.x /= r;
    bl.z /= r;
  }
  for (const QubitPiece& piece : qubit_pieces(bl)) {
    const Eigen::Vector2cd psi = bloch_to_pure(piece.direction);
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    v(row) = psi(0).real();
    v(col) = psi(1).real();
    out.push_back({trace * piece.weight, v});
  }
}

// Decomposition of a 3x3 real symmetric entrywise-nonnegative PSD matrix
// into pure pieces with nonnegative amplitudes, weights summing to the
// trace. Zero diagonals drop a dimension, a zero off-diagonal splits into
// two overlapping 2x2 blocks, and fully positive matrices shed one dominant
// rank-one piece per round.
void decompose_nonneg3(Eigen::Matrix3d m, std::vector<Piece3>& out, int depth) {
  if (depth > 12) {
    throw std::runtime_error("positive decomposition exceeded the peel cap");
  }
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (m(j, k) < -tol::minor_sign) {
        throw std::invalid_argument("positive decomposition: negative entry");
      }
      if (m(j, k) < 0.0) m(j, k) = 0.0;
    }
  }
  if (m.trace() < 1e-13) return;

  // Vanished diagonal entries force their rows to vanish.
  std::vector<int> alive;
  for (int j = 0; j < 3; ++j) {
    if (m(j, j) >= tol::zero_entry) alive.push_back(j);
  }
  if (alive.size() == 1) {
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    v(alive[0]) = 1.0;
    out.push_back({m(alive[0], alive[0]), v});
    return;
  }
  if (alive.size() == 2) {
    nonneg_block_pieces(m(alive[0], alive[0]), m(alive[0], alive[1]), m(alive[1], alive[1]),
                        alive[0], alive[1], out);
    return;
  }

  // A vanishing off-diagonal pair splits the matrix into a rank-one piece on
  // the first block and a residual 2x2 block sharing the middle index.
  for (const auto [j, k] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    if (m(j, k) >= tol::zero_entry) continue;
    const int mid = 3 - j - k;
    const int sigma[3] = {j, mid, k};  // zero pair moves to the corner
    auto w = [&](int a, int b) { return m(sigma[a], sigma[b]); };
    const double lead = w(0, 0);
    Eigen::Vector3d u = Eigen::Vector3d::Zero();
    u(sigma[0]) = std::sqrt(lead);
    u(sigma[1]) = w(0, 1) / std::sqrt(lead);
    out.push_back({u.squaredNorm(), u.normalized()});
    const double residual = w(1, 1) - w(0, 1) * w(0, 1) / lead;
    if (residual < -tol::psd) {
      throw std::invalid_argument("block split: residual block fails positivity");
    }
    nonneg_block_pieces(residual, w(1, 2), w(2, 2), sigma[1], sigma[2], out);
    return;
  }

  // All entries positive: subtract the largest dominant-eigenvector multiple
  // that keeps every entry nonnegative.
  const PerronPair top = perron_vector(m.cast<Complex>());
  const Eigen::Vector3d chi = top.vector;
  double t = top.value;
  for (int j = 0; j < 3; ++j) {
    for (int k = j; k < 3; ++k) t = std::min(t, m(j, k) / (chi(j) * chi(k)));
  }
  out.push_back({t, chi});
  m -= t * chi * chi.transpose();
  decompose_nonneg3(m, out, depth + 1);
}

PureEnsemble pieces_to_ensemble(const std::vector<Piece3>& pieces) {
  PureEnsemble e;
  e.weights.resize(pieces.size());
  e.states.resize(3, pieces.size());
  for (std::size_t l = 0; l < pieces.size(); ++l) {
    e.weights(l) = pieces[l].first;
    e.states.col(l) = pieces[l].second.cast<Complex>();
  }
  e.weights /= e.weights.sum();
  return e;
}

// Applies diag(e^{-i phases}) to every member state, undoing a prior
// conjugation of the target matrix.
PureEnsemble restore_phases(PureEnsemble e, const Eigen::Vector3d& phases) {
  for (Eigen::Index j = 0; j < 3; ++j) {
    e.states.row(j) *= std::polar(1.0, -phases(j));
  }
  return e;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

PureEnsemble peel_positive(const DensityMatrix& rho_nonneg) {
  if (rho_nonneg.dim() != 3) {
    throw std::invalid_argument("peel_positive: dimension must be 3");
  }
  Eigen::Matrix3d m;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      const Complex v = rho_nonneg(j, k);
      if (std::abs(v.imag()) > tol::minor_sign) {
        throw std::invalid_argument("peel_positive: entries must be real");
      }
      if (v.real() < -tol::minor_sign) {
        throw std::invalid_argument("peel_positive: entries must be nonnegative");
      }
      m(j, k) = std::max(v.real(), 0.0);
    }
  }
  const PsdByMinors psd = is_psd_minors(rho_nonneg.mat());
  if (!psd) {
    throw std::invalid_argument("peel_positive: input fails positivity");
  }
  std::vector<Piece3> pieces;
  decompose_nonneg3(0.5 * (m + m.transpose().eval()), pieces, 0);
  return pieces_to_ensemble(pieces);
}

PureEnsemble split_situation2(const DensityMatrix& rho) {
  if (rho.dim() != 3) {
    throw std::invalid_argument("split_situation2: dimension must be 3");
  }
  for (int j = 0; j < 3; ++j) {
    if (rho(j, j).real() < tol::zero_entry) {
      throw std::invalid_argument("split_situation2: vanishing diagonal entry; "
                                  "reduce the dimension first");
    }
  }
  int zero_row = -1;
  int zero_col = -1;
  for (int j = 0; j < 3 && zero_row < 0; ++j) {
    for (int k = j + 1; k < 3 && zero_row < 0; ++k) {
      if (rho.modulus(j, k) < tol::zero_entry) {
        zero_row = j;
        zero_col = k;
      }
    }
  }
  if (zero_row < 0) {
    throw std::invalid_argument("split_situation2: no vanishing off-diagonal entry");
  }
  // Conjugate the entry phases away. With one pair vanishing only two
  // constraints remain, so a solution always exists; it depends on which
  // pair is free.
  Eigen::Vector3d phases = Eigen::Vector3d::Zero();
  if (zero_row == 0 && zero_col == 1) {
    phases << 0.0, rho.phase(0, 2) - rho.phase(1, 2), rho.phase(0, 2);
  } else if (zero_row == 0 && zero_col == 2) {
    phases << 0.0, rho.phase(0, 1), rho.phase(0, 1) + rho.phase(1, 2);
  } else {
    phases << 0.0, rho.phase(0, 1), rho.phase(0, 2);
  }
  const Matrix aligned = phase_conjugate(rho.mat(), phases);
  Eigen::Matrix3d m = aligned.real();
  // With the right-hand phase choice only the (0,2) pair can stay complex,
  // and only when it is the vanishing one.
  if ((aligned - m.cast<Complex>()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("split_situation2: entry phases do not close up");
  }
  m = m.cwiseMax(0.0);
  std::vector<Piece3> pieces;
  decompose_nonneg3(m, pieces, 0);
  return restore_phases(pieces_to_ensemble(pieces), phases);
}

namespace {

// Witness for a vanishing diagonal: the support block is a qubit.
DecisionReport decide_zero_diagonal(const DensityMatrix& rho, const std::vector<int>& alive,
                                    std::vector<std::string> trace) {
  DecisionReport rep;
  rep.verdict = Verdict::Equal;
  rep.situation = Situation::ZeroDiagonal;
  rep.trace = std::move(trace);
  PureEnsemble witness;
  if (alive.size() <= 1) {
    const int j = alive.empty() ? 0 : alive[0];
    witness.weights = RealVector::Ones(1);
    witness.states = Matrix::Zero(3, 1);
    witness.states(j, 0) = 1.0;
    rep.trace.push_back("support is one-dimensional; trivial witness");
  } else {
    Matrix block(2, 2);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) block(a, b) = rho(alive[a], alive[b]);
    }
    const double tau = block.trace().real();
    BlochVector bl = bloch_from_density(block / tau);
    const double r = bl.r();
    if (r > 1.0) {
      bl.x /= r;
      bl.y /= r;
      bl.z /= r;
    }
    const PureEnsemble sub = qubit_decomposition(bl);
    witness.weights = sub.weights;
    witness.states = Matrix::Zero(3, sub.size());
    for (int l = 0; l < sub.size(); ++l) {
      witness.states(alive[0], l) = sub.states(0, l);
      witness.states(alive[1], l) = sub.states(1, l);
    }
    rep.trace.push_back("support block decomposed by the qubit construction");
  }
  rep.witness = std::move(witness);
  return rep;
}

}  // namespace

DecisionReport decide_equality_d3(const DensityMatrix& rho) {
  if (rho.dim() != 3) {
    throw std::invalid_argument("decide_equality_d3: dimension must be 3");
  }
  std::vector<std::string> trace;

  std::vector<int> alive;
  for (int j = 0; j < 3; ++j) {
    if (rho(j, j).real() >= tol::zero_entry) alive.push_back(j);
  }
  if (alive.size() < 3) {
    trace.push_back("a diagonal entry vanishes; the state lives on a smaller block");
    return decide_zero_diagonal(rho, alive, std::move(trace));
  }

  bool off_zero = false;
  for (int j = 0; j < 3 && !off_zero; ++j) {
    for (int k = j + 1; k < 3 && !off_zero; ++k) {
      if (rho.modulus(j, k) < tol::zero_entry) {
        off_zero = true;
        trace.push_back("entry (" + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                        ") vanishes; overlapping two-block split");
      }
    }
  }
  if (off_zero) {
    DecisionReport rep;
    rep.verdict = Verdict::Equal;
    rep.situation = Situation::ZeroOffDiagonal;
    rep.witness = split_situation2(rho);
    rep.trace = std::move(trace);
    return rep;
  }

  const double t12 = rho.phase(0, 1);
  const double t13 = rho.phase(0, 2);
  const double t23 = rho.phase(1, 2);
  const double defect = wrap_angle(t12 + t23 - t13);
  trace.push_back("all entries nonzero; phase defect " + format_double(defect) + " rad");

  if (std::abs(defect) <= tol::phase_align) {
    // Aligned phases: conjugate to an entrywise positive matrix and peel.
    Eigen::Vector3d phases(0.0, t12, t13);
    const DensityMatrix aligned(phase_conjugate(rho.mat(), phases));
    DecisionReport rep;
    rep.verdict = Verdict::Equal;
    rep.situation = Situation::AlignedPhases;
    rep.witness = restore_phases(peel_positive(aligned), phases);
    trace.push_back("phases close up; dominant-eigenvector peeling");
    rep.trace = std::move(trace);
    return rep;
  }

  // Obstructed phases: equality holds iff some mass x1 on the first diagonal
  // leaves a positive-definite remainder after the forced rank-one split of
  // the (1,2) coherence. The remainder determinant is concave in x1:
  //   det(x1) = offset - slope * x1 - inverse_coeff / x1.
  const double d1 = rho(0, 0).real();
  const double d2 = rho(1, 1).real();
  const double d3 = rho(2, 2).real();
  const double q = rho.modulus(0, 1) * rho.modulus(0, 1);
  const double u = rho.modulus(0, 2);
  const double v = rho.modulus(1, 2);
  const double offset = d1 * d2 * d3 + q * d3 - v * v * d1 - u * u * d2;
  const double slope = d2 * d3 - v * v;          // principal minor of rho, >= 0
  const double inverse_coeff = q * (d1 * d3 - u * u);  // likewise >= 0
  const double lo = q / d2;  // below this the split's middle diagonal is negative
  const double hi = d1;
  double x1_star = hi;
  if (slope > 0.0) x1_star = std::clamp(std::sqrt(inverse_coeff / slope), lo, hi);
  const double max_det = offset - slope * x1_star - inverse_coeff / x1_star;

  DecisionReport rep;
  rep.situation = Situation::ObstructedPhases;
  rep.certificate = InfeasibilityCertificate{x1_star, max_det, {}};
  trace.push_back("determinant profile peaks at x1 = " + format_double(x1_star) +
                  " with value " + format_double(max_det));

  if (max_det >= tol::boundary_det) {
    rep.verdict = Verdict::Equal;
    // Build the witness in the conjugated frame where the (0,1) and (0,2)
    // entries are positive reals.
    Eigen::Vector3d phases(0.0, t12, t13);
    const Matrix aligned = phase_conjugate(rho.mat(), phases);
    Eigen::Vector3d first = Eigen::Vector3d::Zero();
    first(0) = std::sqrt(x1_star);
    first(1) = rho.modulus(0, 1) / std::sqrt(x1_star);
    const double w_first = first.squaredNorm();
    const Matrix remainder = aligned - (first * first.transpose()).cast<Complex>();
    const double tau = 1.0 - w_first;
    const PureEnsemble sub = split_situation2(DensityMatrix(remainder / tau));
    PureEnsemble witness;
    witness.weights.resize(sub.size() + 1);
    witness.states.resize(3, sub.size() + 1);
    witness.weights(0) = w_first;
    witness.states.col(0) = (first / first.norm()).cast<Complex>();
    for (int l = 0; l < sub.size(); ++l) {
      witness.weights(l + 1) = tau * sub.weights(l);
      witness.states.col(l + 1) = sub.states.col(l);
    }
    witness.weights /= witness.weights.sum();
    rep.witness = restore_phases(std::move(witness), phases);
    trace.push_back("remainder splits through the vanishing-entry construction");
  } else if (max_det < -tol::boundary_det) {
    rep.verdict = Verdict::Strict;
    rep.certificate->failing_minor = {0, 1, 2};
    trace.push_back("remainder cannot be made positive definite for any x1");
  } else {
    rep.verdict = Verdict::Boundary;
    trace.push_back("determinant peak sits inside the sign tolerance band");
  }
  rep.trace = std::move(trace);
  return rep;
}

}  // namespace cohere
