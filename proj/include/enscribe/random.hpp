#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "enscribe/equivalence.hpp"

// Seeded generators for test corpora. Every function takes the generator
// explicitly.
namespace enscribe::random {

using Engine = std::mt19937_64;

inline Vector gaussian_vector(Eigen::Index d, Engine& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(d);
  for (Eigen::Index k = 0; k < d; ++k) v(k) = Complex(g(rng), g(rng));
  return v;
}

inline Vector unit_vector(Eigen::Index d, Engine& rng) { return gaussian_vector(d, rng).normalized(); }

inline Complex unit_phase(Engine& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  return std::polar(1.0, u(rng));
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
inline Matrix haar_unitary(Eigen::Index d, Engine& rng) {
  Matrix g(d, d);
  for (Eigen::Index c = 0; c < d; ++c) g.col(c) = gaussian_vector(d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k) {
    const Complex diag = r(k, k);
    q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

/// N random states in C^d.
inline QuantumText random_text(Eigen::Index n, Eigen::Index d, Engine& rng) {
  Matrix cols(d, n);
  for (Eigen::Index i = 0; i < n; ++i) cols.col(i) = unit_vector(d, rng);
  return make_text(cols);
}

/// N orthonormal states in C^d (N <= d), randomly oriented.
inline QuantumText random_classical_text(Eigen::Index n, Eigen::Index d, Engine& rng) {
  const Matrix u = haar_unitary(d, rng);
  return make_text(u.leftCols(n));
}

inline std::vector<Eigen::Index> random_permutation(Eigen::Index n, Engine& rng) {
  std::vector<Eigen::Index> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), Eigen::Index{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline EquivalenceWitness random_equivalence(Eigen::Index n, Eigen::Index d, Engine& rng) {
  EquivalenceWitness w;
  w.permutation = random_permutation(n, rng);
  w.phases.resize(static_cast<std::size_t>(n));
  for (auto& b : w.phases) b = unit_phase(rng);
  w.unitary = haar_unitary(d, rng);
  return w;
}

/// 3-text in C^3 with exactly one vanishing overlap (z_12 = 0), randomly
/// rotated.
inline QuantumText one_zero_overlap_text(Engine& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  Matrix cols = Matrix::Zero(3, 3);
  cols(0, 0) = 1.0;
  cols(1, 1) = 1.0;
  Vector third(3);
  third << u(rng) * unit_phase(rng), u(rng) * unit_phase(rng), u(rng) * unit_phase(rng);
  cols.col(2) = third.normalized();
  return make_text(haar_unitary(3, rng) * cols);
}

}  // namespace enscribe::random
