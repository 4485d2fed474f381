#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "enscribe/common.hpp"

namespace enscribe {

/// N pairwise non-colinear unit vectors in C^d, stored column-wise.
class QuantumText {
 public:
  Eigen::Index dimension() const { return states_.rows(); }
  Eigen::Index size() const { return states_.cols(); }
  const Matrix& states() const { return states_; }
  Vector state(Eigen::Index i) const { return states_.col(i); }

  /// Subtext with the given indices, in the given order.
  QuantumText subtext(const std::vector<Eigen::Index>& indices) const {
    Matrix cols(dimension(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) {
      cols.col(static_cast<Eigen::Index>(k)) = states_.col(indices[k]);
    }
    return QuantumText(std::move(cols));
  }

 private:
  explicit QuantumText(Matrix states) : states_(std::move(states)) {}
  friend QuantumText make_text(const Matrix& columns);

  Matrix states_;
};

/// Validates columns as a text. Norms off by less than tol::kState are
/// renormalized.
inline QuantumText make_text(const Matrix& columns) {
  if (columns.cols() < 1 || columns.rows() < 1) {
    throw Error(ErrorKind::DimensionMismatch, "a text needs N >= 1 states in dimension d >= 1");
  }
  Matrix states = columns;
  for (Eigen::Index i = 0; i < states.cols(); ++i) {
    const double n = states.col(i).norm();
    if (!(std::abs(n - 1.0) < tol::kState)) {
      throw Error(ErrorKind::NonUnitState,
                  "state " + std::to_string(i) + " has norm " + std::to_string(n));
    }
    states.col(i) /= n;
  }
  for (Eigen::Index i = 0; i < states.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < states.cols(); ++j) {
      const double overlap = std::abs(states.col(i).dot(states.col(j)));
      if (overlap >= 1.0 - tol::kState) {
        throw Error(ErrorKind::ColinearPair,
                    "states " + std::to_string(i) + " and " + std::to_string(j) + " are colinear");
      }
    }
  }
  return QuantumText(std::move(states));
}

inline QuantumText make_text(Eigen::Index dimension,
                             const std::vector<std::vector<Complex>>& raw_states) {
  if (raw_states.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "a text needs at least one state");
  }
  if (dimension < 1) throw Error(ErrorKind::DimensionMismatch, "dimension must be positive");
  Matrix cols(dimension, static_cast<Eigen::Index>(raw_states.size()));
  for (std::size_t k = 0; k < raw_states.size(); ++k) {
    if (static_cast<Eigen::Index>(raw_states[k].size()) != dimension) {
      throw Error(ErrorKind::DimensionMismatch,
                  "state " + std::to_string(k) + " has length " +
                      std::to_string(raw_states[k].size()) + ", expected " +
                      std::to_string(dimension));
    }
    for (Eigen::Index r = 0; r < dimension; ++r) cols(r, static_cast<Eigen::Index>(k)) = raw_states[k][r];
  }
  return make_text(cols);
}

/// z_ij = <psi_i|psi_j>.
inline Matrix gram(const QuantumText& text) { return text.states().adjoint() * text.states(); }

inline bool is_psd(const Matrix& g, double slack = tol::kPsdSlack) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= slack;
}

/// Triple inequality
/// |z12|^2 + |z23|^2 + |z31|^2 <= 1 + 2 Re[z12 z23 z31], returned as
/// rhs - lhs (nonnegative when it holds).
inline double triple_inequality_margin(const Matrix& g, Eigen::Index a, Eigen::Index b,
                                       Eigen::Index c) {
  const Complex zab = g(a, b), zbc = g(b, c), zca = g(c, a);
  return 1.0 + 2.0 * (zab * zbc * zca).real() - std::norm(zab) - std::norm(zbc) - std::norm(zca);
}

struct TextClassification {
  bool classical = false;
  bool fully_quantum = false;
  bool efficient = false;
  bool thick = false;
  Eigen::Index dialect_dimension = 0;
};

inline TextClassification classify(const QuantumText& text) {
  const Matrix g = gram(text);
  const Eigen::Index n = text.size();
  TextClassification c;
  c.classical = true;
  c.fully_quantum = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double m = std::abs(g(i, j));
      if (m >= tol::kState) c.classical = false;
      if (m <= tol::kState) c.fully_quantum = false;
    }
  }
  c.dialect_dimension = hermitian_rank(g);
  c.efficient = c.dialect_dimension == n;
  c.thick = c.dialect_dimension == text.dimension();
  return c;
}

/// Orthogonal projector onto the span of the text.
inline Matrix dialect_projector(const QuantumText& text) {
  Eigen::JacobiSVD<Matrix> svd(text.states(), Eigen::ComputeThinU);
  const RealVector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > std::sqrt(tol::kRank) * sv(0)) ++rank;
  }
  const Matrix basis = svd.matrixU().leftCols(rank);
  return basis * basis.adjoint();
}

/// Split of a text induced by a tablet: states orthogonal to it, and the
/// rest. `consistent` holds when the orthogonal part is classical, the
/// rest fully-quantum, and the two parts mutually orthogonal.
struct DirectSumReport {
  std::vector<Eigen::Index> classical_indices;
  std::vector<Eigen::Index> fully_quantum_indices;
  bool classical_part_ok = false;
  bool quantum_part_ok = false;
  bool cross_orthogonal = false;
  bool consistent = false;
};

inline DirectSumReport direct_sum_decompose(const QuantumText& text, const Vector& tablet) {
  if (tablet.size() != text.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "tablet dimension differs from the language");
  }
  DirectSumReport r;
  const Matrix g = gram(text);
  for (Eigen::Index i = 0; i < text.size(); ++i) {
    const double overlap = std::abs(tablet.dot(text.states().col(i)));
    (overlap < tol::kState ? r.classical_indices : r.fully_quantum_indices).push_back(i);
  }
  auto all_pairs = [&](const std::vector<Eigen::Index>& a, const std::vector<Eigen::Index>& b,
                       bool want_zero) {
    for (Eigen::Index i : a) {
      for (Eigen::Index j : b) {
        if (i == j) continue;
        const bool zero = std::abs(g(i, j)) < tol::kState;
        if (zero != want_zero) return false;
      }
    }
    return true;
  };
  r.classical_part_ok = all_pairs(r.classical_indices, r.classical_indices, true);
  r.quantum_part_ok = all_pairs(r.fully_quantum_indices, r.fully_quantum_indices, false);
  r.cross_orthogonal = all_pairs(r.classical_indices, r.fully_quantum_indices, true);
  r.consistent = r.classical_part_ok && r.quantum_part_ok && r.cross_orthogonal;
  return r;
}

/// N unit vectors in C^N with all pairwise overlaps equal to the real z,
/// taken as the columns of the principal square root of (1-z)I + zJ.
inline QuantumText make_real_uniform(Eigen::Index n, double z) {
  if (n < 1) throw Error(ErrorKind::SizeMismatch, "N must be positive");
  const double lower = n > 1 ? -1.0 / static_cast<double>(n - 1) : -1.0;
  if (!(z >= lower - 1e-15 && z < 1.0)) {
    throw Error(ErrorKind::ZOutOfRange, "real uniform overlap " + std::to_string(z) +
                                            " outside [-1/(N-1), 1)");
  }
  const double nn = static_cast<double>(n);
  const double perp = std::sqrt(1.0 - z);
  const double along = std::sqrt(std::max(0.0, 1.0 + (nn - 1.0) * z));
  RealMatrix root = perp * (RealMatrix::Identity(n, n) - RealMatrix::Constant(n, n, 1.0 / nn)) +
                    along * RealMatrix::Constant(n, n, 1.0 / nn);
  return make_text(root.cast<Complex>());
}

/// If the Gram matrix is, up to per-state phases, that of a real uniform
/// text, returns (z, beta) with conj(beta_i) beta_j z_ij = z for i != j.
struct RealUniformGauge {
  double z = 0.0;
  std::vector<Complex> beta;
};

inline std::optional<RealUniformGauge> as_real_uniform(const Matrix& g, double eps = 1e-9) {
  const Eigen::Index n = g.rows();
  if (n < 2) return std::nullopt;
  const double r = std::abs(g(0, 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(std::abs(g(i, j)) - r) > eps) return std::nullopt;
    }
  }
  RealUniformGauge out;
  out.beta.assign(static_cast<std::size_t>(n), Complex(1.0, 0.0));
  if (r < eps) {
    out.z = 0.0;
    return out;
  }
  // The sign follows from a triple product (Bargmann invariant z^3).
  double sign = 1.0;
  if (n >= 3) {
    const Complex triple = g(0, 1) * g(1, 2) * g(2, 0);
    if (std::abs(triple.imag()) > 1e-7 * std::max(1.0, r * r * r)) return std::nullopt;
    sign = triple.real() < 0.0 ? -1.0 : 1.0;
  } else {
    sign = g(0, 1).real() < 0.0 && std::abs(g(0, 1).imag()) < eps ? -1.0 : 1.0;
  }
  out.z = sign * r;
  // Fix beta_j so that conj(beta_0) beta_j z_0j = z.
  for (Eigen::Index j = 1; j < n; ++j) {
    const Complex need = out.z / g(0, j);
    out.beta[static_cast<std::size_t>(j)] = need / std::abs(need);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex v = std::conj(out.beta[static_cast<std::size_t>(i)]) *
                        out.beta[static_cast<std::size_t>(j)] * g(i, j);
      if (std::abs(v - out.z) > 1e-7) return std::nullopt;
    }
  }
  return out;
}

}  // namespace enscribe
