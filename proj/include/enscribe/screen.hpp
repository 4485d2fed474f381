#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "enscribe/ranges.hpp"
#include "enscribe/text.hpp"

namespace enscribe {

enum class IllegibleReason { None, Inefficient, OverlapPattern, EigenSign, UniformThreshold };

inline const char* to_string(IllegibleReason r) {
  switch (r) {
    case IllegibleReason::None: return "none";
    case IllegibleReason::Inefficient: return "inefficient";
    case IllegibleReason::OverlapPattern: return "overlap_pattern";
    case IllegibleReason::EigenSign: return "eigen_sign";
    case IllegibleReason::UniformThreshold: return "uniform_threshold";
  }
  return "none";
}

struct IllegibilityReport {
  bool efficient_ok = true;
  bool overlap_pattern_ok = true;
  bool eigen_sign_ok = true;
  /// Forced sign of Q, when the reciprocal-overlap test applies and passes.
  std::optional<int> eigen_sign;
  std::optional<bool> uniform_threshold_ok;
  IllegibleReason reason = IllegibleReason::None;

  bool possibly_enscribable() const { return reason == IllegibleReason::None; }
  std::string verdict() const {
    return possibly_enscribable() ? "possibly_enscribable"
                                  : std::string("illegible(") + to_string(reason) + ")";
  }
};

/// Orthogonality structure of a Gram matrix: indices with no nonzero
/// overlap, and the single component that must form a clique. Empty
/// optional when the pattern admits no classical (+) fully-quantum split.
inline std::optional<std::vector<Eigen::Index>> fully_quantum_block(const Matrix& g) {
  const Eigen::Index n = g.rows();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Eigen::Index>> comps;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    comps.emplace_back();
    std::vector<Eigen::Index> stack{s};
    comp[static_cast<std::size_t>(s)] = static_cast<int>(comps.size() - 1);
    while (!stack.empty()) {
      const Eigen::Index i = stack.back();
      stack.pop_back();
      comps.back().push_back(i);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (comp[static_cast<std::size_t>(j)] < 0 && std::abs(g(i, j)) >= tol::kState) {
          comp[static_cast<std::size_t>(j)] = comp[static_cast<std::size_t>(s)];
          stack.push_back(j);
        }
      }
    }
  }
  std::vector<Eigen::Index> block;
  for (auto& c : comps) {
    if (c.size() < 2) continue;
    if (!block.empty()) return std::nullopt;  // two overlapping clusters
    for (std::size_t a = 0; a < c.size(); ++a) {
      for (std::size_t b = a + 1; b < c.size(); ++b) {
        if (std::abs(g(c[a], c[b])) < tol::kState) return std::nullopt;
      }
    }
    block = c;
  }
  std::sort(block.begin(), block.end());
  return block;
}

/// Eigenvalues of M_ij = 1/z_ij (ascending) for a fully-quantum Gram block.
inline RealVector reciprocal_overlap_spectrum(const Matrix& g) {
  const Matrix m = g.unaryExpr([](Complex z) { return 1.0 / z; });
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Necessary conditions for enscribability: efficiency; a classical (+)
/// fully-quantum orthogonality pattern; for the fully-quantum block with
/// N >= 3, M = 1/z nonsingular with exactly N-1 eigenvalues of one sign
/// (that sign is forced on Q); for a real uniform block, z >= z0.
inline IllegibilityReport illegibility_screen(const QuantumText& text) {
  IllegibilityReport rep;
  const Matrix g = gram(text);
  rep.efficient_ok = classify(text).efficient;

  const auto block = fully_quantum_block(g);
  rep.overlap_pattern_ok = block.has_value();

  if (block && block->size() >= 3) {
    const auto nb = static_cast<Eigen::Index>(block->size());
    Matrix sub(nb, nb);
    for (Eigen::Index a = 0; a < nb; ++a) {
      for (Eigen::Index b = 0; b < nb; ++b) sub(a, b) = g((*block)[static_cast<std::size_t>(a)], (*block)[static_cast<std::size_t>(b)]);
    }
    const RealVector ev = reciprocal_overlap_spectrum(sub);
    const double scale = ev.cwiseAbs().maxCoeff();
    int pos = 0, neg = 0, zero = 0;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      if (std::abs(ev(k)) <= 1e-10 * scale) ++zero;
      else if (ev(k) > 0.0) ++pos;
      else ++neg;
    }
    if (zero == 0 && pos == nb - 1 && neg == 1) rep.eigen_sign = 1;
    else if (zero == 0 && neg == nb - 1 && pos == 1) rep.eigen_sign = -1;
    else rep.eigen_sign_ok = false;

    if (const auto uni = as_real_uniform(sub)) {
      const int n = static_cast<int>(nb);
      rep.uniform_threshold_ok = uni->z >= 0.0 || uni->z >= z0_threshold(n);
    }
  }

  if (!rep.efficient_ok) rep.reason = IllegibleReason::Inefficient;
  else if (!rep.overlap_pattern_ok) rep.reason = IllegibleReason::OverlapPattern;
  else if (!rep.eigen_sign_ok) rep.reason = IllegibleReason::EigenSign;
  else if (rep.uniform_threshold_ok && !*rep.uniform_threshold_ok) rep.reason = IllegibleReason::UniformThreshold;
  return rep;
}

}  // namespace enscribe
