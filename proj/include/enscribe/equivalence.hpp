#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "enscribe/correspondence.hpp"
#include "enscribe/text.hpp"

namespace enscribe {

/// Witness that text A equals text B up to phases, a unitary and a
/// relabelling: a_i = phases[i] * unitary * b_{permutation[i]}.
struct EquivalenceWitness {
  std::vector<Eigen::Index> permutation;
  std::vector<Complex> phases;
  Matrix unitary;
};

/// Applies a witness to `base`, giving the equivalent text.
inline QuantumText apply_equivalence(const QuantumText& base, const EquivalenceWitness& w) {
  if (w.unitary.rows() != base.dimension() || w.unitary.cols() != base.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "witness unitary does not act on the language");
  }
  if (static_cast<Eigen::Index>(w.permutation.size()) != base.size() ||
      static_cast<Eigen::Index>(w.phases.size()) != base.size()) {
    throw Error(ErrorKind::SizeMismatch, "witness size differs from the text");
  }
  Matrix cols(base.dimension(), base.size());
  for (Eigen::Index i = 0; i < base.size(); ++i) {
    cols.col(i) = w.phases[static_cast<std::size_t>(i)] * (w.unitary * base.states().col(w.permutation[static_cast<std::size_t>(i)]));
  }
  return make_text(cols);
}

/// Largest entrywise deviation between `target` and the witness applied to
/// `base`.
inline double witness_error(const QuantumText& target, const QuantumText& base,
                            const EquivalenceWitness& w) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < base.size(); ++i) {
    const Vector v = w.phases[static_cast<std::size_t>(i)] *
                     (w.unitary * base.states().col(w.permutation[static_cast<std::size_t>(i)]));
    worst = std::max(worst, (v - target.states().col(i)).cwiseAbs().maxCoeff());
  }
  return worst;
}

namespace detail {

// Phases beta with conj(beta_i) beta_j gb_ij = ga_ij for the fixed permutation,
// solved along a spanning forest of the nonzero-overlap graph and then checked
// on every pair (equivalently, on every Bargmann cycle).
inline std::optional<std::vector<Complex>> solve_phase_cocycle(const Matrix& ga, const Matrix& gb,
                                                               const std::vector<Eigen::Index>& perm,
                                                               double eps) {
  const auto n = static_cast<std::size_t>(ga.rows());
  std::vector<Complex> beta(n, Complex(0.0, 0.0));
  std::vector<bool> seen(n, false);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    beta[root] = 1.0;
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (seen[j]) continue;
        const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
        const Complex zb = gb(perm[i], perm[j]);
        if (std::abs(zb) < tol::kState) continue;
        const Complex ratio = ga(ii, jj) / zb;
        beta[j] = beta[i] * ratio / std::abs(ratio);
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex predicted = std::conj(beta[i]) * beta[j] * gb(perm[i], perm[j]);
      if (std::abs(predicted - ga(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > eps) {
        return std::nullopt;
      }
    }
  }
  return beta;
}

}  // namespace detail

/// Decides equivalence of two N-texts in the same language (N <= 10).
/// Permutations are enumerated with pruning on |z_ij|; phases come from the
/// overlap cocycle; the unitary from the Gram-matched correspondence.
inline std::optional<EquivalenceWitness> equivalent(const QuantumText& a, const QuantumText& b,
                                                    double eps = 1e-9) {
  if (a.size() != b.size() || a.dimension() != b.dimension()) {
    throw Error(ErrorKind::SizeMismatch, "equivalence needs texts with equal N and d");
  }
  const Eigen::Index n = a.size();
  const Matrix ga = gram(a);
  const Matrix gb = gram(b);

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::optional<EquivalenceWitness> found;

  // Depth-first assignment of perm[pos], pruned by |z| agreement.
  auto extend = [&](auto&& self, Eigen::Index pos) -> void {
    if (found) return;
    if (pos == n) {
      auto beta = detail::solve_phase_cocycle(ga, gb, perm, eps);
      if (!beta) return;
      Matrix in(a.dimension(), n), out(a.dimension(), n);
      for (Eigen::Index i = 0; i < n; ++i) {
        in.col(i) = (*beta)[static_cast<std::size_t>(i)] * b.states().col(perm[static_cast<std::size_t>(i)]);
        out.col(i) = a.states().col(i);
      }
      EquivalenceWitness w;
      w.permutation = perm;
      w.phases = *beta;
      w.unitary = unitary_from_correspondence(in, out, a.dimension(), 10 * eps);
      if (witness_error(a, b, w) < 10 * eps) found = std::move(w);
      return;
    }
    for (Eigen::Index cand = 0; cand < n; ++cand) {
      if (used[static_cast<std::size_t>(cand)]) continue;
      bool ok = true;
      for (Eigen::Index prev = 0; prev < pos && ok; ++prev) {
        ok = std::abs(std::abs(ga(prev, pos)) - std::abs(gb(perm[static_cast<std::size_t>(prev)], cand))) <= eps;
      }
      if (!ok) continue;
      used[static_cast<std::size_t>(cand)] = true;
      perm[static_cast<std::size_t>(pos)] = cand;
      self(self, pos + 1);
      used[static_cast<std::size_t>(cand)] = false;
      perm[static_cast<std::size_t>(pos)] = -1;
    }
  };
  extend(extend, 0);
  return found;
}

}  // namespace enscribe
