#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "enscribe/params.hpp"

namespace enscribe {

struct SearchOptions {
  std::uint64_t seed = 0;
  int starts = 64;
  int max_iterations = 4000;
  int restarts = 4;
  double accept_tol = tol::kAccept;
  double infeasible_floor = tol::kInfeasibleFloor;
  /// 0 picks the hardware concurrency. The result does not depend on it.
  unsigned threads = 0;
};

enum class SearchVerdict { Feasible, Infeasible, Inconclusive };

inline const char* to_string(SearchVerdict v) {
  switch (v) {
    case SearchVerdict::Feasible: return "feasible";
    case SearchVerdict::Infeasible: return "infeasible";
    case SearchVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct SearchResult {
  /// Set when the best residual is below the accept tolerance.
  std::optional<EnscriptionCertificate> certificate;
  EnscriptionCertificate best;
  double best_residual = std::numeric_limits<double>::infinity();
  int best_start = -1;
  SearchVerdict verdict = SearchVerdict::Inconclusive;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Objective over (tablet, Q). Output phases are eliminated: along a
// spanning forest of the nonzero-overlap graph each edge fixes
// conj(a_i) a_j to the phase of
//   (z_ij + Q c_i conj(c_j)) / (sqrt(B_i B_j) z_ij^2),
// and every pair is then scored with the full violation. Pairs off the
// forest measure cocycle inconsistency; pairs with z_ij = 0 measure the
// orthogonality-pattern violation Q c_i conj(c_j).
class EnscriptionObjective {
 public:
  EnscriptionObjective(const QuantumText& text, std::optional<double> fixed_q)
      : states_(text.states()), gram_(gram(text)), fixed_q_(fixed_q) {
    const Eigen::Index n = text.size();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (Eigen::Index root = 0; root < n; ++root) {
      if (seen[static_cast<std::size_t>(root)]) continue;
      seen[static_cast<std::size_t>(root)] = true;
      roots_.push_back(root);
      std::vector<Eigen::Index> queue{root};
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const Eigen::Index i = queue[head];
        for (Eigen::Index j = 0; j < n; ++j) {
          if (seen[static_cast<std::size_t>(j)] || std::abs(gram_(i, j)) < tol::kState) continue;
          seen[static_cast<std::size_t>(j)] = true;
          edges_.push_back({i, j});
          queue.push_back(j);
        }
      }
    }
  }

  std::size_t parameter_count() const {
    return static_cast<std::size_t>(2 * states_.rows()) + (fixed_q_ ? 0 : 1);
  }

  Vector tablet_of(const double* x) const {
    const Eigen::Index d = states_.rows();
    Vector t(d);
    for (Eigen::Index k = 0; k < d; ++k) t(k) = Complex(x[2 * k], x[2 * k + 1]);
    const double n = t.norm();
    if (n < 1e-300) {
      t.setZero();
      t(0) = 1.0;
      return t;
    }
    return t / n;
  }

  double q_of(const double* x) const {
    return fixed_q_ ? *fixed_q_ : std::sin(x[2 * states_.rows()]);
  }

  std::vector<Complex> phases_for(const Vector& tablet, double big_q) const {
    const Vector c = states_.adjoint() * tablet;
    const RealVector b = b_factors(c, big_q);
    std::vector<Complex> alpha(static_cast<std::size_t>(states_.cols()), Complex(1.0, 0.0));
    for (const auto& [i, j] : edges_) {
      const Complex z = gram_(i, j);
      const Complex forced =
          (z + big_q * c(i) * std::conj(c(j))) / (std::sqrt(std::max(0.0, b(i) * b(j))) * z * z);
      const double m = std::abs(forced);
      const Complex unit = m > 0.0 && std::isfinite(m) ? forced / m : Complex(1.0, 0.0);
      alpha[static_cast<std::size_t>(j)] = alpha[static_cast<std::size_t>(i)] * unit;
    }
    return alpha;
  }

  double value(const double* x) const {
    const Vector t = tablet_of(x);
    const double big_q = q_of(x);
    const Matrix v =
        enscription_violations(gram_, states_.adjoint() * t, big_q, phases_for(t, big_q));
    return v.cwiseAbs2().sum();
  }

  EnscriptionParams params_of(const double* x) const {
    const Vector t = tablet_of(x);
    const double big_q = std::clamp(q_of(x), -1.0, 1.0);
    return EnscriptionParams::from_Q(big_q, t, phases_for(t, big_q));
  }

 private:
  Matrix states_;
  Matrix gram_;
  std::optional<double> fixed_q_;
  std::vector<Eigen::Index> roots_;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges_;
};

inline double gsl_objective(const gsl_vector* v, void* ctx) {
  return static_cast<const EnscriptionObjective*>(ctx)->value(v->data);
}

// One Nelder-Mead descent with restarts from the incumbent.
inline std::vector<double> nelder_mead(const EnscriptionObjective& obj, std::vector<double> x0,
                                       const SearchOptions& opt) {
  const std::size_t n = x0.size();
  gsl_multimin_function fn{&gsl_objective, n, const_cast<EnscriptionObjective*>(&obj)};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* step = gsl_vector_alloc(n);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);

  double step_size = 0.4;
  double last = std::numeric_limits<double>::infinity();
  for (int round = 0; round <= opt.restarts; ++round) {
    for (std::size_t k = 0; k < n; ++k) gsl_vector_set(x, k, x0[k]);
    gsl_vector_set_all(step, step_size);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    for (int it = 0; it < opt.max_iterations; ++it) {
      if (gsl_multimin_fminimizer_iterate(s) != 0) break;
      if (s->fval < 1e-30) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-13) != GSL_CONTINUE) break;
    }
    for (std::size_t k = 0; k < n; ++k) x0[k] = gsl_vector_get(s->x, k);
    const double f = s->fval;
    if (f < 1e-30 || !(f < 0.999 * last)) break;
    last = f;
    step_size = std::max(step_size * 0.25, 1e-4);
  }
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return x0;
}

inline std::vector<double> start_point(const EnscriptionObjective& obj, Eigen::Index dim,
                                       std::uint64_t seed, int start, bool free_q) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(start) + 1)));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x(obj.parameter_count());
  for (Eigen::Index k = 0; k < 2 * dim; ++k) x[static_cast<std::size_t>(k)] = gauss(rng);
  if (free_q) {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    x.back() = u(rng);
  }
  return x;
}

}  // namespace detail

/// Multi-start search for parameters that enscribe `text`, at a fixed Q or
/// (when `fixed_q` is empty) over Q as well. Deterministic given the seed:
/// the winner is the lexicographic minimum of (residual, start index).
inline SearchResult feasibility_search(const QuantumText& text, std::optional<double> fixed_q,
                                       const SearchOptions& opt = {}) {
  if (fixed_q && !(*fixed_q >= -1.0 && *fixed_q <= 1.0)) {
    throw Error(ErrorKind::QOutOfRange, "Q = " + std::to_string(*fixed_q) + " outside [-1, 1]");
  }
  const detail::EnscriptionObjective obj(text, fixed_q);
  const int starts = std::max(1, opt.starts);

  std::vector<double> residuals(static_cast<std::size_t>(starts),
                                std::numeric_limits<double>::infinity());
  std::vector<std::vector<double>> points(static_cast<std::size_t>(starts));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < starts; k = next++) {
      auto x = detail::start_point(obj, text.dimension(), opt.seed, k, !fixed_q);
      x = detail::nelder_mead(obj, std::move(x), opt);
      residuals[static_cast<std::size_t>(k)] = enscription_residual(text, obj.params_of(x.data()));
      points[static_cast<std::size_t>(k)] = std::move(x);
    }
  };
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(starts));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SearchResult out;
  for (int k = 0; k < starts; ++k) {
    if (residuals[static_cast<std::size_t>(k)] < out.best_residual) {
      out.best_residual = residuals[static_cast<std::size_t>(k)];
      out.best_start = k;
    }
  }
  out.best = certify(text, obj.params_of(points[static_cast<std::size_t>(out.best_start)].data()));
  if (out.best_residual < opt.accept_tol) {
    out.verdict = SearchVerdict::Feasible;
    out.certificate = out.best;
  } else if (out.best_residual > opt.infeasible_floor) {
    out.verdict = SearchVerdict::Infeasible;
  }
  return out;
}

/// Runs the fixed-Q search at every grid value and keeps the best
/// (residual, grid position) result.
inline SearchResult feasibility_search_grid(const QuantumText& text, const std::vector<double>& q_grid,
                                            const SearchOptions& opt = {}) {
  SearchResult best;
  for (double q : q_grid) {
    SearchResult r = feasibility_search(text, q, opt);
    if (r.best_residual < best.best_residual) best = std::move(r);
  }
  return best;
}

}  // namespace enscribe
