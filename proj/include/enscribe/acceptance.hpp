#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "enscribe/cloning.hpp"
#include "enscribe/random.hpp"
#include "enscribe/screen.hpp"
#include "enscribe/solvers.hpp"

// Reproducibility checks for the published results, shared by the
// acceptance test binary and `enscribe verify-theorems`.
namespace enscribe::acceptance {

using Json = nlohmann::json;

struct CriterionResult {
  int id = 0;
  std::string key;
  std::string title;
  bool passed = false;
  Json measured = Json::object();
};

struct Options {
  std::uint64_t seed = 0;
  int starts = 64;
};

namespace detail {

inline random::Engine engine(const Options& opt, std::uint64_t salt) {
  return random::Engine(enscribe::detail::splitmix64(opt.seed * 1000003ULL + salt));
}

inline SearchOptions search_options(const Options& opt, std::uint64_t salt) {
  SearchOptions s;
  s.seed = enscribe::detail::splitmix64(opt.seed + salt);
  s.starts = opt.starts;
  return s;
}

inline QuantumText real_pair(double z) {
  const double ap = std::sqrt((1.0 + z) / 2.0), am = std::sqrt((1.0 - z) / 2.0);
  Matrix s(2, 2);
  s << ap, ap, am, -am;
  return make_text(s);
}

/// Embeds a text isometrically into a larger language (zero padding).
inline QuantumText embed(const QuantumText& text, Eigen::Index dim) {
  Matrix s = Matrix::Zero(dim, text.size());
  s.topRows(text.dimension()) = text.states();
  return make_text(s);
}

inline Vector padded(const Vector& v, Eigen::Index dim) {
  Vector out = Vector::Zero(dim);
  out.head(v.size()) = v;
  return out;
}

/// Unit vector orthogonal to the given columns.
inline Vector random_orthogonal_to(const Matrix& cols, Eigen::Index dim, random::Engine& rng) {
  Vector v = random::gaussian_vector(dim, rng);
  for (int pass = 0; pass < 2; ++pass) {
    if (cols.cols()) {
      Eigen::HouseholderQR<Matrix> qr(cols);
      const Matrix q = Matrix(qr.householderQ()).leftCols(cols.cols());
      v -= q * (q.adjoint() * v);
    }
  }
  return v.normalized();
}

inline int sign_of(double x, double eps = 0.0) { return x > eps ? 1 : (x < -eps ? -1 : 0); }

}  // namespace detail

inline CriterionResult z0_reproduction(const Options&) {
  CriterionResult r{1, "z0", "z0 threshold of the uniform sextic"};
  const double z3 = z0_threshold(3);
  bool ok = std::abs(z3 - (-0.203785)) < 1e-5;
  r.measured["z0_3"] = z3;
  Json large = Json::array();
  for (int n : {50, 100, 200}) {
    const double z = z0_threshold(n);
    const double approx = -1.0 / (2.0 * n);
    const double rel = std::abs(z - approx) / std::abs(approx);
    ok = ok && rel < 0.2;
    large.push_back({{"N", n}, {"z0", z}, {"relative_to_minus_1_over_2N", rel}});
  }
  r.measured["large_N"] = large;
  r.passed = ok;
  return r;
}

inline CriterionResult qubit_example_check(const Options&) {
  CriterionResult r{2, "qubit-example", "explicit qubit procedure"};
  const QubitExample ex = qubit_example();
  const Matrix& u = ex.procedure;
  const double defect = unitarity_defect(u);
  double action = 0.0;
  for (Eigen::Index i = 0; i < 2; ++i) {
    const Vector psi = ex.text.state(i);
    const Vector om = omega(ex.text, i, Complex(1.0, 0.0), ex.certificate.params.tablet);
    action = std::max(action, (u * om - kron(psi, psi)).norm());
  }
  const Matrix p = swap_operator(2);
  const double commutator = spectral_norm(u * p - p * u);
  const double overlap = ex.text.state(0).dot(ex.text.state(1)).real();
  r.measured = {{"unitarity_defect", defect},
                {"action_residual", action},
                {"swap_commutator", commutator},
                {"overlap", overlap},
                {"certificate_residual", ex.certificate.residual}};
  r.passed = defect < 1e-12 && action < 1e-10 && commutator < 1e-12 &&
             std::abs(overlap - (std::sqrt(3.0) - 2.0)) < 1e-12;
  return r;
}

inline CriterionResult no_cloning_boundary(const Options& opt) {
  CriterionResult r{3, "no-cloning", "Q = 0 feasibility iff classical"};
  auto rng = detail::engine(opt, 3);
  const std::vector<double> qs = {0.0, 0.9, -0.9, 0.5, -0.5, 0.25, -0.25, 1.0, -0.75, 0.1};
  double worst_classical = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Eigen::Index d = 2 + k % 3;
    const Eigen::Index n = 2 + k % static_cast<int>(d - 1);
    const QuantumText text = random::random_classical_text(n, d, rng);
    for (double q : qs) {
      Vector tablet;
      if (q == 0.0) {
        tablet = random::unit_vector(d, rng);
      } else {
        // Tablets of a classical text at Q != 0 overlap at most one state.
        std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
        const Eigen::Index keep = pick(rng);
        Matrix others(d, n - 1);
        for (Eigen::Index i = 0, c = 0; i < n; ++i) {
          if (i != keep) others.col(c++) = text.state(i);
        }
        tablet = detail::random_orthogonal_to(others, d, rng);
      }
      const double res =
          enscription_residual(text, EnscriptionParams::from_Q(q, tablet, trivial_phases(n)));
      worst_classical = std::max(worst_classical, res);
    }
  }
  double floor = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20; ++k) {
    const Eigen::Index d = 2 + k % 3;
    const Eigen::Index n = 2 + k % 2;
    const QuantumText text = random::random_text(n, d, rng);
    const SearchResult s = feasibility_search(text, 0.0, detail::search_options(opt, 300 + k));
    floor = std::min(floor, s.best_residual);
  }
  r.measured = {{"classical_worst_residual", worst_classical}, {"nonclassical_min_floor", floor}};
  r.passed = worst_classical < 1e-12 && floor > tol::kInfeasibleFloor;
  return r;
}

inline CriterionResult two_text_range(const Options& opt) {
  CriterionResult r{4, "two-text-range", "Q-range of 2-texts"};
  const double guard = 1e-2;
  bool ok = true;
  Json rows = Json::array();
  int salt = 400;
  for (double m : {0.1, 0.3, 0.5, 0.7}) {
    const QuantumText text = detail::real_pair(m);
    const double pos = 2.0 * m / (1.0 + m * m);
    const double neg = -2.0 * m / ((1.0 + m) * (1.0 + m));
    auto samples = [&](double lo, double hi) {
      std::vector<double> out;
      for (int k = 0; k < 5; ++k) out.push_back(lo + guard + k * ((hi - guard) - (lo + guard)) / 4.0);
      return out;
    };
    double inside_worst = 0.0, gap_floor = std::numeric_limits<double>::infinity();
    for (const auto& [lo, hi] : {std::pair{pos, 1.0}, std::pair{-1.0, neg}}) {
      for (double q : samples(lo, hi)) {
        inside_worst = std::max(inside_worst,
                                feasibility_search(text, q, detail::search_options(opt, salt++)).best_residual);
      }
    }
    for (double q : samples(neg, pos)) {
      gap_floor = std::min(gap_floor,
                           feasibility_search(text, q, detail::search_options(opt, salt++)).best_residual);
    }
    const bool row_ok = inside_worst < tol::kAccept && gap_floor > tol::kInfeasibleFloor;
    ok = ok && row_ok;
    rows.push_back({{"abs_z", m},
                    {"lower_positive", pos},
                    {"upper_negative", neg},
                    {"inside_worst_residual", inside_worst},
                    {"gap_min_floor", gap_floor}});
  }
  r.measured["rows"] = rows;
  r.passed = ok;
  return r;
}

inline CriterionResult uniform_range(const Options& opt) {
  CriterionResult r{5, "uniform-range", "real uniform Q-range and z0 consistency"};
  bool ok = true;
  int checked = 0;
  double worst_residual = 0.0;
  Json failures = Json::array();
  for (int n : {3, 4}) {
    const double z0 = z0_threshold(n);
    for (int k = -20; k <= 19; ++k) {
      const double z = 0.05 * k;
      if (!(z > -1.0 / (n - 1.0) + 1e-12)) continue;
      ++checked;
      const QRangeResult range = q_range_real_uniform(n, z);
      const bool expected = z >= 0.0 || z >= z0 - 1e-6;
      bool row_ok = range.empty() != expected;
      if (!range.empty()) {
        SearchOptions so = detail::search_options(opt, 500 + static_cast<std::uint64_t>(k + 40) * 7 + n);
        const QuantumText text = make_real_uniform(n, z);
        const EnscriptionCertificate cert = solve_uniform_central(text, so);
        worst_residual = std::max(worst_residual, cert.residual);
        row_ok = row_ok && cert.residual < 1e-9;
        const int sq = detail::sign_of(cert.params.Q, 1e-15);
        row_ok = row_ok && sq == -detail::sign_of(z);
        if (z != 0.0) {
          const IllegibilityReport rep = illegibility_screen(text);
          row_ok = row_ok && rep.eigen_sign && *rep.eigen_sign == sq;
        }
        row_ok = row_ok && range.contains(cert.params.Q, 1e-12);
      }
      if (!row_ok) failures.push_back({{"N", n}, {"z", z}});
      ok = ok && row_ok;
    }
  }
  r.measured = {{"grid_points", checked}, {"worst_residual", worst_residual}, {"failures", failures}};
  r.passed = ok;
  return r;
}

inline CriterionResult eigen_sign_screen(const Options& opt) {
  CriterionResult r{6, "eigen-sign", "reciprocal-overlap sign screen"};
  auto rng = detail::engine(opt, 6);
  const std::vector<double> zs3 = {-0.15, -0.1, 0.2, 0.5, 0.7};
  const std::vector<double> zs4 = {-0.1, -0.05, 0.3, 0.6};
  int certified = 0, candidates = 0;
  bool ok = true;
  std::uniform_int_distribution<int> pick3(0, 4), pick4(0, 3);
  while (certified < 20 && candidates < 80) {
    ++candidates;
    QuantumText text = make_real_uniform(3, 0.5);
    if (candidates % 3 == 0) {
      // perturbed real uniform 3-text
      Matrix s = make_real_uniform(3, zs3[static_cast<std::size_t>(pick3(rng))]).states();
      for (Eigen::Index i = 0; i < 3; ++i) {
        s.col(i) += 0.08 * random::gaussian_vector(3, rng);
        s.col(i).normalize();
      }
      text = make_text(s);
    } else {
      const int n = candidates % 3 == 1 ? 3 : 4;
      const double z = n == 3 ? zs3[static_cast<std::size_t>(pick3(rng))] : zs4[static_cast<std::size_t>(pick4(rng))];
      text = apply_equivalence(make_real_uniform(n, z), random::random_equivalence(n, n, rng));
    }
    if (!classify(text).fully_quantum) continue;
    const SearchResult s =
        feasibility_search(text, std::nullopt, detail::search_options(opt, 600 + static_cast<std::uint64_t>(candidates)));
    if (!s.certificate) continue;
    ++certified;
    const Matrix g = gram(text);
    const Matrix m = g.unaryExpr([](Complex z) { return 1.0 / z; });
    const double det = std::abs(m.determinant());
    const IllegibilityReport rep = illegibility_screen(text);
    const bool row_ok = det > 1e-10 && rep.eigen_sign_ok && rep.eigen_sign &&
                        *rep.eigen_sign == detail::sign_of(s.certificate->params.Q, 1e-12);
    ok = ok && row_ok;
  }
  int overlap_flagged = 0;
  for (int k = 0; k < 10; ++k) {
    const IllegibilityReport rep = illegibility_screen(random::one_zero_overlap_text(rng));
    if (rep.reason == IllegibleReason::OverlapPattern) ++overlap_flagged;
  }
  r.measured = {{"certified_texts", certified},
                {"candidates", candidates},
                {"one_zero_overlap_declared_illegible", overlap_flagged}};
  r.passed = ok && certified == 20 && overlap_flagged == 10;
  return r;
}

inline CriterionResult q_minus_one(const Options& opt) {
  CriterionResult r{7, "q-minus-one", "thick texts are not enscribable at Q = -1"};
  auto rng = detail::engine(opt, 7);
  int cases = 0, dependent = 0;
  for (int k = 0; k < 10; ++k) {
    const Eigen::Index d = 2 + k % 3;
    const Eigen::Index n = d + (k % 2);
    const QuantumText text = random::random_text(n, d, rng);
    for (double theta : {0.3, 0.8, 1.3}) {
      for (double phi : {0.0, 2.0, 4.0}) {
        Vector t(d);
        for (Eigen::Index a = 0; a < d; ++a) {
          t(a) = std::polar(std::cos(theta * (a + 1)) + 1.5, phi * a);
        }
        t.normalize();
        const Vector c = tablet_overlaps(text, t);
        if (c.cwiseAbs().maxCoeff() > 1.0 - 1e-9) continue;
        ++cases;
        if (q_minus_one_dependence_check(text, t)) ++dependent;
      }
    }
  }
  r.measured = {{"cases", cases}, {"dependent", dependent}};
  r.passed = cases > 0 && dependent == cases;
  return r;
}

inline CriterionResult cloning_machine(const Options& opt) {
  CriterionResult r{8, "cloning-machine", "controlled-swap probabilistic cloning"};
  auto rng = detail::engine(opt, 8);
  double formula_gap = 0.0;
  std::uniform_real_distribution<double> uq(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const QuantumText text = random::random_text(2 + k % 2, 2 + k % 3, rng);
    double q = 0.0;
    while (std::abs(q) < 1e-3) q = uq(rng);
    const EnscriptionParams p =
        EnscriptionParams::from_q(Complex(q, 0.0), random::unit_vector(text.dimension(), rng), trivial_phases(text.size()));
    for (Eigen::Index i = 0; i < text.size(); ++i) {
      const Complex c = p.tablet.dot(text.state(i));
      const double general = omega_normalizer(p.q, c) / std::pow(1.0 + std::abs(q), 2);
      formula_gap = std::max(formula_gap, std::abs(general - success_probability_real_q(text, i, p)));
    }
  }

  // End-to-end runs over a mix of certificates.
  std::vector<std::pair<QuantumText, EnscriptionCertificate>> runs;
  {
    const QubitExample ex = qubit_example();
    runs.emplace_back(ex.text, ex.certificate);
  }
  for (double z : {-0.2, 0.3, 0.6}) {
    const QuantumText t = detail::real_pair(z);
    runs.emplace_back(t, solve_two_text(t));
  }
  for (double z : {-0.1, 0.4}) {
    const QuantumText t = make_real_uniform(3, z);
    runs.emplace_back(t, solve_uniform_central(t));
  }
  {
    const QuantumText t = apply_equivalence(make_real_uniform(4, 0.3), random::random_equivalence(4, 4, rng));
    const SearchResult s = feasibility_search(t, std::nullopt, detail::search_options(opt, 800));
    if (s.certificate) runs.emplace_back(t, *s.certificate);
  }
  double worst_fidelity_gap = 0.0, worst_decomposition = 0.0;
  int parity_runs = 0, parity_ok = 0;
  for (const auto& [text, cert] : runs) {
    if (std::abs(cert.params.q) == 0.0) continue;
    const Matrix u = build_procedure(text, cert);
    for (Eigen::Index i = 0; i < text.size(); ++i) {
      const CloneOutcome o = run_clone(text, cert, i, u);
      worst_fidelity_gap = std::max(worst_fidelity_gap, std::abs(o.fidelity - 1.0));
      worst_decomposition = std::max(worst_decomposition, o.decomposition_error);
      if (cert.params.q.imag() == 0.0) {
        const FailureSymmetryReport rep = failure_state_symmetry_check(text, cert, i);
        if (rep.parity) {
          ++parity_runs;
          if (rep.ok && *rep.parity == -detail::sign_of(cert.params.Q)) ++parity_ok;
        }
      }
    }
  }
  Json saturation = Json::array();
  bool sat_ok = true;
  for (double z : {-0.1, -0.3, -0.5, -0.7}) {
    const SaturationReport s = duan_guo_saturation(z);
    sat_ok = sat_ok && s.ok;
    saturation.push_back({{"z", z}, {"p1", s.p1}, {"p2", s.p2}, {"bound", s.bound}});
  }
  r.measured = {{"probability_formula_gap", formula_gap},
                {"end_to_end_runs", runs.size()},
                {"worst_fidelity_gap", worst_fidelity_gap},
                {"worst_decomposition_error", worst_decomposition},
                {"parity_runs", parity_runs},
                {"parity_matches", parity_ok},
                {"saturation", saturation}};
  r.passed = formula_gap < 1e-12 && worst_fidelity_gap < 1e-8 && worst_decomposition < 1e-10 &&
             sat_ok && parity_runs > 0 && parity_ok == parity_runs;
  return r;
}

inline CriterionResult structural(const Options& opt) {
  CriterionResult r{9, "structural", "equivalence covariance, overlap cross-check, lifts"};
  auto rng = detail::engine(opt, 9);

  // Equivalence covariance of residuals and procedures.
  double residual_dev = 0.0, procedure_dev = 0.0;
  for (int k = 0; k < 20; ++k) {
    QuantumText base = detail::real_pair(0.5);
    EnscriptionCertificate cert;
    switch (k % 3) {
      case 0:
        base = detail::real_pair(-0.4 + 0.05 * k);
        cert = solve_two_text(base);
        break;
      case 1:
        base = make_real_uniform(3, 0.1 * (k % 7) - 0.1);
        cert = solve_uniform_central(base);
        break;
      default: {
        base = random::random_classical_text(2, 3, rng);
        cert = certify(base, EnscriptionParams::from_Q(0.6, base.state(0), trivial_phases(2)));
      }
    }
    const EquivalenceWitness w = random::random_equivalence(base.size(), base.dimension(), rng);
    const QuantumText moved = apply_equivalence(base, w);
    const EnscriptionCertificate moved_cert = transform_certificate(moved, cert, w);
    residual_dev = std::max(residual_dev, std::abs(moved_cert.residual - cert.residual));
    const Matrix u = build_procedure(base, cert);
    const Matrix vv = kron(w.unitary, w.unitary);
    procedure_dev = std::max(procedure_dev, verify_procedure(vv * u * vv.adjoint(), moved, moved_cert));
  }

  // Condition residuals against explicit Omega inner products.
  double cross = 0.0;
  for (int k = 0; k < 100; ++k) {
    const QuantumText text = random::random_text(2 + k % 3, 2 + k % 3, rng);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const Complex q(u(rng), u(rng));
    std::vector<Complex> phases(static_cast<std::size_t>(text.size()));
    for (auto& a : phases) a = random::unit_phase(rng);
    const EnscriptionParams p = EnscriptionParams::from_q(q, random::unit_vector(text.dimension(), rng), phases);
    const Matrix v5 = enscription_violations(gram(text), tablet_overlaps(text, p.tablet), p.Q, phases);
    const Matrix v4 = inner_product_violations(text, p);
    cross = std::max(cross, (v5 - v4).cwiseAbs().maxCoeff());
  }

  // Thin extensions: 2-text in C^3, uniform 3-text in C^4.
  double thin_worst = 0.0;
  {
    const QuantumText pair = detail::real_pair(0.5);
    const EnscriptionCertificate c2 = solve_two_text(pair);
    const QuantumText thin = detail::embed(pair, 3);
    EnscriptionCertificate lifted = c2;
    lifted.params.tablet = detail::padded(c2.params.tablet, 3);
    Vector phi = Vector::Zero(3);
    phi(2) = 1.0;
    for (int k = 0; k <= 10; ++k) {
      const double t = std::abs(c2.params.Q) + k * (1.0 - std::abs(c2.params.Q)) / 10.0;
      thin_worst = std::max(thin_worst, thin_extension_family(thin, lifted, t, phi).residual);
    }
    const QuantumText uni = make_real_uniform(3, 0.3);
    const EnscriptionCertificate cu = solve_uniform_central(uni);
    const QuantumText thin3 = detail::embed(uni, 4);
    EnscriptionCertificate lifted3 = cu;
    lifted3.params.tablet = detail::padded(cu.params.tablet, 4);
    Vector phi4 = Vector::Zero(4);
    phi4(3) = Complex(0.0, 1.0);
    for (int k = 0; k <= 10; ++k) {
      const double t = std::abs(cu.params.Q) + k * (1.0 - std::abs(cu.params.Q)) / 10.0;
      thin_worst = std::max(thin_worst, thin_extension_family(thin3, lifted3, t, phi4).residual);
    }
  }

  // Direct sums: classical pair (+) 2-text, classical state (+) uniform 3-text.
  double sum_worst = 0.0;
  {
    Matrix s = Matrix::Zero(4, 4);
    s(0, 0) = 1.0;
    s(1, 1) = 1.0;
    const QuantumText pair = detail::real_pair(0.5);
    s.block(2, 2, 2, 2) = pair.states();
    const QuantumText combined = make_text(s);
    const QuantumText classical = make_text(s.leftCols(2));
    const QuantumText t2 = combined.subtext({2, 3});
    const EnscriptionCertificate local = solve_two_text(pair);
    Vector tablet = Vector::Zero(4);
    tablet.tail(2) = local.params.tablet;
    const EnscriptionCertificate c2 =
        certify(t2, EnscriptionParams::from_Q(local.params.Q, tablet, local.params.output_phases));
    sum_worst = std::max(sum_worst, direct_sum_enscribe(classical, c2, combined).residual);

    // Tablet with a component outside the second dialect.
    // Q / 0.8 stays inside [-1, 1] for this overlap.
    Vector skew_tablet = std::sqrt(0.8) * tablet;
    skew_tablet(0) = std::sqrt(0.2);
    const EnscriptionCertificate skew = certify(
        t2, EnscriptionParams::from_Q(c2.params.Q / 0.8, skew_tablet, c2.params.output_phases));
    sum_worst = std::max(sum_worst, direct_sum_enscribe(classical, skew, combined).residual);

    Matrix u = Matrix::Zero(4, 4);
    u(0, 0) = 1.0;
    u.block(1, 1, 3, 3) = make_real_uniform(3, 0.3).states();
    const QuantumText combined2 = make_text(u);
    const QuantumText uni = combined2.subtext({1, 2, 3});
    const EnscriptionCertificate cu = solve_uniform_central(uni);
    sum_worst = std::max(sum_worst, direct_sum_enscribe(make_text(u.leftCols(1)), cu, combined2).residual);
  }

  r.measured = {{"equivalence_residual_deviation", residual_dev},
                {"equivalence_procedure_error", procedure_dev},
                {"eq5_eq4_cross_check", cross},
                {"thin_extension_worst_residual", thin_worst},
                {"direct_sum_worst_residual", sum_worst}};
  r.passed = residual_dev < 1e-8 && procedure_dev < 1e-8 && cross < 1e-10 && thin_worst < 1e-9 &&
             sum_worst < 1e-9;
  return r;
}

struct Criterion {
  const char* key;
  std::function<CriterionResult(const Options&)> run;
};

inline const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"z0", z0_reproduction},
      {"qubit-example", qubit_example_check},
      {"no-cloning", no_cloning_boundary},
      {"two-text-range", two_text_range},
      {"uniform-range", uniform_range},
      {"eigen-sign", eigen_sign_screen},
      {"q-minus-one", q_minus_one},
      {"cloning-machine", cloning_machine},
      {"structural", structural},
  };
  return all;
}

/// Runs every criterion, or only the one whose key equals `only`.
inline std::vector<CriterionResult> run_all(const Options& opt, const std::string& only = "") {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    if (!only.empty() && only != c.key) continue;
    out.push_back(c.run(opt));
  }
  if (!only.empty() && out.empty()) {
    throw Error(ErrorKind::ParseError, "unknown criterion '" + only + "'");
  }
  return out;
}

inline Json to_json(const CriterionResult& r) {
  return {{"id", r.id}, {"key", r.key}, {"title", r.title}, {"passed", r.passed}, {"measured", r.measured}};
}

}  // namespace enscribe::acceptance
