#pragma once

#include <cmath>
#include <optional>
#include <random>

#include "enscribe/procedure.hpp"

namespace enscribe {

/// Ancilla states for the controlled-swap machine with parameter q:
///   xi  = (|0> + (q / sqrt|q|) |1>) / sqrt(1 + |q|)
///   eta = (|0> + sqrt|q| |1>) / sqrt(1 + |q|)
///   chi = (sqrt|q| |0> - |1>) / sqrt(1 + |q|)
/// For |q| = 1, xi reduces to (|0> + (q/|q|) |1>) / sqrt 2.
struct AncillaStates {
  Vector xi;
  Vector eta;
  Vector chi;
};

inline AncillaStates ancilla_states(Complex q) {
  const double m = std::abs(q);
  if (m == 0.0) throw Error(ErrorKind::QZero, "the machine needs q != 0");
  const double norm = std::sqrt(1.0 + m);
  const double root = std::sqrt(m);
  AncillaStates a{Vector(2), Vector(2), Vector(2)};
  a.xi << 1.0 / norm, (q / root) / norm;
  a.eta << 1.0 / norm, root / norm;
  a.chi << root / norm, -1.0 / norm;
  return a;
}

/// S(|0> psi phi) = |0> psi phi, S(|1> psi phi) = |1> phi psi, ordering
/// ancilla (x) copy-1 (x) copy-2.
inline Matrix controlled_swap(Eigen::Index d) {
  const Eigen::Index big = d * d;
  Matrix s = Matrix::Zero(2 * big, 2 * big);
  s.topLeftCorner(big, big) = Matrix::Identity(big, big);
  s.bottomRightCorner(big, big) = swap_operator(d);
  return s;
}

/// p_i = A_i / (1 + |q|)^2. For real q this equals
/// (1 + Q |<psi_i|psi_0>|^2) / (1 + |Q|), which is checked.
inline double success_probability(const QuantumText& text, Eigen::Index i,
                                  const EnscriptionParams& p) {
  const double m = std::abs(p.q);
  if (m == 0.0) throw Error(ErrorKind::QZero, "the machine needs q != 0");
  const Complex c = p.tablet.dot(text.state(i));
  const double prob = omega_normalizer(p.q, c) / ((1.0 + m) * (1.0 + m));
  if (p.q.imag() == 0.0) {
    const double big_q = q_to_Q(p.q);
    const double real_form = (1.0 + big_q * std::norm(c)) / (1.0 + std::abs(big_q));
    if (std::abs(real_form - prob) > 1e-12) {
      throw std::logic_error("success probability formulas disagree");
    }
  }
  return prob;
}

/// (1 + Q |<psi_i|psi_0>|^2) / (1 + |Q|).
inline double success_probability_real_q(const QuantumText& text, Eigen::Index i,
                                         const EnscriptionParams& p) {
  const Complex c = p.tablet.dot(text.state(i));
  const double big_q = q_to_Q(p.q);
  return (1.0 + big_q * std::norm(c)) / (1.0 + std::abs(big_q));
}

struct CloneOutcome {
  Eigen::Index index = 0;
  double success_probability = 0.0;
  /// Ancilla (x) H (x) H state on the success branch, normalized.
  Vector success_state;
  /// Normalized failure branch; empty when the failure probability vanishes.
  std::optional<Vector> failure_state;
  /// I (x) U applied to the success branch, ancilla discarded.
  Vector final_clone;
  double fidelity = 0.0;
  /// |final_clone - alpha_i psi_i (x) psi_i|.
  double clone_error = 0.0;
  /// Distance of S(xi psi_i psi_0) from
  /// sqrt(p) eta Omega_i(q) + sqrt(1-p) chi Omega_i(-q/|q|).
  double decomposition_error = 0.0;
  /// Set only by sample_measurement.
  std::optional<int> lambda;
};

/// Exact state-vector run of the machine on input i. `procedure` defaults
/// to build_procedure(text, cert).
inline CloneOutcome run_clone(const QuantumText& text, const EnscriptionCertificate& cert,
                              Eigen::Index i, std::optional<Matrix> procedure = std::nullopt) {
  const EnscriptionParams& p = cert.params;
  if (std::abs(p.q) == 0.0) throw Error(ErrorKind::QZero, "the machine needs q != 0");
  if (enscription_residual(text, p) >= tol::kAccept) {
    throw Error(ErrorKind::InvalidCertificate, "certificate residual above the accept tolerance");
  }
  const Matrix u = procedure ? *procedure : build_procedure(text, cert);
  const Eigen::Index d = text.dimension();
  const Eigen::Index big = d * d;
  const AncillaStates anc = ancilla_states(p.q);
  const Vector psi = text.state(i);

  const Vector after = controlled_swap(d) * kron(anc.xi, kron(psi, p.tablet));
  const Vector on_eta = anc.eta(0) * after.head(big) + anc.eta(1) * after.tail(big);  // conj real
  const Vector on_chi = anc.chi(0) * after.head(big) + anc.chi(1) * after.tail(big);

  CloneOutcome out;
  out.index = i;
  out.success_probability = on_eta.squaredNorm();
  const double fail = on_chi.squaredNorm();
  const Vector success_branch = on_eta / std::sqrt(out.success_probability);
  out.success_state = kron(anc.eta, success_branch);

  Vector expected = std::sqrt(out.success_probability) * kron(anc.eta, omega(text, i, p.q, p.tablet));
  const Complex fail_q = -p.q / std::abs(p.q);
  if (fail > 1e-24) {
    out.failure_state = on_chi / std::sqrt(fail);
    expected += std::sqrt(std::max(0.0, 1.0 - out.success_probability)) *
                kron(anc.chi, omega(text, i, fail_q, p.tablet));
  }
  out.decomposition_error = (after - expected).norm();

  out.final_clone = u * success_branch;
  const Vector target = kron(psi, psi);
  out.fidelity = std::abs(target.dot(out.final_clone));
  out.clone_error = (out.final_clone - p.output_phases[static_cast<std::size_t>(i)] * target).norm();
  return out;
}

/// Samples the projective measurement (eta eta^dagger) (x) I (x) I:
/// lambda = 1 with probability p_i. Demonstration only.
template <class Rng>
CloneOutcome sample_measurement(CloneOutcome outcome, Rng& rng) {
  std::bernoulli_distribution success(outcome.success_probability);
  outcome.lambda = success(rng) ? 1 : 0;
  return outcome;
}

/// Swap parity of the failure state Omega_i(-q/|q|, psi_0) for real q:
/// +1 (symmetric) expected when Q < 0, -1 (antisymmetric) when Q > 0.
struct FailureSymmetryReport {
  /// Empty when the failure branch has zero weight (A_i = 0 at -q/|q|).
  std::optional<int> parity;
  int expected_parity = 0;
  double error = 0.0;
  bool ok = false;
};

inline FailureSymmetryReport failure_state_symmetry_check(const QuantumText& text,
                                                          const EnscriptionCertificate& cert,
                                                          Eigen::Index i) {
  const Complex q = cert.params.q;
  if (q.imag() != 0.0) throw Error(ErrorKind::ComplexQ, "parity check needs real q");
  if (q.real() == 0.0) throw Error(ErrorKind::QZero, "parity check needs q != 0");
  FailureSymmetryReport rep;
  rep.expected_parity = q.real() < 0.0 ? 1 : -1;
  const Complex fail_q(q.real() < 0.0 ? 1.0 : -1.0, 0.0);
  const Complex c = cert.params.tablet.dot(text.state(i));
  if (omega_normalizer(fail_q, c) <= tol::kNormalizer) {
    rep.ok = true;
    return rep;
  }
  const Vector f = omega(text, i, fail_q, cert.params.tablet);
  const Vector pf = swap_operator(text.dimension()) * f;
  const double sym = (pf - f).norm();
  const double anti = (pf + f).norm();
  rep.parity = sym <= anti ? 1 : -1;
  rep.error = std::min(sym, anti);
  rep.ok = rep.error < 1e-10 && *rep.parity == rep.expected_parity;
  return rep;
}

/// The central 2-text machine at -1 < z < 0: Q = -2z/(1+z^2), tablet |0>,
/// phases (1, -1). Both success probabilities should equal 1/(1+|z|).
struct SaturationReport {
  double z = 0.0;
  double bound = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double residual = 0.0;
  double procedure_error = 0.0;
  bool ok = false;
};

inline SaturationReport duan_guo_saturation(double z) {
  if (!(z > -1.0 && z < 0.0)) throw Error(ErrorKind::ZOutOfRange, "saturation needs -1 < z < 0");
  const double ap = std::sqrt((1.0 + z) / 2.0), am = std::sqrt((1.0 - z) / 2.0);
  Matrix s(2, 2);
  s << ap, ap, am, -am;
  const QuantumText text = make_text(s);
  const Vector tablet = (text.state(0) + text.state(1)) / std::sqrt(2.0 * (1.0 + z));
  const double big_q = -2.0 * z / (1.0 + z * z);
  const EnscriptionCertificate cert =
      certify(text, EnscriptionParams::from_Q(big_q, tablet, {Complex(1.0, 0.0), Complex(-1.0, 0.0)}));

  SaturationReport rep;
  rep.z = z;
  rep.bound = 1.0 / (1.0 + std::abs(z));
  rep.residual = cert.residual;
  const Matrix u = build_procedure(text, cert);
  rep.procedure_error = verify_procedure(u, text, cert);
  rep.p1 = run_clone(text, cert, 0, u).success_probability;
  rep.p2 = run_clone(text, cert, 1, u).success_probability;
  rep.ok = std::abs(rep.p1 - rep.bound) < 1e-10 && std::abs(rep.p2 - rep.bound) < 1e-10;
  return rep;
}

}  // namespace enscribe
