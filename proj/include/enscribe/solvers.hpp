#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "enscribe/equivalence.hpp"
#include "enscribe/params.hpp"
#include "enscribe/ranges.hpp"
#include "enscribe/search.hpp"

namespace enscribe {

/// Central enscription of a 2-text. A real overlap is used as is when the
/// resulting Q = -2z/(1+z)^2 stays in [-1, 1]. Otherwise the second state is
/// rephased by beta so that the overlap becomes -|z|, and the tablet
/// (psi_1 + beta psi_2)/sqrt(2(1-|z|)) is used with Q = 2|z|/(1+|z|^2) and
/// phases (1, -beta), the machine that reaches p = 1/(1+|z|).
inline EnscriptionCertificate solve_two_text(const QuantumText& text) {
  if (text.size() != 2) throw Error(ErrorKind::SizeMismatch, "solve_two_text needs N = 2");
  const Vector psi1 = text.state(0);
  const Vector psi2 = text.state(1);
  const Complex z = psi1.dot(psi2);

  const double zr = z.real();
  if (std::abs(z.imag()) < tol::kState && -2.0 * zr / ((1.0 + zr) * (1.0 + zr)) <= 1.0 + 1e-12) {
    const Vector tablet = (psi1 + psi2) / std::sqrt(2.0 * (1.0 + zr));
    const double big_q = std::clamp(-2.0 * zr / ((1.0 + zr) * (1.0 + zr)), -1.0, 1.0);
    return certify(text, EnscriptionParams::from_Q(big_q, tablet, trivial_phases(2)));
  }
  const double m = std::abs(z);
  const Complex beta = -std::conj(z) / m;
  const Vector tablet = (psi1 + beta * psi2) / std::sqrt(2.0 * (1.0 - m));
  const double big_q = 2.0 * m / (1.0 + m * m);
  return certify(text, EnscriptionParams::from_Q(big_q, tablet, {Complex(1.0, 0.0), -beta}));
}

/// Central enscription of a text that is real uniform up to per-state
/// phases: tablet along the gauge-fixed sum of states, Q = Q2. When Q2 lies
/// outside [-1, 1] (just above z0) no central tablet exists and the
/// numerical search inside [Q1, 1] is used instead.
inline EnscriptionCertificate solve_uniform_central(const QuantumText& text,
                                                    const SearchOptions& fallback = {}) {
  const Eigen::Index n = text.size();
  if (n < 3) throw Error(ErrorKind::SizeMismatch, "uniform solver needs N >= 3");
  const auto gauge = as_real_uniform(gram(text));
  if (!gauge) throw Error(ErrorKind::IllegibleText, "text is not real uniform up to phases");
  const double z = gauge->z;
  const int ni = static_cast<int>(n);
  if (z <= -1.0 / (n - 1.0) + 1e-12) {
    throw Error(ErrorKind::IllegibleText, "text is not efficient (z = -1/(N-1))");
  }
  const QRangeResult range = q_range_real_uniform(ni, z);
  if (range.empty()) throw Error(ErrorKind::IllegibleText, "real uniform text below z0");

  std::vector<Complex> phases(gauge->beta.begin(), gauge->beta.end());
  Vector sum = Vector::Zero(text.dimension());
  for (Eigen::Index i = 0; i < n; ++i) sum += gauge->beta[static_cast<std::size_t>(i)] * text.state(i);
  const double q2 = z == 0.0 ? 0.0 : uniform_q2(ni, z);
  if (q2 >= -1.0 && q2 <= 1.0) {
    EnscriptionCertificate c = certify(text, EnscriptionParams::from_Q(q2, sum.normalized(), phases));
    if (c.residual < 1e-9) return c;
  }
  // Search at the middle of the feasible interval.
  const QInterval& iv = range.intervals.front();
  const double target = 0.5 * (iv.lo + iv.hi);
  SearchResult r = feasibility_search(text, target, fallback);
  if (!r.certificate) {
    throw Error(ErrorKind::IllegibleText,
                "no certificate found; best residual " + std::to_string(r.best_residual));
  }
  return *r.certificate;
}

inline EnscriptionCertificate solve_real_uniform_central(int n, double z,
                                                         const SearchOptions& fallback = {}) {
  return solve_uniform_central(make_real_uniform(n, z), fallback);
}

/// Certificate for the equivalent text a_i = beta_i V b_{pi(i)}: tablet
/// V psi_0, phases alpha_{pi(i)} conj(beta_i), same q.
inline EnscriptionCertificate transform_certificate(const QuantumText& transformed,
                                                    const EnscriptionCertificate& cert,
                                                    const EquivalenceWitness& w) {
  std::vector<Complex> phases(w.phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    phases[i] = cert.params.output_phases[static_cast<std::size_t>(w.permutation[i])] * std::conj(w.phases[i]);
  }
  EnscriptionParams p = cert.params;
  p.tablet = w.unitary * cert.params.tablet;
  p.output_phases = std::move(phases);
  return certify(transformed, std::move(p));
}

/// Lifts a certificate for the fully-quantum part T2 of a direct sum to the
/// whole text: tablet P psi_0 / |P psi_0| with P the projector onto the
/// dialect of T2, and Q' = |P psi_0|^2 Q.
inline EnscriptionCertificate direct_sum_enscribe(const QuantumText& classical_subtext,
                                                  const EnscriptionCertificate& t2_certificate,
                                                  const QuantumText& combined) {
  const Eigen::Index d = combined.dimension();
  if (classical_subtext.dimension() != d || t2_certificate.params.tablet.size() != d) {
    throw Error(ErrorKind::DimensionMismatch, "subtext and certificate must share the language");
  }
  if (!classify(classical_subtext).classical) {
    throw Error(ErrorKind::NotADirectSum, "first subtext is not classical");
  }
  // Indices of combined states that belong to the classical subtext.
  std::vector<Eigen::Index> t1, t2;
  for (Eigen::Index i = 0; i < combined.size(); ++i) {
    bool in_t1 = false;
    for (Eigen::Index k = 0; k < classical_subtext.size(); ++k) {
      if (std::abs(classical_subtext.state(k).dot(combined.state(i))) > 1.0 - tol::kState) in_t1 = true;
    }
    (in_t1 ? t1 : t2).push_back(i);
  }
  if (static_cast<Eigen::Index>(t1.size()) != classical_subtext.size()) {
    throw Error(ErrorKind::NotADirectSum, "classical subtext is not contained in the combined text");
  }
  if (t2.empty()) throw Error(ErrorKind::NotADirectSum, "combined text has no second part");
  const Matrix g = gram(combined);
  for (Eigen::Index i : t1) {
    for (Eigen::Index j : t2) {
      if (std::abs(g(i, j)) >= tol::kState) {
        throw Error(ErrorKind::NotADirectSum, "cross overlap between the two parts");
      }
    }
  }
  const QuantumText sub2 = combined.subtext(t2);
  if (static_cast<Eigen::Index>(t2_certificate.params.output_phases.size()) != sub2.size() ||
      enscription_residual(sub2, t2_certificate.params) >= tol::kAccept) {
    throw Error(ErrorKind::InvalidInputCertificate, "certificate does not enscribe the second part");
  }
  if (t1.empty()) return certify(combined, t2_certificate.params);

  const Vector projected = dialect_projector(sub2) * t2_certificate.params.tablet;
  const double weight = projected.squaredNorm();
  if (weight < tol::kState) {
    throw Error(ErrorKind::InvalidInputCertificate, "tablet is orthogonal to the second dialect");
  }
  std::vector<Complex> phases = trivial_phases(combined.size());
  for (std::size_t k = 0; k < t2.size(); ++k) {
    phases[static_cast<std::size_t>(t2[k])] = t2_certificate.params.output_phases[k];
  }
  return certify(combined, EnscriptionParams::from_Q(weight * t2_certificate.params.Q,
                                                     projected / std::sqrt(weight), phases));
}

/// Member of the thin-text family: tablet sqrt(t) psi_0 + sqrt(1-t) phi_0
/// and Q(t) = Q0 / t, for |Q0| <= t <= 1 and phi_0 orthogonal to the dialect.
inline EnscriptionCertificate thin_extension_family(const QuantumText& text,
                                                    const EnscriptionCertificate& dialect_certificate,
                                                    double t, const Vector& direction) {
  const double q0 = dialect_certificate.params.Q;
  if (!(t > 0.0 && t <= 1.0 && t >= std::abs(q0) - 1e-15)) {
    throw Error(ErrorKind::TOutOfRange, "t = " + std::to_string(t) + " outside [|Q0|, 1]");
  }
  const Matrix p = dialect_projector(text);
  if (direction.size() != text.dimension() || std::abs(direction.norm() - 1.0) > tol::kState ||
      (p * direction).norm() > tol::kState) {
    throw Error(ErrorKind::DirectionNotOrthogonal, "direction must be a unit vector outside the dialect");
  }
  const Vector& psi0 = dialect_certificate.params.tablet;
  if ((psi0 - p * psi0).norm() > 1e-7) {
    throw Error(ErrorKind::InvalidInputCertificate, "input tablet must lie in the dialect");
  }
  const double qt = std::clamp(q0 / t, -1.0, 1.0);
  const Vector tablet = std::sqrt(t) * psi0 + std::sqrt(1.0 - t) * direction;
  return certify(text, EnscriptionParams::from_Q(qt, tablet, dialect_certificate.params.output_phases));
}

/// True when the Omega_i(-1, psi_0) are linearly dependent.
inline bool q_minus_one_dependence_check(const QuantumText& text, const Vector& tablet) {
  Matrix om(text.dimension() * text.dimension(), text.size());
  for (Eigen::Index i = 0; i < text.size(); ++i) om.col(i) = omega(text, i, Complex(-1.0, 0.0), tablet);
  return column_rank(om) < text.size();
}

}  // namespace enscribe
