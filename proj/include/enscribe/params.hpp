#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "enscribe/text.hpp"

namespace enscribe {

/// Entanglement parameter Q = 2 Re(q) / (1 + |q|^2).
inline double q_to_Q(Complex q) { return 2.0 * q.real() / (1.0 + std::norm(q)); }

/// The real q in [-1, 1] with q_to_Q(q) == Q.
inline double canonical_q(double big_q) {
  if (!(big_q >= -1.0 && big_q <= 1.0)) {
    throw Error(ErrorKind::QOutOfRange, "Q = " + std::to_string(big_q) + " outside [-1, 1]");
  }
  if (big_q == 0.0) return 0.0;
  // (1 - sqrt(1 - Q^2)) / Q, written without cancellation.
  return big_q / (1.0 + std::sqrt(1.0 - big_q * big_q));
}

enum class Flavor { Central, WeaklyCentral, QuasiCentral, Generic };

inline const char* to_string(Flavor f) {
  switch (f) {
    case Flavor::Central: return "central";
    case Flavor::WeaklyCentral: return "weakly_central";
    case Flavor::QuasiCentral: return "quasi_central";
    case Flavor::Generic: return "generic";
  }
  return "generic";
}

inline Flavor flavor_from_string(const std::string& s) {
  if (s == "central") return Flavor::Central;
  if (s == "weakly_central") return Flavor::WeaklyCentral;
  if (s == "quasi_central") return Flavor::QuasiCentral;
  if (s == "generic") return Flavor::Generic;
  throw Error(ErrorKind::ParseError, "unknown flavor '" + s + "'");
}

/// q, Q, tablet psi_0 and output phases alpha_i. `q` may be complex; the
/// enscription condition only sees Q.
struct EnscriptionParams {
  Complex q{0.0, 0.0};
  double Q = 0.0;
  Vector tablet;
  std::vector<Complex> output_phases;

  static EnscriptionParams from_q(Complex q, Vector tablet, std::vector<Complex> phases) {
    return {q, q_to_Q(q), std::move(tablet), std::move(phases)};
  }
  /// Uses the canonical real q for Q.
  static EnscriptionParams from_Q(double big_q, Vector tablet, std::vector<Complex> phases) {
    return {Complex(canonical_q(big_q), 0.0), big_q, std::move(tablet), std::move(phases)};
  }
};

struct EnscriptionCertificate {
  EnscriptionParams params;
  double residual = 0.0;
  Flavor flavor = Flavor::Generic;

  bool valid(double accept = tol::kAccept) const { return residual < accept; }
};

/// <psi_i|psi_0> for every state.
inline Vector tablet_overlaps(const QuantumText& text, const Vector& tablet) {
  return text.states().adjoint() * tablet;
}

/// B_i = 1 + Q |<psi_i|psi_0>|^2.
inline RealVector b_factors(const Vector& overlaps, double big_q) {
  return (RealVector::Ones(overlaps.size()) + big_q * overlaps.cwiseAbs2()).eval();
}

/// A_i = 1 + |q|^2 + 2 Re(q) |<psi_i|psi_0>|^2.
inline double omega_normalizer(Complex q, Complex overlap) {
  return 1.0 + std::norm(q) + 2.0 * q.real() * std::norm(overlap);
}

/// (psi_i (x) psi_0 + q psi_0 (x) psi_i) / sqrt(A_i), Kronecker index a*d + b.
inline Vector omega(const QuantumText& text, Eigen::Index i, Complex q, const Vector& tablet) {
  if (i < 0 || i >= text.size()) throw Error(ErrorKind::SizeMismatch, "state index out of range");
  const Vector psi = text.states().col(i);
  const double a = omega_normalizer(q, tablet.dot(psi));
  if (!(a > tol::kNormalizer)) {
    throw Error(ErrorKind::DegenerateNormalizer,
                "A_" + std::to_string(i) + " = " + std::to_string(a));
  }
  return (kron(psi, tablet) + q * kron(tablet, psi)) / std::sqrt(a);
}

/// Per-pair violation of
///   z_ij + Q <psi_i|psi_0><psi_0|psi_j> - sqrt(B_i B_j) conj(a_i) a_j z_ij^2
/// as an upper-triangular matrix (zeros elsewhere).
inline Matrix enscription_violations(const Matrix& g, const Vector& overlaps, double big_q,
                                     const std::vector<Complex>& phases) {
  const Eigen::Index n = g.rows();
  const RealVector b = b_factors(overlaps, big_q);
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex z = g(i, j);
      const Complex gamma = std::conj(phases[static_cast<std::size_t>(i)]) * phases[static_cast<std::size_t>(j)];
      out(i, j) = z + big_q * overlaps(i) * std::conj(overlaps(j)) -
                  std::sqrt(std::max(0.0, b(i) * b(j))) * gamma * z * z;
    }
  }
  return out;
}

/// Max over i < j of the violation magnitude; 0 means the parameters enscribe
/// the text exactly.
inline double enscription_residual(const QuantumText& text, const EnscriptionParams& p) {
  if (p.tablet.size() != text.dimension() ||
      static_cast<Eigen::Index>(p.output_phases.size()) != text.size()) {
    throw Error(ErrorKind::DimensionMismatch, "parameters do not match the text");
  }
  const Matrix v = enscription_violations(gram(text), tablet_overlaps(text, p.tablet), p.Q,
                                          p.output_phases);
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

/// The same condition evaluated on explicit Omega vectors:
///   <Omega_i|Omega_j> - conj(a_i) a_j z_ij^2, scaled by sqrt(B_i B_j) so that
/// it is directly comparable with enscription_violations.
inline Matrix inner_product_violations(const QuantumText& text, const EnscriptionParams& p) {
  const Eigen::Index n = text.size();
  std::vector<Vector> om;
  om.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) om.push_back(omega(text, i, p.q, p.tablet));
  const Matrix g = gram(text);
  const RealVector b = b_factors(tablet_overlaps(text, p.tablet), q_to_Q(p.q));
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex gamma = std::conj(p.output_phases[static_cast<std::size_t>(i)]) *
                            p.output_phases[static_cast<std::size_t>(j)];
      const Complex mismatch = om[static_cast<std::size_t>(i)].dot(om[static_cast<std::size_t>(j)]) - gamma * g(i, j) * g(i, j);
      out(i, j) = std::sqrt(b(i) * b(j)) * mismatch;
    }
  }
  return out;
}

/// Flavor of a tablet: central (all <psi_i|psi_0> equal), weakly central
/// (equal moduli), quasi-central (exactly N-1 equal), or generic.
inline Flavor tablet_flavor(const QuantumText& text, const Vector& tablet, double eps = 1e-7) {
  const Vector c = tablet_overlaps(text, tablet);
  const Eigen::Index n = c.size();
  auto all_equal = [&](auto&& value) {
    for (Eigen::Index i = 1; i < n; ++i) {
      if (std::abs(value(i) - value(0)) > eps) return false;
    }
    return true;
  };
  if (all_equal([&](Eigen::Index i) { return c(i); })) return Flavor::Central;
  if (all_equal([&](Eigen::Index i) { return Complex(std::abs(c(i)), 0.0); })) return Flavor::WeaklyCentral;
  if (n >= 3) {
    for (Eigen::Index out = 0; out < n; ++out) {
      const Eigen::Index ref = out == 0 ? 1 : 0;
      bool rest_equal = true;
      for (Eigen::Index i = 0; i < n && rest_equal; ++i) {
        if (i != out) rest_equal = std::abs(c(i) - c(ref)) <= eps;
      }
      if (rest_equal) return Flavor::QuasiCentral;
    }
  }
  return Flavor::Generic;
}

/// Fills residual and flavor for the given parameters.
inline EnscriptionCertificate certify(const QuantumText& text, EnscriptionParams p) {
  EnscriptionCertificate c;
  c.residual = enscription_residual(text, p);
  c.flavor = tablet_flavor(text, p.tablet);
  c.params = std::move(p);
  return c;
}

inline std::vector<Complex> trivial_phases(Eigen::Index n) {
  return std::vector<Complex>(static_cast<std::size_t>(n), Complex(1.0, 0.0));
}

}  // namespace enscribe
