#pragma once

#include <cmath>
#include <tuple>
#include <vector>

#include "enscribe/correspondence.hpp"
#include "enscribe/params.hpp"

namespace enscribe {

/// Columns Omega_i(q, psi_0).
inline Matrix omega_columns(const QuantumText& text, const EnscriptionParams& p) {
  const Eigen::Index d = text.dimension();
  Matrix cols(d * d, text.size());
  for (Eigen::Index i = 0; i < text.size(); ++i) cols.col(i) = omega(text, i, p.q, p.tablet);
  return cols;
}

/// Columns alpha_i psi_i (x) psi_i.
inline Matrix clone_columns(const QuantumText& text, const EnscriptionParams& p) {
  const Eigen::Index d = text.dimension();
  Matrix cols(d * d, text.size());
  for (Eigen::Index i = 0; i < text.size(); ++i) {
    const Vector psi = text.state(i);
    cols.col(i) = p.output_phases[static_cast<std::size_t>(i)] * kron(psi, psi);
  }
  return cols;
}

/// max_i |U Omega_i - alpha_i psi_i (x) psi_i| plus the unitarity defect.
inline double verify_procedure(const Matrix& u, const QuantumText& text,
                               const EnscriptionCertificate& cert) {
  const Eigen::Index big = text.dimension() * text.dimension();
  if (u.rows() != big || u.cols() != big) {
    throw Error(ErrorKind::DimensionMismatch, "procedure must act on the doubled space");
  }
  const Matrix diff = u * omega_columns(text, cert.params) - clone_columns(text, cert.params);
  double action = 0.0;
  for (Eigen::Index i = 0; i < diff.cols(); ++i) action = std::max(action, diff.col(i).norm());
  return action + unitarity_defect(u);
}

/// A procedure U with U Omega_i(q, psi_0) = alpha_i psi_i (x) psi_i.
inline Matrix build_procedure(const QuantumText& text, const EnscriptionCertificate& cert,
                              double accept = tol::kAccept) {
  if (enscription_residual(text, cert.params) >= accept) {
    throw Error(ErrorKind::InvalidCertificate, "certificate residual above the accept tolerance");
  }
  const Eigen::Index big = text.dimension() * text.dimension();
  // Validity is gated by the residual above; the Gram gate only rejects
  // gross mismatches, and verify_procedure reports the achieved accuracy.
  return unitary_from_correspondence(omega_columns(text, cert.params),
                                     clone_columns(text, cert.params), big, 1e-6);
}

/// Basis of the swap-symmetric subspace of C^d (x) C^d as columns,
/// ordered by (a, b) with a <= b.
inline Matrix symmetric_subspace_basis(Eigen::Index d) {
  Matrix s = Matrix::Zero(d * d, d * (d + 1) / 2);
  Eigen::Index col = 0;
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b, ++col) {
      if (a == b) {
        s(a * d + a, col) = 1.0;
      } else {
        s(a * d + b, col) = r;
        s(b * d + a, col) = r;
      }
    }
  }
  return s;
}

/// Swap-commuting procedure for a q = 1 certificate: the correspondence is
/// built inside the symmetric subspace and the antisymmetric part is left
/// untouched.
inline Matrix symmetrize_procedure(const QuantumText& text, const EnscriptionCertificate& cert,
                                   double accept = tol::kAccept) {
  if (std::abs(cert.params.q - Complex(1.0, 0.0)) > 1e-12) {
    throw Error(ErrorKind::NotQOne, "symmetrized procedures need q = 1");
  }
  if (enscription_residual(text, cert.params) >= accept) {
    throw Error(ErrorKind::InvalidCertificate, "certificate residual above the accept tolerance");
  }
  const Eigen::Index d = text.dimension();
  const Matrix s = symmetric_subspace_basis(d);
  const Matrix in = s.adjoint() * omega_columns(text, cert.params);
  const Matrix out = s.adjoint() * clone_columns(text, cert.params);
  const Matrix w = unitary_from_correspondence(in, out, s.cols(), 1e-6);
  const Matrix anti = Matrix::Identity(d * d, d * d) - s * s.adjoint();
  return s * w * s.adjoint() + anti;
}

/// Qubit example: psi_{1,2} = a+ |0> +/- a- |1>, a± = sqrt((1±z)/2),
/// z = sqrt(3) - 2, tablet |0>, q = 1, trivial phases, and the explicit
/// 4x4 procedure that realizes it.
struct QubitExample {
  QuantumText text;
  EnscriptionCertificate certificate;
  Matrix procedure;
};

inline Matrix qubit_example_procedure() {
  const double h = 0.5, r = std::sqrt(3.0) / 2.0;
  Matrix u = Matrix::Zero(4, 4);
  // |00>=0, |01>=1, |10>=2, |11>=3
  u(0, 0) = h;
  u(3, 3) = -h;
  u(0, 3) = r;
  u(3, 0) = r;
  u(1, 1) = 1.0;
  u(2, 2) = 1.0;
  return u;
}

inline QubitExample qubit_example() {
  const double z = std::sqrt(3.0) - 2.0;
  const double ap = std::sqrt((1.0 + z) / 2.0), am = std::sqrt((1.0 - z) / 2.0);
  Matrix s(2, 2);
  s << ap, ap, am, -am;
  QuantumText text = make_text(s);
  Vector tablet(2);
  tablet << 1.0, 0.0;
  EnscriptionCertificate cert =
      certify(text, EnscriptionParams::from_q(Complex(1.0, 0.0), tablet, trivial_phases(2)));
  return {std::move(text), std::move(cert), qubit_example_procedure()};
}

}  // namespace enscribe
