#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace enscribe {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Tolerances shared by every module.
namespace tol {
/// Norm, colinearity and orthogonality decisions.
inline constexpr double kState = 1e-9;
/// Lowest eigenvalue a Gram matrix may have and still count as PSD.
inline constexpr double kPsdSlack = -1e-9;
/// Rank decisions: eigenvalue (or singular value) > kRank * largest.
inline constexpr double kRank = 1e-8;
/// A certificate is valid when its residual is below this.
inline constexpr double kAccept = 1e-8;
/// Negative search results must keep the residual above this.
inline constexpr double kInfeasibleFloor = 1e-4;
/// Gram agreement required by the unitary correspondence.
inline constexpr double kGramMatch = 1e-10;
/// Smallest admissible Omega normalizer A_i.
inline constexpr double kNormalizer = 1e-12;
}  // namespace tol

enum class ErrorKind {
  NonUnitState,
  ColinearPair,
  DimensionMismatch,
  SizeMismatch,
  ZOutOfRange,
  QOutOfRange,
  TOutOfRange,
  DegenerateNormalizer,
  RootNotBracketed,
  IllegibleText,
  NotADirectSum,
  InvalidInputCertificate,
  DirectionNotOrthogonal,
  GramMismatch,
  InvalidCertificate,
  NotQOne,
  QZero,
  ComplexQ,
  ParseError,
  FileNotFound,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonUnitState: return "NonUnitState";
    case ErrorKind::ColinearPair: return "ColinearPair";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::ZOutOfRange: return "ZOutOfRange";
    case ErrorKind::QOutOfRange: return "QOutOfRange";
    case ErrorKind::TOutOfRange: return "TOutOfRange";
    case ErrorKind::DegenerateNormalizer: return "DegenerateNormalizer";
    case ErrorKind::RootNotBracketed: return "RootNotBracketed";
    case ErrorKind::IllegibleText: return "IllegibleText";
    case ErrorKind::NotADirectSum: return "NotADirectSum";
    case ErrorKind::InvalidInputCertificate: return "InvalidInputCertificate";
    case ErrorKind::DirectionNotOrthogonal: return "DirectionNotOrthogonal";
    case ErrorKind::GramMismatch: return "GramMismatch";
    case ErrorKind::InvalidCertificate: return "InvalidCertificate";
    case ErrorKind::NotQOne: return "NotQOne";
    case ErrorKind::QZero: return "QZero";
    case ErrorKind::ComplexQ: return "ComplexQ";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::FileNotFound: return "FileNotFound";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Kronecker product of two vectors; index a*dim(b) + b.
inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Swap operator P on C^d (x) C^d: P(u (x) v) = v (x) u.
inline Matrix swap_operator(Eigen::Index dim) {
  const Eigen::Index big = dim * dim;
  Matrix p = Matrix::Zero(big, big);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      p(b * dim + a, a * dim + b) = 1.0;
    }
  }
  return p;
}

/// Numerical rank of a Hermitian PSD matrix (relative eigenvalue threshold).
inline Eigen::Index hermitian_rank(const Matrix& h, double rel = tol::kRank) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  const double top = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > rel * top && top > 0.0) ++rank;
  }
  return rank;
}

/// Numerical rank of the column span of a matrix.
inline Eigen::Index column_rank(const Matrix& m, double rel = tol::kRank) {
  if (m.cols() == 0 || m.rows() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const RealVector& sv = svd.singularValues();
  const double top = sv(0);
  if (top <= 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel * top) ++rank;
  }
  return rank;
}

/// Max-abs entrywise distance.
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Operator 2-norm of U^dagger U - I.
inline double unitarity_defect(const Matrix& u) {
  const Matrix g = u.adjoint() * u - Matrix::Identity(u.cols(), u.cols());
  if (g.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(g);
  return svd.singularValues()(0);
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace enscribe
