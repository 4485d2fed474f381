#pragma once

#include <algorithm>
#include <cmath>

#include "enscribe/common.hpp"

namespace enscribe {

namespace detail {

// Closest matrix with orthonormal columns (polar factor).
inline Matrix polar_orthonormal(const Matrix& m) {
  if (m.cols() == 0) return m;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace detail

/// Extends orthonormal columns to a full orthonormal basis of C^D.
/// Pivoted: the canonical basis vector with the largest component outside
/// the current span is added next, ties broken by lowest index.
inline Matrix complete_orthonormal_basis(const Matrix& cols, Eigen::Index dim) {
  Matrix basis(dim, dim);
  Eigen::Index k = cols.cols();
  basis.leftCols(k) = cols;

  RealVector outside(dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    outside(m) = 1.0 - (k ? cols.row(m).squaredNorm() : 0.0);
  }
  while (k < dim) {
    Eigen::Index pivot = 0;
    for (Eigen::Index m = 1; m < dim; ++m) {
      if (outside(m) > outside(pivot)) pivot = m;
    }
    Vector r = Vector::Zero(dim);
    r(pivot) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      if (k) r -= basis.leftCols(k) * (basis.leftCols(k).adjoint() * r);
    }
    r.normalize();
    basis.col(k) = r;
    outside -= r.cwiseAbs2();
    outside(pivot) = -1.0;
    ++k;
  }
  return basis;
}

/// Unitary W on C^D with W * inputs[k] = outputs[k], for column-stacked
/// vector families with matching Gram matrices.
///
/// Both families are orthonormalized with the same mixing coefficients
/// (from the eigendecomposition of the input Gram matrix, rank threshold
/// 1e-8 relative), and the two partial bases are completed by the pivoted
/// procedure above. The result is deterministic for identical inputs.
inline Matrix unitary_from_correspondence(const Matrix& inputs, const Matrix& outputs,
                                          Eigen::Index dim,
                                          double gram_tol = tol::kGramMatch) {
  if (inputs.rows() != dim || outputs.rows() != dim || inputs.cols() != outputs.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "correspondence needs two equal-length lists of vectors of dimension " +
                    std::to_string(dim));
  }
  const Matrix gin = inputs.adjoint() * inputs;
  const Matrix gout = outputs.adjoint() * outputs;
  if (inputs.cols() > 0) {
    const double mismatch = max_abs_diff(gin, gout);
    if (mismatch > gram_tol) {
      throw Error(ErrorKind::GramMismatch,
                  "Gram matrices differ by " + std::to_string(mismatch));
    }
  }

  Matrix ein(dim, 0);
  Matrix eout(dim, 0);
  if (inputs.cols() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gin);
    const RealVector& ev = es.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
      if (top > 0.0 && ev(i) > tol::kRank * top) keep.push_back(i);
    }
    Matrix mix(inputs.cols(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      mix.col(static_cast<Eigen::Index>(c)) =
          es.eigenvectors().col(keep[c]) / std::sqrt(ev(keep[c]));
    }
    ein = detail::polar_orthonormal(inputs * mix);
    eout = detail::polar_orthonormal(outputs * mix);
  }
  const Matrix fin = complete_orthonormal_basis(ein, dim);
  const Matrix fout = complete_orthonormal_basis(eout, dim);
  return fout * fin.adjoint();
}

}  // namespace enscribe
