#pragma once

// Shared helpers for the test suite: random element generation and
// independent oracles (classical Gram-Schmidt, self-adjoint eigensolver
// norms, Gram-matrix principal angles).  The oracles deliberately use
// different algorithms from the library so agreement is evidence, not
// tautology.

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "homwalk/group.hpp"

namespace testutil {

using homwalk::Matrix;
using homwalk::Vector;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Random matrix with entries uniform in [-1, 1], rejected while badly
// conditioned, then scaled to determinant exactly +1 (up to roundoff).
inline Matrix random_unimodular(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (;;) {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = unit(rng);
    double det = m.determinant();
    if (std::abs(det) < 0.05) continue;
    if (det < 0) {
      m.row(0) = -m.row(0);
      det = -det;
    }
    return m / std::pow(det, 1.0 / d);
  }
}

inline homwalk::GroupElement random_element(int d, std::mt19937_64& rng) {
  return homwalk::GroupElement(random_unimodular(d, rng));
}

// Orthonormal frame from a random matrix via Householder QR (library-side
// decompositions use modified Gram-Schmidt, so this is an independent path),
// with column signs fixed to make the triangular factor's diagonal positive.
inline Matrix random_frame(int d, std::mt19937_64& rng) {
  const Matrix m = random_unimodular(d, rng);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

// Classical (single-pass) Gram-Schmidt: an independent oracle for QR-type
// factorizations.  Returns {q, r} with a = q r, r upper triangular with
// positive diagonal.
inline std::pair<Matrix, Matrix> classical_gram_schmidt(const Matrix& a) {
  const int d = static_cast<int>(a.cols());
  Matrix q = a;
  Matrix r = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < j; ++i) {
      r(i, j) = q.col(i).dot(a.col(j));
      q.col(j) -= r(i, j) * q.col(i);
    }
    r(j, j) = q.col(j).norm();
    q.col(j) /= r(j, j);
  }
  return {q, r};
}

// Operator norm through the self-adjoint eigensolver on m^T m (tridiagonal
// QR iteration), independent of the library's Jacobi SVD.
inline double operator_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.transpose() * m);
  return std::sqrt(es.eigenvalues().maxCoeff());
}

// Sine of the largest principal angle between the spans of the leading j
// columns of two orthonormal frames, from the singular values of the Gram
// matrix (cosines of the principal angles).
inline double principal_angle_sine(const Matrix& a, const Matrix& b, int j) {
  const Matrix gram = a.leftCols(j).transpose() * b.leftCols(j);
  Eigen::JacobiSVD<Matrix> svd(gram);
  const double smallest_cosine = std::min(1.0, svd.singularValues().minCoeff());
  return std::sqrt(std::max(0.0, 1.0 - smallest_cosine * smallest_cosine));
}

}  // namespace testutil
