#include "homwalk/subgroup.hpp"

#include <cmath>
#include <string>

namespace homwalk {

namespace {

constexpr double kZeroSumTol = 1e-9;
constexpr double kIndependenceTol = 1e-9;

// Gram-Schmidt with one re-orthogonalization pass.  Returns the residual norm
// before normalization; the caller decides whether that counts as dependent.
double orthogonalize_against(const Matrix& rows, int n_rows, Vector& v) {
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < n_rows; ++i) {
      v -= rows.row(i).dot(v) * rows.row(i).transpose();
    }
  }
  return v.norm();
}

}  // namespace

SubgroupSpec::SubgroupSpec(int dim, std::vector<Vector> a_prime_basis, UnipotentPart part)
    : dim_(dim), part_(part), raw_basis_(std::move(a_prime_basis)) {
  require(dim_ >= kMinDim && dim_ <= kMaxDim, ErrorCode::UnsupportedDimension,
          "dimension " + std::to_string(dim_) + " outside supported range");
  const int m = static_cast<int>(raw_basis_.size());
  require(m <= a_dim(), ErrorCode::DependentBasis,
          std::to_string(m) + " vectors cannot be independent in a " +
              std::to_string(a_dim()) + "-dimensional space");

  a_prime_on_.resize(m, dim_);
  for (int j = 0; j < m; ++j) {
    const Vector& raw = raw_basis_[static_cast<size_t>(j)];
    require(raw.size() == dim_, ErrorCode::DimensionMismatch,
            "basis vector " + std::to_string(j) + " has length " + std::to_string(raw.size()) +
                ", expected " + std::to_string(dim_));
    require(std::abs(raw.sum()) <= kZeroSumTol * (1.0 + raw.norm()), ErrorCode::DimensionMismatch,
            "basis vector " + std::to_string(j) + " is not trace-free");
    Vector v = raw;
    const double scale = v.norm();
    require(scale > 0.0, ErrorCode::DependentBasis,
            "basis vector " + std::to_string(j) + " is zero");
    const double residual = orthogonalize_against(a_prime_on_, j, v);
    require(residual > kIndependenceTol * scale, ErrorCode::DependentBasis,
            "basis vector " + std::to_string(j) + " depends on the previous ones");
    a_prime_on_.row(j) = v.transpose() / residual;
  }

  // Candidates e_i - (1/d) * ones span a; keeping whichever survive projection
  // off a' gives a deterministic orthonormal basis of the complement.
  const int k = codim();
  e_basis_.resize(k, dim_);
  int accepted = 0;
  for (int i = 0; i < dim_ && accepted < k; ++i) {
    Vector v = Vector::Constant(dim_, -1.0 / static_cast<double>(dim_));
    v(i) += 1.0;
    orthogonalize_against(a_prime_on_, m, v);
    const double residual = orthogonalize_against(e_basis_, accepted, v);
    if (residual > 1e-8) {
      e_basis_.row(accepted) = v.transpose() / residual;
      ++accepted;
    }
  }
  require(accepted == k, ErrorCode::NumericalBreakdown,
          "failed to complete an orthonormal basis of the quotient");
}

}  // namespace homwalk
