#include "homwalk/decomp.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace homwalk {

namespace {

constexpr double kZeroSumTol = 1e-9;
constexpr double kFrameTol = 1e-9;
constexpr double kPivotFloor = 1e-200;

// Modified Gram-Schmidt with a second orthogonalization pass.  Writes the
// orthogonal factor into q (which must not alias m), the logs of the positive
// diagonal of R into log_diag, and, when r is non-null, the full upper
// triangle of R.  The diagonal of R comes out positive by construction, which
// is exactly the sign convention the Iwasawa decomposition needs.
void mgs_qr(const Matrix& m, Matrix& q, Vector& log_diag, Matrix* r) {
  const int d = static_cast<int>(m.rows());
  q = m;
  if (r) r->setZero(d, d);
  for (int j = 0; j < d; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        const double c = q.col(i).dot(q.col(j));
        q.col(j) -= c * q.col(i);
        if (r) (*r)(i, j) += c;
      }
    }
    const double pivot = q.col(j).norm();
    require(pivot > kPivotFloor, ErrorCode::NumericalBreakdown,
            "vanishing pivot at column " + std::to_string(j) +
                "; input is numerically singular");
    log_diag(j) = std::log(pivot);
    q.col(j) /= pivot;
    if (r) (*r)(j, j) = pivot;
  }
}

const std::vector<std::vector<int>>& subsets(int d, int j) {
  static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
  auto [it, inserted] = cache.try_emplace({d, j});
  if (inserted) {
    std::vector<int> current(static_cast<size_t>(j));
    // Lexicographic enumeration of j-element subsets of {0, ..., d-1}.
    for (int i = 0; i < j; ++i) current[static_cast<size_t>(i)] = i;
    while (true) {
      it->second.push_back(current);
      int p = j - 1;
      while (p >= 0 && current[static_cast<size_t>(p)] == d - j + p) --p;
      if (p < 0) break;
      ++current[static_cast<size_t>(p)];
      for (int i = p + 1; i < j; ++i)
        current[static_cast<size_t>(i)] = current[static_cast<size_t>(i - 1)] + 1;
    }
  }
  return it->second;
}

double top_singular_value(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const double top = svd.singularValues()(0);
  require(std::isfinite(top) && top > 0.0, ErrorCode::SvdFailure,
          "top singular value is not positive and finite");
  return top;
}

}  // namespace

AVector::AVector(Vector coords) : coords_(std::move(coords)) {
  require(coords_.size() >= 1, ErrorCode::DimensionMismatch, "empty coordinate vector");
  require(coords_.allFinite(), ErrorCode::NumericalBreakdown, "non-finite coordinates");
  const double sum = coords_.sum();
  require(std::abs(sum) <= kZeroSumTol * (1.0 + coords_.norm()), ErrorCode::DimensionMismatch,
          "coordinates sum to " + std::to_string(sum) + ", expected zero");
  coords_.array() -= sum / static_cast<double>(coords_.size());
}

FlagPoint::FlagPoint(Matrix frame) : frame_(std::move(frame)) {
  require(frame_.rows() == frame_.cols(), ErrorCode::NonSquare, "frame must be square");
  require(frame_.rows() >= kMinDim && frame_.rows() <= kMaxDim, ErrorCode::UnsupportedDimension,
          "frame dimension outside supported range");
  const Matrix gram = frame_.transpose() * frame_;
  const double defect = (gram - Matrix::Identity(frame_.rows(), frame_.cols()))
                            .cwiseAbs()
                            .maxCoeff();
  require(defect <= kFrameTol, ErrorCode::NumericalBreakdown,
          "frame is not orthonormal (defect " + std::to_string(defect) + ")");
}

FlagPoint FlagPoint::base(int dim) { return FlagPoint(Matrix::Identity(dim, dim)); }

FlagPoint FlagPoint::generic(int dim) {
  // The Hilbert matrix is strictly totally positive, so every minor against
  // the coordinate flag is nonzero: the resulting flag is in general position
  // relative to base(dim).
  Matrix h(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) h(i, j) = 1.0 / static_cast<double>(i + j + 1);
  Matrix q(dim, dim);
  Vector log_diag(dim);
  mgs_qr(h, q, log_diag, nullptr);
  return FlagPoint(q);
}

double flag_distance(const FlagPoint& a, const FlagPoint& b) {
  require(a.dim() == b.dim(), ErrorCode::DimensionMismatch,
          "flags live in different dimensions");
  const int d = a.dim();
  double dist = 0.0;
  for (int j = 1; j < d; ++j) {
    // The spectral norm of the difference of orthogonal projectors onto two
    // j-dimensional subspaces is the sine of their largest principal angle.
    const Matrix pa = a.frame().leftCols(j) * a.frame().leftCols(j).transpose();
    const Matrix pb = b.frame().leftCols(j) * b.frame().leftCols(j).transpose();
    Eigen::JacobiSVD<Matrix> svd(pa - pb);
    dist = std::max(dist, svd.singularValues()(0));
  }
  return std::min(dist, 1.0);
}

IwasawaTriple iwasawa_decompose(const GroupElement& g) {
  const int d = g.dim();
  Matrix q(d, d), r(d, d);
  Vector log_diag(d);
  mgs_qr(g.matrix(), q, log_diag, &r);
  Matrix n = Matrix::Identity(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) n(i, j) = r(i, j) / r(i, i);
  return IwasawaTriple{std::move(q), AVector(std::move(log_diag)), std::move(n)};
}

AVector cartan_projection(const GroupElement& g) {
  Eigen::JacobiSVD<Matrix> svd(g.matrix());
  Vector sv = svd.singularValues();
  require(sv.allFinite() && sv.minCoeff() > 0.0, ErrorCode::SvdFailure,
          "singular values are not positive and finite");
  return AVector(sv.array().log().matrix());
}

CocycleStep iwasawa_cocycle(const GroupElement& g, const FlagPoint& eta) {
  require(g.dim() == eta.dim(), ErrorCode::DimensionMismatch,
          "group element and flag live in different dimensions");
  const int d = g.dim();
  const Matrix moved = g.matrix() * eta.frame();
  Matrix q(d, d);
  Vector log_diag(d);
  mgs_qr(moved, q, log_diag, nullptr);
  return CocycleStep{AVector(std::move(log_diag)), FlagPoint(std::move(q))};
}

Vector project_cocycle(const AVector& sigma, const SubgroupSpec& spec) {
  require(sigma.dim() == spec.dim(), ErrorCode::DimensionMismatch,
          "cocycle value and subgroup live in different dimensions");
  return spec.e_basis() * sigma.coords();
}

CocycleWalker::CocycleWalker(const FlagPoint& eta0, int reorthogonalize_every)
    : frame_(eta0.frame()),
      work_(eta0.dim(), eta0.dim()),
      sigma_(Vector::Zero(eta0.dim())),
      log_diag_(eta0.dim()),
      reorth_every_(reorthogonalize_every) {
  require(reorth_every_ >= 1, ErrorCode::DimensionMismatch,
          "re-orthogonalization interval must be positive");
}

void CocycleWalker::step(const GroupElement& g) {
  require(g.dim() == dim(), ErrorCode::DimensionMismatch,
          "group element dimension does not match the walker");
  work_.noalias() = g.matrix() * frame_;
  mgs_qr(work_, frame_, log_diag_, nullptr);
  sigma_ += log_diag_;
  if (++steps_ % reorth_every_ == 0) {
    // Drift off orthonormality is projected away; the induced change of the
    // triangular factor is folded into sigma so the product invariant holds.
    work_ = frame_;
    mgs_qr(work_, frame_, log_diag_, nullptr);
    sigma_ += log_diag_;
  }
}

CartanTracker::CartanTracker(int dim) : dim_(dim) {
  require(dim_ >= kMinDim && dim_ <= kMaxDim, ErrorCode::UnsupportedDimension,
          "dimension outside supported range");
  for (int j = 1; j < dim_; ++j) {
    const int n = static_cast<int>(subsets(dim_, j).size());
    power_.push_back(Matrix::Identity(n, n));
    log_scale_.push_back(0.0);
    scratch_.emplace_back(n, n);
  }
}

void CartanTracker::step(const GroupElement& g) {
  require(g.dim() == dim_, ErrorCode::DimensionMismatch,
          "group element dimension does not match the tracker");
  for (int j = 1; j < dim_; ++j) {
    Matrix& w = power_[static_cast<size_t>(j - 1)];
    Matrix& s = scratch_[static_cast<size_t>(j - 1)];
    s.noalias() = exterior_power(g.matrix(), j) * w;
    const double scale = s.norm();
    require(std::isfinite(scale) && scale > 0.0, ErrorCode::NumericalBreakdown,
            "exterior power collapsed to zero");
    w = s / scale;
    log_scale_[static_cast<size_t>(j - 1)] += std::log(scale);
  }
  ++steps_;
}

Vector CartanTracker::kappa() const {
  // partial(j) = kappa_1 + ... + kappa_j = log of the top singular value of
  // the j-th exterior power of the product.
  Vector partial(dim_ - 1);
  for (int j = 1; j < dim_; ++j)
    partial(j - 1) = log_scale_[static_cast<size_t>(j - 1)] +
                     std::log(top_singular_value(power_[static_cast<size_t>(j - 1)]));
  Vector kappa(dim_);
  kappa(0) = partial(0);
  for (int j = 1; j < dim_ - 1; ++j) kappa(j) = partial(j) - partial(j - 1);
  kappa(dim_ - 1) = -partial(dim_ - 2);
  return kappa;
}

Matrix exterior_power(const Matrix& m, int j) {
  const int d = static_cast<int>(m.rows());
  require(m.rows() == m.cols(), ErrorCode::NonSquare, "exterior power needs a square matrix");
  require(j >= 0 && j <= d, ErrorCode::DimensionMismatch, "exterior power degree out of range");
  if (j == 0) return Matrix::Ones(1, 1);
  if (j == 1) return m;
  const auto& idx = subsets(d, j);
  const int n = static_cast<int>(idx.size());
  Matrix out(n, n);
  Matrix sub(j, j);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      for (int a = 0; a < j; ++a)
        for (int b = 0; b < j; ++b)
          sub(a, b) = m(idx[static_cast<size_t>(r)][static_cast<size_t>(a)],
                        idx[static_cast<size_t>(c)][static_cast<size_t>(b)]);
      out(r, c) = sub.determinant();
    }
  }
  return out;
}

}  // namespace homwalk
