#include "homwalk/group.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace homwalk {

namespace {

constexpr double kDetTolerance = 1e-6;

void check_square(const Matrix& m) {
  require(m.rows() == m.cols(), ErrorCode::NonSquare,
          "expected a square matrix, got " + std::to_string(m.rows()) + " x " +
              std::to_string(m.cols()));
  require(m.rows() >= kMinDim && m.rows() <= kMaxDim, ErrorCode::UnsupportedDimension,
          "dimension " + std::to_string(m.rows()) + " outside [" + std::to_string(kMinDim) +
              ", " + std::to_string(kMaxDim) + "]");
  require(m.allFinite(), ErrorCode::NumericalBreakdown, "matrix has non-finite entries");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

GroupElement::GroupElement(Matrix m) : m_(std::move(m)), renorm_(1.0) {
  check_square(m_);
  const double det = m_.determinant();
  require(det > 0.0, ErrorCode::BadDeterminant,
          "determinant " + std::to_string(det) + " is not positive");
  require(std::abs(det - 1.0) <= kDetTolerance, ErrorCode::BadDeterminant,
          "determinant " + std::to_string(det) + " differs from 1 by more than 1e-6");
  renorm_ = std::pow(det, 1.0 / static_cast<double>(m_.rows()));
  m_ /= renorm_;
}

GroupElement GroupElement::inverse() const {
  return GroupElement(m_.inverse());
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  require(a.dim() == b.dim(), ErrorCode::DimensionMismatch,
          "cannot multiply elements of dimension " + std::to_string(a.dim()) + " and " +
              std::to_string(b.dim()));
  return GroupElement(a.matrix() * b.matrix());
}

FiniteMeasure make_measure(std::vector<std::pair<double, Matrix>> atoms) {
  require(!atoms.empty(), ErrorCode::EmptySupport, "measure needs at least one atom");

  FiniteMeasure mu;
  mu.dim_ = static_cast<int>(atoms.front().second.rows());
  double total = 0.0;
  for (const auto& [weight, matrix] : atoms) {
    require(weight > 0.0, ErrorCode::NegativeWeight,
            "weight " + std::to_string(weight) + " is not positive");
    require(std::isfinite(weight), ErrorCode::NegativeWeight, "weight is not finite");
    total += weight;
  }
  require(total > 0.0, ErrorCode::EmptySupport, "weights sum to zero");

  mu.atoms_.reserve(atoms.size());
  mu.cumulative_.reserve(atoms.size());
  double running = 0.0;
  for (size_t i = 0; i < atoms.size(); ++i) {
    auto& [weight, matrix] = atoms[i];
    GroupElement g(std::move(matrix));
    require(g.dim() == mu.dim_, ErrorCode::DimensionMismatch,
            "atom dimension " + std::to_string(g.dim()) + " does not match " +
                std::to_string(mu.dim_));
    // Flushing the last weight against the running sum makes the normalized
    // weights add to 1.0 exactly in left-to-right order, so that averaging
    // operators built from them fix constants bitwise.
    const double w = i + 1 == atoms.size() ? std::max(0.0, 1.0 - running) : weight / total;
    running += w;
    mu.atoms_.push_back(Atom{w, std::move(g)});
    mu.cumulative_.push_back(running);
  }
  mu.cumulative_.back() = 1.0;  // guard against roundoff ever stranding u near 1
  return mu;
}

int FiniteMeasure::index_from_uniform(double u) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) return static_cast<int>(cumulative_.size()) - 1;
  return static_cast<int>(it - cumulative_.begin());
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t trajectory_index)
    : master_seed_(master_seed), trajectory_index_(trajectory_index) {
  // Two rounds of splitmix64 mix the pair into a single engine seed; a third
  // value could collide only if splitmix64 collided on 128 bits of input.
  const std::uint64_t mixed = splitmix64(splitmix64(master_seed) ^ trajectory_index);
  engine_.seed(mixed);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t phase) {
  return splitmix64(master_seed + 0x632be59bd9b4e019ull * (phase + 1));
}

std::vector<GroupElement> sample_word(const FiniteMeasure& mu, RandomStream stream, int n) {
  require(n >= 0, ErrorCode::DimensionMismatch, "negative word length");
  std::vector<GroupElement> word;
  word.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) word.push_back(mu.atom(stream.next_atom(mu)).element);
  return word;
}

GroupElement left_product(const std::vector<GroupElement>& word) {
  require(!word.empty(), ErrorCode::EmptySupport, "empty word has no product");
  GroupElement p = word.front();
  for (size_t i = 1; i < word.size(); ++i) p = word[i] * p;
  return p;
}

}  // namespace homwalk
