#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "homwalk/errors.hpp"

namespace homwalk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

constexpr int kMinDim = 2;
constexpr int kMaxDim = 8;

// An element of SL(d, R), 2 <= d <= 8.  The constructor rejects matrices
// whose determinant strays from 1 by more than 1e-6 and then divides out the
// d-th root of the determinant, so the stored matrix has determinant 1 up to
// roundoff.  The factor removed is kept for inspection.
class GroupElement {
 public:
  explicit GroupElement(Matrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  // The scalar det(m)^(1/d) divided out at construction (1.0 for exact input).
  double renormalization() const { return renorm_; }

  GroupElement inverse() const;

 private:
  Matrix m_;
  double renorm_;
};

GroupElement operator*(const GroupElement& a, const GroupElement& b);

struct Atom {
  double weight;
  GroupElement element;
};

// A finitely supported probability measure on SL(d, R).  Weights are
// normalized to sum to one; the cumulative table drives sampling.
class FiniteMeasure {
 public:
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(atoms_.size()); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& atom(int i) const { return atoms_.at(static_cast<size_t>(i)); }
  // Index of the first cumulative weight exceeding u in [0,1).
  int index_from_uniform(double u) const;

  friend FiniteMeasure make_measure(std::vector<std::pair<double, Matrix>> atoms);

 private:
  FiniteMeasure() = default;
  int dim_ = 0;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

// Builds a measure from (weight, matrix) pairs.  Weights must be positive
// and every matrix must be square of the common dimension with determinant
// within 1e-6 of 1.  Weights are normalized so that their left-to-right sum
// is exactly 1.
FiniteMeasure make_measure(std::vector<std::pair<double, Matrix>> atoms);

// One reproducible pseudo-random stream per (master seed, trajectory index)
// pair.  Streams with distinct indices are decorrelated by a splitmix64 hash
// of the pair, and every draw goes through explicitly written extraction so
// results are identical across platforms and worker counts.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t trajectory_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t trajectory_index() const { return trajectory_index_; }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // +1 or -1 with equal probability.
  int next_sign() { return (engine_() & 1u) ? 1 : -1; }
  // Draws an atom index from mu.
  int next_atom(const FiniteMeasure& mu) { return mu.index_from_uniform(next_double()); }

 private:
  std::uint64_t master_seed_;
  std::uint64_t trajectory_index_;
  std::mt19937_64 engine_;
};

// Derives an unrelated master seed for a distinct sampling phase, so that two
// phases of one experiment never consume the same streams.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t phase);

// n independent draws from mu, in the order they were drawn.
std::vector<GroupElement> sample_word(const FiniteMeasure& mu, RandomStream stream, int n);

// Product with the newest letter acting on the left:
// word = (b_1, ..., b_n) gives b_n * ... * b_1.
GroupElement left_product(const std::vector<GroupElement>& word);

}  // namespace homwalk
