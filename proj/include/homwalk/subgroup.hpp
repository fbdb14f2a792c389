#pragma once

#include <vector>

#include "homwalk/group.hpp"

namespace homwalk {

// Which unipotent part the closed subgroup H carries above its Cartan part.
enum class UnipotentPart {
  FullN,            // all of the upper-triangular unipotent group
  ProperSubgroup,   // a proper closed subgroup of it
};

// Description of the subgroup H = A' N' that defines the homogeneous space
// X = G / H.  A' is cut out by a basis of its Lie algebra a' inside the
// diagonal trace-zero algebra a; the quotient direction E = a / a' is modeled
// as the orthogonal complement of a' in a, with a deterministic orthonormal
// basis so that coordinates on E mean the same thing across runs.
class SubgroupSpec {
 public:
  SubgroupSpec(int dim, std::vector<Vector> a_prime_basis, UnipotentPart part);

  int dim() const { return dim_; }                      // d of the ambient SL(d, R)
  int a_dim() const { return dim_ - 1; }                // dim a
  int a_prime_dim() const { return static_cast<int>(raw_basis_.size()); }
  int codim() const { return a_dim() - a_prime_dim(); } // dim E
  UnipotentPart unipotent_part() const { return part_; }

  const std::vector<Vector>& a_prime_basis() const { return raw_basis_; }
  // Rows form an orthonormal basis of a' (a_prime_dim x d, zero-sum rows).
  const Matrix& a_prime_orthonormal() const { return a_prime_on_; }
  // Rows form an orthonormal basis of the model of E inside a (codim x d).
  const Matrix& e_basis() const { return e_basis_; }

 private:
  int dim_;
  UnipotentPart part_;
  std::vector<Vector> raw_basis_;
  Matrix a_prime_on_;
  Matrix e_basis_;
};

}  // namespace homwalk
