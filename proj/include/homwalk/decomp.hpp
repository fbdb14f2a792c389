#pragma once

#include <vector>

#include "homwalk/group.hpp"
#include "homwalk/subgroup.hpp"

namespace homwalk {

// A point of the Cartan algebra a = { trace-free diagonals }, stored as its
// diagonal in nepers (natural-log units).  Construction recenters an input
// whose coordinate sum is within 1e-9 of zero to an exactly zero-sum vector
// and rejects anything further out.
class AVector {
 public:
  explicit AVector(Vector coords);
  static AVector zero(int dim) { return AVector(Vector::Zero(dim)); }

  int dim() const { return static_cast<int>(coords_.size()); }
  const Vector& coords() const { return coords_; }
  double operator()(int i) const { return coords_(i); }
  double norm() const { return coords_.norm(); }

 private:
  Vector coords_;
};

// A full flag in R^d, represented by an orthonormal frame whose leading j
// columns span the j-th flag subspace.  Frames that differ by column signs
// represent the same flag; all operations below are invariant under that
// choice, and equality is meaningful only through flag_distance.
class FlagPoint {
 public:
  explicit FlagPoint(Matrix frame);

  static FlagPoint base(int dim);          // coordinate flag e_1 < (e_1, e_2) < ...
  static FlagPoint generic(int dim);       // a fixed flag in general position w.r.t. base

  int dim() const { return static_cast<int>(frame_.rows()); }
  const Matrix& frame() const { return frame_; }

 private:
  Matrix frame_;
};

// Largest principal-angle sine between corresponding flag subspaces,
// maximized over the levels j = 1..d-1.  A true metric on the flag variety,
// with values in [0, 1].
double flag_distance(const FlagPoint& a, const FlagPoint& b);

// g = k * exp(diag) * n with k orthogonal, diag the log of the positive
// diagonal, and n unit upper triangular.
struct IwasawaTriple {
  Matrix k;
  AVector log_diagonal;
  Matrix n;
};

IwasawaTriple iwasawa_decompose(const GroupElement& g);

// Log singular values of g, sorted decreasing; the K A+ K coordinate of g.
AVector cartan_projection(const GroupElement& g);

// The Iwasawa cocycle sigma(g, eta) together with the moved flag g.eta:
// if eta corresponds to the orthogonal frame F, then g F = F' exp(sigma) n
// with F' the frame of g.eta.
struct CocycleStep {
  AVector sigma;
  FlagPoint moved;
};

CocycleStep iwasawa_cocycle(const GroupElement& g, const FlagPoint& eta);

// Coordinates of sigma in the quotient E = a / a' of spec, expressed in the
// deterministic orthonormal basis spec.e_basis().
Vector project_cocycle(const AVector& sigma, const SubgroupSpec& spec);

// Accumulates sigma(b_n ... b_1, eta_0) one letter at a time while carrying
// the flag along, which is the numerically stable way to evaluate the cocycle
// of a long product: no matrix product is ever formed, so nothing overflows.
// The frame is re-orthonormalized periodically and the tiny correction that
// re-orthonormalization induces is folded back into the accumulator, so the
// invariant  (product) * frame_0 = frame * (positive upper triangular with
// log-diagonal = sigma)  holds to roundoff at every step.
class CocycleWalker {
 public:
  explicit CocycleWalker(const FlagPoint& eta0, int reorthogonalize_every = 64);

  void step(const GroupElement& g);

  int dim() const { return static_cast<int>(frame_.rows()); }
  long steps() const { return steps_; }
  // Accumulated cocycle; exactly zero-sum only up to roundoff, so callers
  // that need an AVector should recenter via the AVector constructor.
  const Vector& sigma() const { return sigma_; }
  FlagPoint flag() const { return FlagPoint(frame_); }
  const Matrix& frame_raw() const { return frame_; }

 private:
  Matrix frame_;
  Matrix work_;
  Vector sigma_;
  Vector log_diag_;
  long steps_ = 0;
  int reorth_every_;
};

// Log singular values of the running product b_n ... b_1, maintained through
// scaled exterior powers: the top singular value of the j-th exterior power
// is exp(kappa_1 + ... + kappa_j), and each exterior power is renormalized
// every step with the scale tracked in log form.  This keeps all j partial
// sums accurate even when the smallest singular values underflow any direct
// product representation.
class CartanTracker {
 public:
  explicit CartanTracker(int dim);

  void step(const GroupElement& g);
  long steps() const { return steps_; }
  // Current kappa(b_n ... b_1); decreasing and zero-sum up to roundoff.
  Vector kappa() const;

 private:
  int dim_;
  long steps_ = 0;
  std::vector<Matrix> power_;        // scaled j-th exterior power of the product
  std::vector<double> log_scale_;    // log of the factor taken out of power_[j]
  std::vector<Matrix> scratch_;
};

// Entries of the j-th exterior power of m, rows and columns indexed by
// j-element subsets in lexicographic order; entry (S, T) is the minor
// det m[S, T].
Matrix exterior_power(const Matrix& m, int j);

}  // namespace homwalk
