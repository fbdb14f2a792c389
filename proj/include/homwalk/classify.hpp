#pragma once

#include "homwalk/lyapunov.hpp"
#include "homwalk/subgroup.hpp"

namespace homwalk {

enum class VerdictKind { Recurrent, Transient, Indeterminate };

enum class VerdictReason {
  ProperUnipotent,         // unipotent part is proper: transient regardless of drift
  DriftOffAprime,          // drift is statistically nonzero in the quotient
  CodimAtLeast3,           // quotient dimension 3 or more: transient even when centered
  CriterionMet,            // full N, codim <= 2, drift consistent with a'
  StatisticallyAmbiguous,  // drift within twice the threshold but not inside it
};

struct Verdict {
  VerdictKind kind;
  VerdictReason reason;
  double distance_to_aprime;  // distance of the drift estimate to span(a')
  double threshold;           // statistical scale the distance was compared against
};

const char* to_string(VerdictKind kind);
const char* to_string(VerdictReason reason);

// Euclidean distance from v to the span of the given vectors (all in a).
// An empty basis means the span is {0}.
double distance_to_subspace(const AVector& v, const std::vector<Vector>& basis);

// Decides recurrence or transience of the walk on G / (A' N') from the
// drift estimate.  The decision tree:
//   - proper unipotent part            -> Transient / ProperUnipotent
//   - codim 0 (a' = a, full N)         -> Recurrent / CriterionMet
//   - otherwise compare D = dist(drift, a') with T = z * |std error| + 1e-9:
//       codim >= 3                     -> Transient, reason CodimAtLeast3
//                                         (DriftOffAprime when D > 2T)
//       codim 1 or 2,  D <= T          -> Recurrent / CriterionMet
//       codim 1 or 2,  T < D <= 2T     -> Indeterminate / StatisticallyAmbiguous
//       codim 1 or 2,  D > 2T          -> Transient / DriftOffAprime
Verdict classify(const SubgroupSpec& spec, const LyapunovEstimate& drift, double z = 4.0);

}  // namespace homwalk
