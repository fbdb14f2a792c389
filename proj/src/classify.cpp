#include "homwalk/classify.hpp"

#include <cmath>
#include <string>

namespace homwalk {

const char* to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Recurrent: return "Recurrent";
    case VerdictKind::Transient: return "Transient";
    case VerdictKind::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

const char* to_string(VerdictReason reason) {
  switch (reason) {
    case VerdictReason::ProperUnipotent: return "ProperUnipotent";
    case VerdictReason::DriftOffAprime: return "DriftOffAprime";
    case VerdictReason::CodimAtLeast3: return "CodimAtLeast3";
    case VerdictReason::CriterionMet: return "CriterionMet";
    case VerdictReason::StatisticallyAmbiguous: return "StatisticallyAmbiguous";
  }
  return "Unknown";
}

double distance_to_subspace(const AVector& v, const std::vector<Vector>& basis) {
  if (basis.empty()) return v.norm();
  const int d = v.dim();
  Matrix b(d, static_cast<int>(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j) {
    require(basis[j].size() == d, ErrorCode::DimensionMismatch,
            "basis vector " + std::to_string(j) + " has the wrong length");
    b.col(static_cast<int>(j)) = basis[j];
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(b);
  require(qr.rank() == b.cols(), ErrorCode::DependentBasis,
          "span basis is linearly dependent");
  const Vector coeff = qr.solve(v.coords());
  return (v.coords() - b * coeff).norm();
}

Verdict classify(const SubgroupSpec& spec, const LyapunovEstimate& drift, double z) {
  require(spec.dim() == drift.mean.dim(), ErrorCode::DimensionMismatch,
          "subgroup and drift estimate live in different dimensions");
  require(z > 0.0, ErrorCode::DimensionMismatch, "confidence multiplier must be positive");

  const double distance = distance_to_subspace(drift.mean, spec.a_prime_basis());
  const double threshold = z * drift.std_error.norm() + 1e-9;

  if (spec.unipotent_part() == UnipotentPart::ProperSubgroup)
    return Verdict{VerdictKind::Transient, VerdictReason::ProperUnipotent, distance, threshold};

  if (spec.codim() == 0)
    return Verdict{VerdictKind::Recurrent, VerdictReason::CriterionMet, distance, threshold};

  if (spec.codim() >= 3) {
    const auto reason = distance > 2.0 * threshold ? VerdictReason::DriftOffAprime
                                                   : VerdictReason::CodimAtLeast3;
    return Verdict{VerdictKind::Transient, reason, distance, threshold};
  }

  if (distance <= threshold)
    return Verdict{VerdictKind::Recurrent, VerdictReason::CriterionMet, distance, threshold};
  if (distance <= 2.0 * threshold)
    return Verdict{VerdictKind::Indeterminate, VerdictReason::StatisticallyAmbiguous, distance,
                   threshold};
  return Verdict{VerdictKind::Transient, VerdictReason::DriftOffAprime, distance, threshold};
}

}  // namespace homwalk
