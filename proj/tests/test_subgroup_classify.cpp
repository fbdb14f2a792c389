#include <doctest.h>

#include <cmath>
#include <vector>

#include "homwalk/classify.hpp"
#include "homwalk/errors.hpp"
#include "homwalk/subgroup.hpp"
#include "test_util.hpp"

using namespace homwalk;

namespace {

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

Vector vec4(double a, double b, double c, double d) {
  Vector v(4);
  v << a, b, c, d;
  return v;
}

// Random zero-sum vector in R^d.
Vector random_trace_free(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = unif(rng);
  v.array() -= v.mean();
  return v;
}

LyapunovEstimate estimate_with(Vector mean, Vector std_error) {
  return LyapunovEstimate{AVector(std::move(mean)), std::move(std_error), 1000, 100};
}

}  // namespace

TEST_CASE("SubgroupSpec validates its inputs") {
  CHECK_THROWS_AS(SubgroupSpec(1, {}, UnipotentPart::FullN), Error);
  CHECK_THROWS_AS(SubgroupSpec(9, {}, UnipotentPart::FullN), Error);
  // Three vectors can never be independent in the 2-dimensional a of SL(3).
  CHECK_THROWS_AS(SubgroupSpec(3,
                               {vec3(1, -1, 0), vec3(0, 1, -1), vec3(1, 0, -1)},
                               UnipotentPart::FullN),
                  Error);
  // Not trace-free.
  CHECK_THROWS_AS(SubgroupSpec(3, {vec3(1, 0, 0)}, UnipotentPart::FullN), Error);
  // Wrong length.
  CHECK_THROWS_AS(SubgroupSpec(3, {vec4(1, -1, 0, 0)}, UnipotentPart::FullN), Error);
  // Dependent pair.
  CHECK_THROWS_AS(SubgroupSpec(4,
                               {vec4(1, -1, 0, 0), vec4(-2, 2, 0, 0)},
                               UnipotentPart::FullN),
                  Error);
  // Zero vector.
  CHECK_THROWS_AS(SubgroupSpec(3, {vec3(0, 0, 0)}, UnipotentPart::FullN), Error);
}

TEST_CASE("e_basis is an orthonormal zero-sum complement of a_prime") {
  auto rng = testutil::make_rng(11);
  for (int d = 2; d <= 8; ++d) {
    for (int m = 0; m < d - 1; ++m) {
      std::vector<Vector> basis;
      for (int j = 0; j < m; ++j) basis.push_back(random_trace_free(d, rng));
      SubgroupSpec spec(d, basis, UnipotentPart::FullN);
      CHECK(spec.a_dim() == d - 1);
      CHECK(spec.a_prime_dim() == m);
      CHECK(spec.codim() == d - 1 - m);

      const Matrix& on = spec.a_prime_orthonormal();
      const Matrix& e = spec.e_basis();
      REQUIRE(on.rows() == m);
      REQUIRE(e.rows() == spec.codim());
      if (m > 0)
        CHECK((on * on.transpose() - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((e * e.transpose() - Matrix::Identity(e.rows(), e.rows())).cwiseAbs().maxCoeff() <
            1e-10);
      if (m > 0) CHECK((e * on.transpose()).cwiseAbs().maxCoeff() < 1e-10);
      for (int r = 0; r < e.rows(); ++r) CHECK(std::abs(e.row(r).sum()) < 1e-10);
      for (int r = 0; r < m; ++r) CHECK(std::abs(on.row(r).sum()) < 1e-10);
      // The orthonormal rows really span the raw basis.
      for (const Vector& raw : basis) {
        const Vector back = on.transpose() * (on * raw);
        CHECK((back - raw).norm() < 1e-8 * (1.0 + raw.norm()));
      }
    }
  }
}

TEST_CASE("distance_to_subspace against a normal-equations oracle") {
  auto rng = testutil::make_rng(13);
  SUBCASE("empty basis measures the norm, members measure zero") {
    const Vector v = random_trace_free(4, rng);
    CHECK(distance_to_subspace(AVector(v), {}) == doctest::Approx(v.norm()).epsilon(1e-12));
    const Vector w = random_trace_free(4, rng);
    std::vector<Vector> basis{v, w};
    const Vector inside = 0.3 * v - 1.7 * w;
    CHECK(distance_to_subspace(AVector(inside), basis) < 1e-10);
  }
  SUBCASE("random instances") {
    for (int rep = 0; rep < 50; ++rep) {
      const int d = 3 + static_cast<int>(rng() % 5u);  // 3..7
      const int m = 1 + static_cast<int>(rng() % 2u);  // 1..2
      std::vector<Vector> basis;
      Matrix b(d, m);
      for (int j = 0; j < m; ++j) {
        basis.push_back(random_trace_free(d, rng));
        b.col(j) = basis.back();
      }
      const Vector v = random_trace_free(d, rng);
      const Vector coeff = (b.transpose() * b).fullPivLu().solve(b.transpose() * v);
      const double oracle = (v - b * coeff).norm();
      CHECK(distance_to_subspace(AVector(v), basis) ==
            doctest::Approx(oracle).epsilon(1e-10));
    }
  }
}

TEST_CASE("classify walks the decision tree") {
  const Vector tiny_se = Vector::Constant(3, 1e-6);
  SUBCASE("codim 0 is recurrent no matter the drift") {
    const SubgroupSpec spec(3, {vec3(1, -1, 0), vec3(1, 1, -2)}, UnipotentPart::FullN);
    REQUIRE(spec.codim() == 0);
    const auto v = classify(spec, estimate_with(vec3(0.9, -0.2, -0.7), tiny_se));
    CHECK(v.kind == VerdictKind::Recurrent);
    CHECK(v.reason == VerdictReason::CriterionMet);
  }
  SUBCASE("proper unipotent part is transient no matter the drift") {
    const SubgroupSpec spec(3, {vec3(1, -1, 0), vec3(1, 1, -2)}, UnipotentPart::ProperSubgroup);
    const auto v = classify(spec, estimate_with(vec3(0, 0, 0), tiny_se));
    CHECK(v.kind == VerdictKind::Transient);
    CHECK(v.reason == VerdictReason::ProperUnipotent);
  }
  SUBCASE("codim 2 with clear drift is transient for that reason") {
    const SubgroupSpec spec(3, {}, UnipotentPart::FullN);
    REQUIRE(spec.codim() == 2);
    const auto v = classify(spec, estimate_with(vec3(0.4, 0.0, -0.4), tiny_se));
    CHECK(v.kind == VerdictKind::Transient);
    CHECK(v.reason == VerdictReason::DriftOffAprime);
    CHECK(v.distance_to_aprime == doctest::Approx(vec3(0.4, 0.0, -0.4).norm()).epsilon(1e-12));
  }
  SUBCASE("codim >= 3 is transient even when centered") {
    const SubgroupSpec spec(4, {}, UnipotentPart::FullN);
    REQUIRE(spec.codim() == 3);
    const auto centered = classify(spec, estimate_with(vec4(0, 0, 0, 0), Vector::Constant(4, 1e-3)));
    CHECK(centered.kind == VerdictKind::Transient);
    CHECK(centered.reason == VerdictReason::CodimAtLeast3);
    const auto drifting = classify(spec, estimate_with(vec4(0.5, 0.1, -0.2, -0.4),
                                                       Vector::Constant(4, 1e-3)));
    CHECK(drifting.kind == VerdictKind::Transient);
    CHECK(drifting.reason == VerdictReason::DriftOffAprime);
  }
  SUBCASE("codim 1 with drift inside a_prime is recurrent") {
    const Vector dir = vec3(0.6, 0.1, -0.7);
    const SubgroupSpec spec(3, {dir}, UnipotentPart::FullN);
    REQUIRE(spec.codim() == 1);
    const auto v = classify(spec, estimate_with(1.3 * dir, Vector::Constant(3, 1e-3)));
    CHECK(v.kind == VerdictKind::Recurrent);
    CHECK(v.reason == VerdictReason::CriterionMet);
    CHECK(v.distance_to_aprime < v.threshold);
  }
  SUBCASE("the indeterminate band sits between T and 2T") {
    const SubgroupSpec spec(2, {}, UnipotentPart::FullN);
    const Vector se = Vector::Constant(2, 0.01);
    const double z = 4.0;
    const double threshold = z * se.norm() + 1e-9;
    Vector unit(2);
    unit << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    auto with_distance = [&](double dist) {
      return classify(spec, estimate_with(dist * unit, se), z);
    };
    CHECK(with_distance(0.99 * threshold).kind == VerdictKind::Recurrent);
    const auto mid = with_distance(1.5 * threshold);
    CHECK(mid.kind == VerdictKind::Indeterminate);
    CHECK(mid.reason == VerdictReason::StatisticallyAmbiguous);
    CHECK(mid.threshold == doctest::Approx(threshold).epsilon(1e-12));
    CHECK(with_distance(2.1 * threshold).kind == VerdictKind::Transient);
    CHECK(with_distance(2.1 * threshold).reason == VerdictReason::DriftOffAprime);
  }
}

TEST_CASE("classify is monotone under enlarging a_prime and basis-independent") {
  auto rng = testutil::make_rng(19);
  SUBCASE("enlarging a_prime never turns Recurrent into Transient") {
    for (int rep = 0; rep < 25; ++rep) {
      const int d = 4;
      const Vector v1 = random_trace_free(d, rng);
      const Vector v2 = random_trace_free(d, rng);
      const Vector v3 = random_trace_free(d, rng);
      const Vector drift = random_trace_free(d, rng) * 0.05;
      const Vector se = Vector::Constant(d, 0.02);
      const LyapunovEstimate est = estimate_with(drift, se);
      std::vector<SubgroupSpec> chain;
      chain.emplace_back(d, std::vector<Vector>{v1}, UnipotentPart::FullN);          // codim 2
      chain.emplace_back(d, std::vector<Vector>{v1, v2}, UnipotentPart::FullN);      // codim 1
      chain.emplace_back(d, std::vector<Vector>{v1, v2, v3}, UnipotentPart::FullN);  // codim 0
      bool recurrent_seen = false;
      for (const auto& spec : chain) {
        const auto verdict = classify(spec, est);
        if (recurrent_seen) CHECK(verdict.kind == VerdictKind::Recurrent);
        if (verdict.kind == VerdictKind::Recurrent) recurrent_seen = true;
      }
      CHECK(recurrent_seen);  // codim 0 terminates the chain recurrently
    }
  }
  SUBCASE("only the span of a_prime matters, not the basis") {
    const int d = 4;
    for (int rep = 0; rep < 25; ++rep) {
      const Vector v1 = random_trace_free(d, rng);
      const Vector v2 = random_trace_free(d, rng);
      const LyapunovEstimate est =
          estimate_with(random_trace_free(d, rng) * 0.03, Vector::Constant(d, 0.01));
      const SubgroupSpec a(d, {v1, v2}, UnipotentPart::FullN);
      const SubgroupSpec b(d, {Vector(v1 + v2), Vector(v1 - v2)}, UnipotentPart::FullN);
      const auto va = classify(a, est);
      const auto vb = classify(b, est);
      CHECK(va.kind == vb.kind);
      CHECK(va.reason == vb.reason);
      CHECK(va.distance_to_aprime == doctest::Approx(vb.distance_to_aprime).epsilon(1e-9));
    }
  }
  SUBCASE("classify is deterministic") {
    const SubgroupSpec spec(3, {}, UnipotentPart::FullN);
    const LyapunovEstimate est = estimate_with(vec3(0.1, 0.0, -0.1), Vector::Constant(3, 0.01));
    const auto a = classify(spec, est);
    const auto b = classify(spec, est);
    CHECK(a.kind == b.kind);
    CHECK(a.reason == b.reason);
    CHECK(a.distance_to_aprime == b.distance_to_aprime);
    CHECK(a.threshold == b.threshold);
  }
}

TEST_CASE("verdict names are stable strings") {
  CHECK(std::string(to_string(VerdictKind::Recurrent)) == "Recurrent");
  CHECK(std::string(to_string(VerdictKind::Transient)) == "Transient");
  CHECK(std::string(to_string(VerdictKind::Indeterminate)) == "Indeterminate");
  CHECK(std::string(to_string(VerdictReason::CriterionMet)) == "CriterionMet");
  CHECK(std::string(to_string(VerdictReason::ProperUnipotent)) == "ProperUnipotent");
  CHECK(std::string(to_string(VerdictReason::DriftOffAprime)) == "DriftOffAprime");
  CHECK(std::string(to_string(VerdictReason::CodimAtLeast3)) == "CodimAtLeast3");
  CHECK(std::string(to_string(VerdictReason::StatisticallyAmbiguous)) ==
        "StatisticallyAmbiguous");
}
