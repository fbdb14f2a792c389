#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "homwalk/decomp.hpp"
#include "homwalk/errors.hpp"
#include "homwalk/examples.hpp"
#include "test_util.hpp"

using namespace homwalk;

namespace {

Matrix diag2(double a) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = 1.0 / a;
  return m;
}

Matrix rot2(double a) {
  Matrix m(2, 2);
  m << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return m;
}

// Random diagonal +-1 matrix, the sign ambiguity of a flag representative.
Matrix random_signs(int d, std::mt19937_64& rng) {
  Matrix s = Matrix::Identity(d, d);
  for (int i = 0; i < d; ++i)
    if (rng() & 1u) s(i, i) = -1.0;
  return s;
}

}  // namespace

TEST_CASE("AVector recenters and rejects") {
  Vector v(3);
  v << 1.0, -0.25, -0.75;
  CHECK(AVector(v).coords() == v);

  Vector nudged = v.array() + 1e-12;  // sum 3e-12: inside tolerance, recentred
  const AVector recentred{Vector(nudged)};
  CHECK(std::abs(recentred.coords().sum()) < 1e-15);
  CHECK((recentred.coords() - v).cwiseAbs().maxCoeff() < 1e-11);

  Vector off(3);
  off << 1.0, 0.0, 0.0;  // sum 1: rejected
  CHECK_THROWS_AS(AVector{off}, Error);
}

TEST_CASE("flag points validate orthonormality and expose fixed flags") {
  CHECK(FlagPoint::base(3).frame() == Matrix::Identity(3, 3));
  const auto gen = FlagPoint::generic(4);
  CHECK((gen.frame().transpose() * gen.frame() - Matrix::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK(flag_distance(gen, FlagPoint::base(4)) > 0.1);  // transversal, far from base

  Matrix skewed(2, 2);
  skewed << 1, 1, 0, 1;
  CHECK_THROWS_AS(FlagPoint{skewed}, Error);
}

TEST_CASE("flag_distance is a sign-invariant metric") {
  auto rng = testutil::make_rng(17);
  SUBCASE("d=2 closed form: distance of two lines is |sin| of the angle gap") {
    for (double a : {0.0, 0.3, 1.1}) {
      for (double b : {0.2, 0.9, 2.7}) {
        const FlagPoint fa{rot2(a)}, fb{rot2(b)};
        CHECK(flag_distance(fa, fb) ==
              doctest::Approx(std::abs(std::sin(a - b))).epsilon(1e-10));
      }
    }
  }
  SUBCASE("matches the Gram-matrix principal-angle oracle") {
    for (int d : {3, 5}) {
      for (int rep = 0; rep < 20; ++rep) {
        const Matrix a = testutil::random_frame(d, rng);
        const Matrix b = testutil::random_frame(d, rng);
        double oracle = 0.0;
        for (int j = 1; j < d; ++j)
          oracle = std::max(oracle, testutil::principal_angle_sine(a, b, j));
        CHECK(flag_distance(FlagPoint(a), FlagPoint(b)) ==
              doctest::Approx(oracle).epsilon(1e-8));
      }
    }
  }
  SUBCASE("metric axioms and sign invariance") {
    const int d = 4;
    std::vector<FlagPoint> pts;
    for (int i = 0; i < 4; ++i) pts.emplace_back(testutil::random_frame(d, rng));
    for (const auto& p : pts) {
      CHECK(flag_distance(p, p) < 1e-14);
      const FlagPoint flipped{Matrix(p.frame() * random_signs(d, rng))};
      CHECK(flag_distance(p, flipped) < 1e-12);
    }
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j) {
        const double dij = flag_distance(pts[i], pts[j]);
        CHECK(dij == doctest::Approx(flag_distance(pts[j], pts[i])).epsilon(1e-12));
        for (size_t k = 0; k < pts.size(); ++k)
          CHECK(dij <= flag_distance(pts[i], pts[k]) + flag_distance(pts[k], pts[j]) + 1e-12);
      }
  }
}

TEST_CASE("iwasawa_decompose reconstructs with the advertised shapes") {
  SUBCASE("identity and diagonal cases") {
    const auto id = iwasawa_decompose(GroupElement(Matrix::Identity(3, 3)));
    CHECK(id.log_diagonal.coords() == Vector::Zero(3));
    CHECK(id.k == Matrix::Identity(3, 3));
    CHECK(id.n == Matrix::Identity(3, 3));

    const auto dd = iwasawa_decompose(GroupElement(diag2(2.0)));
    CHECK(dd.log_diagonal(0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(dd.log_diagonal(1) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
  }
  SUBCASE("random elements: exact reconstruction, orthogonal k, unipotent n") {
    auto rng = testutil::make_rng(23);
    for (int d = 2; d <= 8; ++d) {
      for (int rep = 0; rep < 50; ++rep) {
        const auto g = testutil::random_element(d, rng);
        const auto t = iwasawa_decompose(g);
        CHECK((t.k.transpose() * t.k - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
        for (int i = 0; i < d; ++i) {
          CHECK(t.n(i, i) == 1.0);
          for (int j = 0; j < i; ++j) CHECK(t.n(i, j) == 0.0);
        }
        const Matrix rebuilt =
            t.k * t.log_diagonal.coords().array().exp().matrix().asDiagonal() * t.n;
        CHECK((rebuilt - g.matrix()).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
  SUBCASE("agrees with the classical Gram-Schmidt oracle") {
    auto rng = testutil::make_rng(29);
    for (int rep = 0; rep < 30; ++rep) {
      const auto g = testutil::random_element(4, rng);
      const auto t = iwasawa_decompose(g);
      const auto [q, r] = testutil::classical_gram_schmidt(g.matrix());
      CHECK((t.k - q).cwiseAbs().maxCoeff() < 1e-8);
      for (int i = 0; i < 4; ++i)
        CHECK(t.log_diagonal(i) == doctest::Approx(std::log(r(i, i))).epsilon(1e-8));
    }
  }
}

TEST_CASE("cartan_projection: order, symmetry and closed forms") {
  SUBCASE("diagonal and shear closed forms") {
    const auto kappa = cartan_projection(GroupElement(diag2(0.5)));
    CHECK(kappa(0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(kappa(1) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));

    // Unit shear: singular values are the golden ratio and its inverse.
    Matrix shear(2, 2);
    shear << 1, 1, 0, 1;
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const auto ks = cartan_projection(GroupElement(shear));
    CHECK(ks(0) == doctest::Approx(std::log(phi)).epsilon(1e-12));
  }
  SUBCASE("sorted, zero-sum, symmetric under inverse") {
    auto rng = testutil::make_rng(31);
    for (int d : {2, 4, 7}) {
      for (int rep = 0; rep < 40; ++rep) {
        const auto g = testutil::random_element(d, rng);
        const auto kappa = cartan_projection(g);
        CHECK(std::abs(kappa.coords().sum()) < 1e-12);
        for (int i = 0; i + 1 < d; ++i) CHECK(kappa(i) >= kappa(i + 1) - 1e-12);
        const auto kinv = cartan_projection(g.inverse());
        for (int i = 0; i < d; ++i)
          CHECK(kinv(i) == doctest::Approx(-kappa(d - 1 - i)).epsilon(1e-9));
      }
    }
  }
  SUBCASE("top coordinate is the log operator norm") {
    auto rng = testutil::make_rng(37);
    for (int rep = 0; rep < 50; ++rep) {
      const auto g = testutil::random_element(3, rng);
      CHECK(cartan_projection(g)(0) ==
            doctest::Approx(std::log(testutil::operator_norm(g.matrix()))).epsilon(1e-10));
    }
  }
  SUBCASE("sub-additivity of the top coordinate") {
    auto rng = testutil::make_rng(41);
    for (int rep = 0; rep < 30; ++rep) {
      const auto a = testutil::random_element(3, rng);
      const auto b = testutil::random_element(3, rng);
      CHECK(cartan_projection(a * b)(0) <=
            cartan_projection(a)(0) + cartan_projection(b)(0) + 1e-10);
    }
  }
}

TEST_CASE("iwasawa_cocycle: identity, invariance, bridges") {
  auto rng = testutil::make_rng(43);
  SUBCASE("cocycle identity with matching moved flags") {
    for (int d : {2, 3, 4}) {
      for (int rep = 0; rep < 200; ++rep) {
        const auto g = testutil::random_element(d, rng);
        const auto h = testutil::random_element(d, rng);
        const FlagPoint eta{testutil::random_frame(d, rng)};
        const auto right = iwasawa_cocycle(h, eta);
        const auto outer = iwasawa_cocycle(g, right.moved);
        const auto direct = iwasawa_cocycle(g * h, eta);
        CHECK((direct.sigma.coords() - outer.sigma.coords() - right.sigma.coords())
                  .cwiseAbs()
                  .maxCoeff() < 1e-9);
        CHECK(flag_distance(direct.moved, outer.moved) < 1e-9);
      }
    }
  }
  SUBCASE("independent of the sign representative") {
    for (int rep = 0; rep < 20; ++rep) {
      const int d = 4;
      const auto g = testutil::random_element(d, rng);
      const Matrix frame = testutil::random_frame(d, rng);
      const FlagPoint eta{frame};
      const FlagPoint eta_flipped{Matrix(frame * random_signs(d, rng))};
      const auto a = iwasawa_cocycle(g, eta);
      const auto b = iwasawa_cocycle(g, eta_flipped);
      CHECK((a.sigma.coords() - b.sigma.coords()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(flag_distance(a.moved, b.moved) < 1e-12);
    }
  }
  SUBCASE("at the base flag the cocycle is the Iwasawa log-diagonal") {
    for (int rep = 0; rep < 20; ++rep) {
      const auto g = testutil::random_element(3, rng);
      const auto step = iwasawa_cocycle(g, FlagPoint::base(3));
      const auto t = iwasawa_decompose(g);
      CHECK((step.sigma.coords() - t.log_diagonal.coords()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("d=2: first coordinate measures the stretch of the flag line") {
    for (int rep = 0; rep < 100; ++rep) {
      const auto g = testutil::random_element(2, rng);
      const Matrix frame = testutil::random_frame(2, rng);
      const auto step = iwasawa_cocycle(g, FlagPoint(frame));
      const double stretch = (g.matrix() * frame.col(0)).norm() / frame.col(0).norm();
      CHECK(step.sigma(0) == doctest::Approx(std::log(stretch)).epsilon(1e-9));
    }
  }
}

TEST_CASE("project_cocycle applies the quotient basis") {
  const SubgroupSpec spec(3, {}, UnipotentPart::FullN);  // a' = 0: E = a
  Vector v(3);
  v << 0.4, 0.1, -0.5;
  const AVector sigma{v};
  const Vector projected = project_cocycle(sigma, spec);
  REQUIRE(projected.size() == 2);
  // An orthonormal basis of a preserves the norm of a zero-sum vector.
  CHECK(projected.norm() == doctest::Approx(v.norm()).epsilon(1e-12));
}

TEST_CASE("cocycle walker tracks long products without forming them") {
  SUBCASE("telescoping: walker sigma equals the sum of single-step cocycles") {
    const auto mu = examples::sl3_generic();
    const auto word = sample_word(mu, RandomStream(51, 0), 300);
    CocycleWalker walker(FlagPoint::base(3));
    Vector manual = Vector::Zero(3);
    FlagPoint eta = FlagPoint::base(3);
    for (const auto& g : word) {
      walker.step(g);
      const auto step = iwasawa_cocycle(g, eta);
      manual += step.sigma.coords();
      eta = step.moved;
    }
    CHECK((walker.sigma() - manual).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(flag_distance(walker.flag(), eta) < 1e-9);
  }
  SUBCASE("incremental evaluation matches one decomposition of the full product") {
    // Horizons are capped where the plain product's determinant is still
    // computable; past that only the walker itself remains meaningful.
    const auto mu = examples::sl2_hyperbolic();
    for (long n : {10L, 30L, 60L}) {
      const auto word = sample_word(mu, RandomStream(52, 1), static_cast<int>(n));
      CocycleWalker walker(FlagPoint::base(2));
      for (const auto& g : word) walker.step(g);
      const auto direct = iwasawa_cocycle(left_product(word), FlagPoint::base(2));
      CHECK((walker.sigma() - direct.sigma.coords()).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
  SUBCASE("re-orthonormalization cadence does not change the answer") {
    const auto mu = examples::sl3_generic();
    const auto word = sample_word(mu, RandomStream(53, 2), 500);
    CocycleWalker every_step(FlagPoint::generic(3), 1);
    CocycleWalker sparse(FlagPoint::generic(3), 64);
    for (const auto& g : word) {
      every_step.step(g);
      sparse.step(g);
    }
    CHECK((every_step.sigma() - sparse.sigma()).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("exterior powers and the Cartan tracker") {
  auto rng = testutil::make_rng(59);
  SUBCASE("exterior power is multiplicative and realizes minors") {
    const Matrix a = testutil::random_unimodular(4, rng);
    const Matrix b = testutil::random_unimodular(4, rng);
    for (int j = 1; j <= 4; ++j) {
      const Matrix lhs = exterior_power(a * b, j);
      const Matrix rhs = exterior_power(a, j) * exterior_power(b, j);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK(exterior_power(a, 4)(0, 0) == doctest::Approx(a.determinant()).epsilon(1e-12));
    // Singular values of the j-th power are products of j distinct singular values.
    const Matrix c = testutil::random_unimodular(3, rng);
    Eigen::JacobiSVD<Matrix> base_svd(c);
    const Vector s = base_svd.singularValues();
    Eigen::JacobiSVD<Matrix> pow_svd(exterior_power(c, 2));
    const Vector s2 = pow_svd.singularValues();
    CHECK(s2(0) == doctest::Approx(s(0) * s(1)).epsilon(1e-10));
    CHECK(s2(1) == doctest::Approx(s(0) * s(2)).epsilon(1e-10));
    CHECK(s2(2) == doctest::Approx(s(1) * s(2)).epsilon(1e-10));
  }
  SUBCASE("tracker matches the direct Cartan projection of the product") {
    // Short horizon: the direct product is only trustworthy while its entries
    // stay small enough for the determinant check to be meaningful.
    const auto mu = examples::sl3_generic();
    const auto word = sample_word(mu, RandomStream(61, 3), 60);
    CartanTracker tracker(3);
    std::vector<GroupElement> prefix;
    for (const auto& g : word) {
      tracker.step(g);
      prefix.push_back(g);
    }
    const auto direct = cartan_projection(left_product(prefix));
    CHECK((tracker.kappa() - direct.coords()).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(std::abs(tracker.kappa().sum()) < 1e-12);
  }
  SUBCASE("tracker survives horizons where the plain product overflows") {
    const auto mu = examples::sl3_generic();
    RandomStream stream(67, 4);
    CartanTracker tracker(3);
    for (int i = 0; i < 20000; ++i) tracker.step(mu.atom(stream.next_atom(mu)).element);
    const Vector kappa = tracker.kappa();
    CHECK(std::isfinite(kappa(0)));
    CHECK(kappa(0) > 0.0);  // ~ n * top Lyapunov exponent
    CHECK(kappa(0) >= kappa(1));
    CHECK(kappa(1) >= kappa(2));
  }
}
