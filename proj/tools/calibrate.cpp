// Calibration utility for the bundled example configurations.  Each task
// runs one family of measurements at a scale chosen so its statistical error
// is far below the tolerance of the matching check in the test suite; the
// printed numbers are the source of the frozen constants in
// src/examples.cpp and of the default radii/thresholds in the tests.
//
//   calibrate drift          long-run SL(3) Lyapunov vector (freezes the drift line)
//   calibrate margins        per-step spread and deviation-threshold scan (d = 2)
//   calibrate green          verdicts + Green-curve behavior of the four walk configs
//   calibrate clt            moment/KS diagnostics of the near-centered d = 2 measure
//   calibrate spectrum       eigenvalue curve vs Monte Carlo drift and variance
//   calibrate boundary       stationary grid measure vs boundary sampling (W1)
//   calibrate gap            sigma-kappa late-window oscillation fractions
//   calibrate density        visited-set coverage of the recurrent configuration
//   calibrate write-configs  regenerate configs/*.json from the example builders
//
// One optional flag, --fast, cuts every sample count for smoke runs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "homwalk/classify.hpp"
#include "homwalk/examples.hpp"
#include "homwalk/io.hpp"
#include "homwalk/lyapunov.hpp"
#include "homwalk/transfer.hpp"
#include "homwalk/walk.hpp"

namespace {

using namespace homwalk;

bool g_fast = false;
int scaled(int full) { return g_fast ? std::max(10, full / 20) : full; }
long scaled_l(long full) { return g_fast ? std::max<long>(100, full / 20) : full; }

void task_drift() {
  const auto mu = examples::sl3_generic();
  const auto lyap = estimate_lyapunov(mu, scaled_l(20000), scaled(2000), 424242, {0});
  std::printf("sl3_generic Lyapunov vector (n=%ld, T=%ld):\n", lyap.n_steps,
              lyap.n_trajectories);
  for (int i = 0; i < 3; ++i)
    std::printf("  mean[%d] = %+.12f   se = %.3e\n", i, lyap.mean(i), lyap.std_error(i));
  const Vector dir = lyap.mean.coords() / lyap.mean.coords().norm();
  std::printf("normalized direction (paste into sl3_drift_direction):\n");
  for (int i = 0; i < 3; ++i) std::printf("  %.17g\n", dir(i));
}

void task_margins() {
  const auto mu = examples::sl2_hyperbolic();
  const auto spec = examples::sl2_full();
  const auto lyap = estimate_lyapunov(mu, scaled_l(10000), scaled(400), 7, {0});
  const double drift_e = (spec.e_basis() * lyap.mean.coords())(0);
  const auto cov = estimate_covariance(mu, spec, scaled_l(4000), scaled(2000), 11, {0});
  std::printf("sl2_hyperbolic: projected drift %.6f, per-step variance %.6f (sd %.4f)\n",
              drift_e, cov.matrix(0, 0), std::sqrt(cov.matrix(0, 0)));

  for (double threshold : {0.20, 0.30, 0.40, 0.50, 0.60}) {
    const auto ldp = large_deviation_decay(mu, spec, FlagPoint::base(2), threshold, 20,
                                           scaled(10000), 21, {0});
    int finite = 0;
    for (double y : ldp.log_frequency)
      if (std::isfinite(y)) ++finite;
    std::printf("  threshold %.2f: slope %+.4f  R^2 %.4f  finite points %d/20\n", threshold,
                ldp.slope, ldp.r_squared, finite);
  }
}

struct GreenSummary {
  Verdict verdict;
  double plateau_change;     // relative change of the curve over the last quarter
  double late_return_frac;   // trajectories whose last return is past the midpoint
  double green_end;
};

GreenSummary green_behavior(const FiniteMeasure& mu, const SubgroupSpec& spec, double radius,
                            long n_steps, int n_trajectories, std::uint64_t seed,
                            bool symmetrize) {
  GreenSummary s{classify(spec, estimate_lyapunov(mu, scaled_l(2000), scaled(200),
                                                  derive_seed(seed, 9), {0})),
                 0, 0, 0};
  WalkOptions wopts;
  wopts.symmetrize = symmetrize;
  std::vector<double> mean_curve(static_cast<size_t>(n_steps) + 1, 0.0);
  int late = 0;
  for (int t = 0; t < n_trajectories; ++t) {
    const auto traj = simulate_walk(mu, spec, FlagPoint::base(mu.dim()),
                                    Vector::Zero(spec.codim()), n_steps, seed,
                                    static_cast<std::uint64_t>(t), wopts);
    const auto stats = return_stats(traj, radius);
    if (stats.last_exit > n_steps / 2) ++late;
    for (size_t i = 0; i < mean_curve.size(); ++i)
      mean_curve[i] += static_cast<double>(stats.green_partial[i]);
  }
  for (auto& v : mean_curve) v /= n_trajectories;
  const double g_end = mean_curve.back();
  const double g_3q = mean_curve[static_cast<size_t>(3 * n_steps / 4)];
  s.plateau_change = g_3q > 0 ? (g_end - g_3q) / g_3q : (g_end > 0 ? 1.0 : 0.0);
  s.late_return_frac = static_cast<double>(late) / n_trajectories;
  s.green_end = g_end;
  return s;
}

void task_green() {
  const long n = scaled_l(100000);
  const int T = scaled(200);

  struct Config {
    const char* name;
    FiniteMeasure mu;
    SubgroupSpec spec;
    bool symmetrize;
    double radius;  // <= 0 means: use calibrate_radius(0.9)
  };
  std::vector<Config> configs;
  configs.push_back({"proper-N (d=2)", examples::sl2_hyperbolic(), examples::sl2_proper_n(),
                     false, 2.0});
  configs.push_back({"drift off a' (d=3)", examples::sl3_generic(), examples::sl3_drift_off(),
                     false, 2.0});
  configs.push_back({"symmetrized (d=4)", examples::sl4_generic(), examples::sl4_codim3(),
                     true, 2.0});
  configs.push_back({"recurrent (d=3)", examples::sl3_generic(), examples::sl3_recurrent(),
                     false, -1.0});

  for (auto& c : configs) {
    double radius = c.radius;
    if (radius <= 0) {
      WalkOptions wopts;
      wopts.symmetrize = c.symmetrize;
      radius = calibrate_radius(c.mu, c.spec, FlagPoint::base(c.mu.dim()),
                                Vector::Zero(c.spec.codim()), n, std::min(T, 50),
                                derive_seed(5, 1), 0.9, wopts, {0});
    }
    const auto s = green_behavior(c.mu, c.spec, radius, n, T, 5, c.symmetrize);
    std::printf("%-20s verdict %-13s radius %7.3f  plateau-change %7.4f%%  late-frac %.3f  G(N) %.2f\n",
                c.name, to_string(s.verdict.kind), radius, 100.0 * s.plateau_change,
                s.late_return_frac, s.green_end);
  }
}

void task_clt() {
  const auto mu = examples::sl2_centered();
  const auto spec = examples::sl2_full();
  const auto drift = estimate_lyapunov(mu, scaled_l(2000), scaled(200), derive_seed(3, 1), {0});
  std::printf("sl2_centered drift: mean (%.3e, %.3e), se (%.2e, %.2e)\n", drift.mean(0),
              drift.mean(1), drift.std_error(0), drift.std_error(1));
  const auto report = clt_diagnostics(mu, spec, drift, scaled_l(2000), scaled(10000), 3, {0});
  const auto show = [](const char* tag, const MarginalStats& m) {
    std::printf("  %s: var %.5f skew %+.4f exkurt %+.4f KS %.5f band %.5f\n", tag, m.variance,
                m.skewness, m.excess_kurtosis, m.ks_statistic, m.ks_band);
  };
  show("base ", report.base_flag[0]);
  show("probe", report.probe_flag[0]);
}

void task_spectrum() {
  const auto hyper = examples::sl2_hyperbolic();
  const auto spec = examples::sl2_full();
  const int n_points = 1024;

  const auto at0 = leading_eigen(hyper, {0.0, 0.0}, spec, n_points);
  std::printf("sl2_hyperbolic: lambda0 = %.15f + %.2ei, rest radius %.4f, iters %d\n",
              at0.lambda.real(), at0.lambda.imag(), at0.rest_radius, at0.iterations);
  double worst = 0;
  for (int j = 1; j <= 8; ++j) {
    const auto r = leading_eigen(hyper, {0.0, 0.125 * j}, spec, n_points);
    worst = std::max(worst, std::abs(r.lambda));
    std::printf("  s=%.3f |lambda| %.6f rest %.4f\n", 0.125 * j, std::abs(r.lambda),
                r.rest_radius);
  }
  std::printf("  imaginary-axis gap delta = %.6f\n", 1.0 - worst);

  const auto lyap = estimate_lyapunov(hyper, scaled_l(10000), scaled(400), 7, {0});
  const double drift_e = (spec.e_basis() * lyap.mean.coords())(0);
  for (double t : {1e-3, 2e-3, 4e-3}) {
    const auto [d1, d2] = log_lambda_derivatives(hyper, spec, 1.0, t, n_points);
    std::printf("  t=%.0e dLambda %.6f (MC %.6f, rel diff %+.3f%%), d2 %.6f\n", t, d1,
                drift_e, 100.0 * (d1 - drift_e) / drift_e, d2);
  }
  const auto big = leading_eigen(hyper, {0.0, 0.0}, spec, 2 * n_points);
  std::printf("  grid doubling |dlambda| = %.3e\n", std::abs(big.lambda - at0.lambda));

  const auto centered = examples::sl2_centered();
  const auto drift_c =
      estimate_lyapunov(centered, scaled_l(1000), scaled(200), derive_seed(13, 1), {0});
  const auto cov_c = estimate_covariance(centered, spec, scaled_l(2000), scaled(1000), 13, {0});
  const double gate = (spec.e_basis() * drift_c.mean.coords())(0);
  const double gate_se = (spec.e_basis().row(0).cwiseAbs2() *
                          drift_c.std_error.cwiseAbs2().matrix())(0);
  std::printf("sl2_centered: drift along e %.3e (4*se = %.3e), variance %.6f (se-rel %.3f%%)\n",
              gate, 4.0 * std::sqrt(gate_se), cov_c.matrix(0, 0),
              100.0 / std::sqrt(static_cast<double>(cov_c.n_samples / 2)));
  for (double t : {1e-3, 2e-3, 4e-3}) {
    const auto check = second_derivative_check(centered, spec, drift_c, cov_c, 1.0, t, n_points);
    std::printf("  t=%.0e spectral %.6f vs MC %.6f  rel diff %+.3f%%\n", t, check.spectral,
                check.monte_carlo,
                100.0 * (check.spectral - check.monte_carlo) / check.monte_carlo);
  }
}

// 1-Wasserstein distance between two mass vectors on the circle, in units of
// grid cells: optimal-rotation transport cost of the prefix-difference curve.
double w1_circle_cells(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(a.size());
  std::vector<double> prefix(static_cast<size_t>(n));
  double run = 0;
  for (int i = 0; i < n; ++i) {
    run += a(i) - b(i);
    prefix[static_cast<size_t>(i)] = run;
  }
  std::vector<double> sorted = prefix;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double median = sorted[static_cast<size_t>(n / 2)];
  double cost = 0;
  for (double p : prefix) cost += std::abs(p - median);
  return cost;
}

void task_boundary() {
  const auto mu = examples::sl2_hyperbolic();
  const int n_points = 1024;
  const auto nu = stationary_measure(mu, n_points);

  const int n_samples = scaled(20000);
  Eigen::VectorXd empirical = Eigen::VectorXd::Zero(n_points);
  double worst_certificate = 0;
  for (int t = 0; t < n_samples; ++t) {
    const auto b = boundary_point(mu, 100, 2024, static_cast<std::uint64_t>(t));
    worst_certificate = std::max(worst_certificate, b.certificate);
    const double x = std::atan2(b.point.frame()(1, 0), b.point.frame()(0, 0));
    double u = x / std::numbers::pi;
    u -= std::floor(u);  // angle mod pi mapped to [0,1)
    int cell = static_cast<int>(u * n_points) & (n_points - 1);
    empirical(cell) += 1.0;
  }
  empirical /= empirical.sum();
  std::printf("boundary sampling vs grid stationary measure: W1 = %.3f cells (budget 3), "
              "worst certificate %.2e\n",
              w1_circle_cells(nu, empirical), worst_certificate);
}

void task_gap() {
  for (const auto& [name, mu] :
       {std::pair<const char*, FiniteMeasure>{"sl2_hyperbolic", examples::sl2_hyperbolic()},
        std::pair<const char*, FiniteMeasure>{"sl3_generic", examples::sl3_generic()}}) {
    const long n = scaled_l(1000);
    int ok = 0;
    const int T = scaled(100);
    for (int t = 0; t < T; ++t) {
      const auto gap = sigma_kappa_gap(mu, FlagPoint::base(mu.dim()), n, 2025,
                                       static_cast<std::uint64_t>(t));
      double lo = gap[static_cast<size_t>(n / 2)], hi = lo;
      for (size_t i = static_cast<size_t>(n / 2); i < gap.size(); ++i) {
        lo = std::min(lo, gap[i]);
        hi = std::max(hi, gap[i]);
      }
      if (hi - lo < 1e-3) ++ok;
    }
    std::printf("%s: late-window oscillation < 1e-3 on %d/%d trajectories\n", name, ok, T);
  }
}

void task_density() {
  const auto mu = examples::sl3_generic();
  const auto spec = examples::sl3_recurrent();
  const long n = scaled_l(100000);
  const int T = scaled(100);
  int covered_all = 0;
  for (int t = 0; t < T; ++t) {
    const auto traj = simulate_walk(mu, spec, FlagPoint::base(3), Vector::Zero(1), n, 99,
                                    static_cast<std::uint64_t>(t));
    bool ok = true;
    for (double target = -2.0; target <= 2.0 + 1e-12; target += 0.5) {
      bool hit = false;
      for (long i = 0; i <= n && !hit; ++i)
        hit = std::abs(traj.points(i, 0) - target) < 0.5;
      ok = ok && hit;
    }
    if (ok) ++covered_all;
  }
  std::printf("recurrent d=3 visited-set coverage of the grid in B(0,2): %d/%d trajectories\n",
              covered_all, T);
}

void task_write_configs(const std::string& dir) {
  const auto write = [&](const std::string& name, const Json& j) {
    write_text_file(dir + "/" + name, j.dump(2) + "\n");
    std::printf("wrote %s/%s\n", dir.c_str(), name.c_str());
  };
  write("sl2_hyperbolic.measure.json", measure_to_json(examples::sl2_hyperbolic()));
  write("sl2_centered.measure.json", measure_to_json(examples::sl2_centered()));
  write("sl2_rotation.measure.json", measure_to_json(examples::sl2_rotation()));
  write("sl3_generic.measure.json", measure_to_json(examples::sl3_generic()));
  write("sl4_generic.measure.json", measure_to_json(examples::sl4_generic()));
  write("sl2_full.spec.json", subgroup_to_json(examples::sl2_full()));
  write("sl2_proper_n.spec.json", subgroup_to_json(examples::sl2_proper_n()));
  write("sl3_drift_off.spec.json", subgroup_to_json(examples::sl3_drift_off()));
  write("sl3_recurrent.spec.json", subgroup_to_json(examples::sl3_recurrent()));
  write("sl4_codim3.spec.json", subgroup_to_json(examples::sl4_codim3()));

  Json example_matrix;
  example_matrix["matrix"] = Json::array({Json::array({1.0, 1.0}), Json::array({0.0, 1.0})});
  write("shear.matrix.json", example_matrix);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string task;
  std::string dir = "configs";
  for (const auto& a : args) {
    if (a == "--fast")
      g_fast = true;
    else if (a.rfind("--dir=", 0) == 0)
      dir = a.substr(6);
    else
      task = a;
  }
  if (task.empty()) {
    std::fprintf(stderr,
                 "usage: calibrate {drift|margins|green|clt|spectrum|boundary|gap|density|"
                 "write-configs|all} [--fast] [--dir=configs]\n");
    return 1;
  }
  try {
    if (task == "drift" || task == "all") task_drift();
    if (task == "margins" || task == "all") task_margins();
    if (task == "green" || task == "all") task_green();
    if (task == "clt" || task == "all") task_clt();
    if (task == "spectrum" || task == "all") task_spectrum();
    if (task == "boundary" || task == "all") task_boundary();
    if (task == "gap" || task == "all") task_gap();
    if (task == "density" || task == "all") task_density();
    if (task == "write-configs") task_write_configs(dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
