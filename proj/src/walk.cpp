#include "homwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace homwalk {

namespace {

// Steps the quotient walk without materializing the trajectory.  Stream
// consumption order is: letter, then (when symmetrizing) one sign.
class ProjectedWalk {
 public:
  ProjectedWalk(const FiniteMeasure& mu, const SubgroupSpec& spec, const FlagPoint& eta0,
                const Vector& t0, std::uint64_t master_seed, std::uint64_t trajectory_index,
                const WalkOptions& options)
      : mu_(mu),
        spec_(spec),
        stream_(master_seed, trajectory_index),
        walker_(eta0, options.reorthogonalize_every),
        position_(t0),
        previous_sigma_(Vector::Zero(mu.dim())),
        symmetrize_(options.symmetrize) {
    require(mu.dim() == spec.dim() && mu.dim() == eta0.dim(), ErrorCode::DimensionMismatch,
            "measure, subgroup and starting flag must share one dimension");
    require(t0.size() == spec.codim(), ErrorCode::DimensionMismatch,
            "starting point has length " + std::to_string(t0.size()) + ", expected " +
                std::to_string(spec.codim()));
  }

  const Vector& position() const { return position_; }

  void advance() {
    walker_.step(mu_.atom(stream_.next_atom(mu_)).element);
    Vector increment = spec_.e_basis() * (walker_.sigma() - previous_sigma_);
    previous_sigma_ = walker_.sigma();
    if (symmetrize_) increment *= static_cast<double>(stream_.next_sign());
    position_ += increment;
  }

 private:
  const FiniteMeasure& mu_;
  const SubgroupSpec& spec_;
  RandomStream stream_;
  CocycleWalker walker_;
  Vector position_;
  Vector previous_sigma_;
  bool symmetrize_;
};

void check_walk_sizes(long n_steps, int n_trajectories) {
  require(n_steps >= 1, ErrorCode::DimensionMismatch, "need at least one step");
  require(n_trajectories >= 1, ErrorCode::DimensionMismatch, "need at least one trajectory");
}

}  // namespace

WalkTrajectory simulate_walk(const FiniteMeasure& mu, const SubgroupSpec& spec,
                             const FlagPoint& eta0, const Vector& t0, long n_steps,
                             std::uint64_t master_seed, std::uint64_t trajectory_index,
                             WalkOptions options) {
  require(n_steps >= 0, ErrorCode::DimensionMismatch, "negative step count");
  ProjectedWalk walk(mu, spec, eta0, t0, master_seed, trajectory_index, options);
  WalkTrajectory out{Matrix(n_steps + 1, spec.codim()), eta0, master_seed, trajectory_index,
                     options.symmetrize};
  out.points.row(0) = t0.transpose();
  for (long n = 1; n <= n_steps; ++n) {
    walk.advance();
    out.points.row(n) = walk.position().transpose();
  }
  return out;
}

ReturnStats return_stats(const WalkTrajectory& trajectory, double radius) {
  require(radius >= 0.0, ErrorCode::DimensionMismatch, "radius must be nonnegative");
  const long n = trajectory.points.rows() - 1;
  ReturnStats stats;
  stats.radius = radius;
  stats.last_exit = 0;
  stats.green_partial.assign(static_cast<size_t>(n) + 1, 0);
  long count = 0;
  for (long i = 1; i <= n; ++i) {
    if (trajectory.points.row(i).norm() <= radius) {
      stats.return_times.push_back(i);
      stats.last_exit = i;
      ++count;
    }
    stats.green_partial[static_cast<size_t>(i)] = count;
  }
  return stats;
}

std::vector<double> empirical_green(const FiniteMeasure& mu, const SubgroupSpec& spec,
                                    const FlagPoint& eta0, const Vector& t0, double radius,
                                    long n_steps, int n_trajectories,
                                    std::uint64_t master_seed, WalkOptions options,
                                    ExecPolicy policy) {
  check_walk_sizes(n_steps, n_trajectories);
  require(radius >= 0.0, ErrorCode::DimensionMismatch, "radius must be nonnegative");

  // Cumulative return counts are integers, so accumulating across
  // trajectories commutes exactly and scheduling cannot change the result.
  std::vector<long long> total(static_cast<size_t>(n_steps) + 1, 0);
  const int workers = resolve_workers(policy.workers);
  std::exception_ptr first_error = nullptr;

#ifdef _OPENMP
#pragma omp parallel num_threads(workers) if (workers > 1)
#endif
  {
    std::vector<long long> local(static_cast<size_t>(n_steps) + 1, 0);
#ifdef _OPENMP
#pragma omp for schedule(dynamic) nowait
#endif
    for (int t = 0; t < n_trajectories; ++t) {
      try {
        ProjectedWalk walk(mu, spec, eta0, t0, master_seed,
                           static_cast<std::uint64_t>(t), options);
        long long count = 0;
        for (long n = 1; n <= n_steps; ++n) {
          walk.advance();
          if (walk.position().norm() <= radius) ++count;
          local[static_cast<size_t>(n)] += count;
        }
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
        {
          if (!first_error) first_error = std::current_exception();
        }
      }
    }
#ifdef _OPENMP
#pragma omp critical
#endif
    {
      for (size_t i = 0; i < total.size(); ++i) total[i] += local[i];
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<double> curve(total.size());
  for (size_t i = 0; i < total.size(); ++i)
    curve[i] = static_cast<double>(total[i]) / static_cast<double>(n_trajectories);
  return curve;
}

double calibrate_radius(const FiniteMeasure& mu, const SubgroupSpec& spec,
                        const FlagPoint& eta0, const Vector& t0, long n_steps,
                        int n_trajectories, std::uint64_t master_seed, double quantile,
                        WalkOptions options, ExecPolicy policy) {
  check_walk_sizes(n_steps, n_trajectories);
  require(quantile > 0.0 && quantile <= 1.0, ErrorCode::DimensionMismatch,
          "quantile must lie in (0, 1]");
  const long window_start = n_steps - n_steps / 4 + 1;  // last quarter of the horizon

  const auto slots = map_indexed<std::vector<double>>(
      n_trajectories,
      [&](int t) {
        ProjectedWalk walk(mu, spec, eta0, t0, master_seed,
                           static_cast<std::uint64_t>(t), options);
        std::vector<double> norms;
        norms.reserve(static_cast<size_t>(n_steps - window_start + 2));
        for (long n = 1; n <= n_steps; ++n) {
          walk.advance();
          if (n >= window_start) norms.push_back(walk.position().norm());
        }
        return norms;
      },
      policy);

  std::vector<double> pooled;
  for (const auto& s : slots) pooled.insert(pooled.end(), s.begin(), s.end());
  require(!pooled.empty(), ErrorCode::DimensionMismatch, "empty calibration window");
  // Nearest-rank quantile: deterministic and exact on the pooled sample.
  size_t rank = static_cast<size_t>(
      std::ceil(quantile * static_cast<double>(pooled.size())));
  rank = std::min(std::max<size_t>(rank, 1), pooled.size());
  std::nth_element(pooled.begin(), pooled.begin() + static_cast<long>(rank - 1), pooled.end());
  return pooled[rank - 1];
}

LdpReport large_deviation_decay(const FiniteMeasure& mu, const SubgroupSpec& spec,
                                const FlagPoint& eta0, double threshold, int k_max,
                                int n_samples, std::uint64_t master_seed,
                                ExecPolicy policy) {
  check_walk_sizes(k_max, n_samples);
  require(k_max >= 10, ErrorCode::DimensionMismatch,
          "need at least 10 horizon lengths for a meaningful decay fit");
  require(threshold > 0.0, ErrorCode::DimensionMismatch, "threshold must be positive");
  const int k = spec.codim();

  // One pass per trajectory, storing the whole projected path up to k_max.
  const auto paths = map_indexed<Matrix>(
      n_samples,
      [&](int t) {
        ProjectedWalk walk(mu, spec, eta0, Vector::Zero(k), master_seed,
                           static_cast<std::uint64_t>(t), WalkOptions{});
        Matrix path(k_max, k);
        for (int n = 1; n <= k_max; ++n) {
          walk.advance();
          path.row(n - 1) = walk.position().transpose();
        }
        return path;
      },
      policy);

  // Empirical drift from the endpoints; self-contained, no external estimate.
  Vector drift = Vector::Zero(k);
  std::vector<double> column(paths.size());
  for (int c = 0; c < k; ++c) {
    for (size_t t = 0; t < paths.size(); ++t) column[t] = paths[t](k_max - 1, c);
    drift(c) = compensated_sum(column) / static_cast<double>(paths.size() * k_max);
  }

  LdpReport report;
  report.threshold = threshold;
  report.k_max = k_max;
  report.n_samples = n_samples;
  report.log_frequency.resize(static_cast<size_t>(k_max));
  const double minus_inf = -std::numeric_limits<double>::infinity();
  for (int step = 1; step <= k_max; ++step) {
    long long exceed = 0;
    for (const auto& path : paths) {
      const double dist = (path.row(step - 1).transpose() -
                           static_cast<double>(step) * drift).norm();
      if (dist >= static_cast<double>(step) * threshold) ++exceed;
    }
    report.log_frequency[static_cast<size_t>(step - 1)] =
        exceed == 0 ? minus_inf
                    : std::log(static_cast<double>(exceed) / static_cast<double>(n_samples));
  }

  // Least-squares line through the finite points.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  long m = 0;
  for (int step = 1; step <= k_max; ++step) {
    const double y = report.log_frequency[static_cast<size_t>(step - 1)];
    if (!std::isfinite(y)) continue;
    const double x = static_cast<double>(step);
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    ++m;
  }
  if (m >= 2 && sxx * m - sx * sx > 0) {
    const double denom = m * sxx - sx * sx;
    report.slope = (m * sxy - sx * sy) / denom;
    report.intercept = (sy - report.slope * sx) / m;
    const double ss_tot = syy - sy * sy / m;
    double ss_res = 0;
    for (int step = 1; step <= k_max; ++step) {
      const double y = report.log_frequency[static_cast<size_t>(step - 1)];
      if (!std::isfinite(y)) continue;
      const double r = y - (report.intercept + report.slope * step);
      ss_res += r * r;
    }
    report.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res == 0 ? 1.0 : 0.0);
  } else {
    report.slope = 0.0;
    report.intercept = 0.0;
    report.r_squared = 0.0;
  }
  return report;
}

}  // namespace homwalk
