#pragma once

#include <cstdint>
#include <vector>

#include "homwalk/decomp.hpp"
#include "homwalk/parallel.hpp"
#include "homwalk/subgroup.hpp"

namespace homwalk {

struct WalkOptions {
  // When set, every projected increment is multiplied by an independent
  // random sign drawn after the letter.  The result is a synthetic walk with
  // exactly symmetric increments: useful for exercising the centered regime
  // in dimensions where no natural measure is centered.  Trajectories no
  // longer correspond to a group product and are labeled accordingly.
  bool symmetrize = false;
  int reorthogonalize_every = 64;
};

// One trajectory of the walk (eta, t) -> (g eta, t + sigma_bar(g, eta)) on
// flag-variety x quotient coordinates.  Row n of points is the E-coordinate
// position after n steps; row 0 is the starting point t0.
struct WalkTrajectory {
  Matrix points;        // (n_steps + 1) x codim
  FlagPoint start_flag; // eta0
  std::uint64_t master_seed;
  std::uint64_t trajectory_index; // stream id: which i.i.d. letter stream was used
  bool symmetrized;
};

WalkTrajectory simulate_walk(const FiniteMeasure& mu, const SubgroupSpec& spec,
                             const FlagPoint& eta0, const Vector& t0, long n_steps,
                             std::uint64_t master_seed, std::uint64_t trajectory_index,
                             WalkOptions options = {});

// Visits of one trajectory to the centered ball of the given radius.
struct ReturnStats {
  double radius;
  std::vector<long> return_times;  // strictly increasing, all >= 1
  long last_exit;                  // largest return time, 0 when there is none
  std::vector<long> green_partial; // green_partial[n] = #returns at times <= n
};

ReturnStats return_stats(const WalkTrajectory& trajectory, double radius);

// Mean over trajectories of the cumulative number of visits to the ball of
// the given radius: an empirical Green function of the truncated walk.
// Entry n is the mean count of returns at times 1..n; entry 0 is 0.
// Per-trajectory counts are integers, so the reduction is order-independent
// and the result is bit-identical for every worker count.
std::vector<double> empirical_green(const FiniteMeasure& mu, const SubgroupSpec& spec,
                                    const FlagPoint& eta0, const Vector& t0, double radius,
                                    long n_steps, int n_trajectories,
                                    std::uint64_t master_seed, WalkOptions options = {},
                                    ExecPolicy policy = {});

// A ball radius adapted to the walk: the given quantile of the pooled
// distances to the origin over the last quarter of the horizon.  Recurrent
// walks keep revisiting such a ball; transient ones leave it for good.
double calibrate_radius(const FiniteMeasure& mu, const SubgroupSpec& spec,
                        const FlagPoint& eta0, const Vector& t0, long n_steps,
                        int n_trajectories, std::uint64_t master_seed,
                        double quantile = 0.9, WalkOptions options = {},
                        ExecPolicy policy = {});

// Frequency of k-step excursions beyond distance k*threshold from k times the
// empirical drift, for k = 1..k_max, with the log-frequencies fitted by a
// line in k.  Exponential decay shows up as a negative slope with high R^2.
struct LdpReport {
  double threshold;                  // the distance scale per step
  std::vector<double> log_frequency; // index k-1; -inf marks zero observed frequency
  double slope;
  double intercept;
  double r_squared;
  long k_max;
  long n_samples;
};

LdpReport large_deviation_decay(const FiniteMeasure& mu, const SubgroupSpec& spec,
                                const FlagPoint& eta0, double threshold, int k_max,
                                int n_samples, std::uint64_t master_seed,
                                ExecPolicy policy = {});

}  // namespace homwalk
