#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homwalk/decomp.hpp"
#include "homwalk/parallel.hpp"

namespace homwalk {

// Monte Carlo estimate of the Lyapunov vector sigma_mu, the almost-sure limit
// of sigma(b_n ... b_1, eta) / n.
struct LyapunovEstimate {
  AVector mean;        // coordinates in a, nepers per step
  Vector std_error;    // per-coordinate standard error across trajectories
  long n_steps;
  long n_trajectories;
};

LyapunovEstimate estimate_lyapunov(const FiniteMeasure& mu, long n_steps, int n_trajectories,
                                   std::uint64_t master_seed, ExecPolicy policy = {});

// Sample covariance of the normalized projected cocycle
// (sigma_bar(b_n...b_1, eta) - n * mean) / sqrt(n), one sample per trajectory.
struct CovarianceEstimate {
  Matrix matrix;      // codim x codim, symmetric, positive semidefinite
  long n_samples;
  long n_steps;
};

CovarianceEstimate estimate_covariance(const FiniteMeasure& mu, const SubgroupSpec& spec,
                                       long n_steps, int n_trajectories,
                                       std::uint64_t master_seed, ExecPolicy policy = {});

// Normality diagnostics for one coordinate of the normalized cocycle.
struct MarginalStats {
  double variance;
  double skewness;
  double excess_kurtosis;
  double ks_statistic;   // Kolmogorov-Smirnov distance to the fitted normal
  double ks_band;        // asymptotic 1% two-sided acceptance band
};

// Central-limit diagnostics from two starting flags.  The probe flag consumes
// the very same letter sequences as the base flag, so any difference between
// the two blocks isolates the dependence on the starting point.
struct CltReport {
  bool degenerate;     // true when some marginal has (numerically) zero spread
  long n_steps;
  long n_samples;
  std::vector<MarginalStats> base_flag;    // one entry per E coordinate
  std::vector<MarginalStats> probe_flag;
};

CltReport clt_diagnostics(const FiniteMeasure& mu, const SubgroupSpec& spec,
                          const LyapunovEstimate& lyap, long n_steps, int n_samples,
                          std::uint64_t master_seed, ExecPolicy policy = {});

// Euclidean distance between the Iwasawa cocycle at the base flag and the
// Cartan projection of the same running product, for n = 1..n_steps.
// Bounded in n for strongly irreducible proximal measures.
std::vector<double> sigma_kappa_gap(const FiniteMeasure& mu, const FlagPoint& eta, long n_steps,
                                    std::uint64_t master_seed,
                                    std::uint64_t trajectory_index = 0);

// One draw from the empirical Furstenberg boundary: the flag of the forward
// product b_1 b_2 ... b_n.  The certificate is the flag distance between the
// images of two transversal starting flags; it contracts to zero precisely
// when the forward flow is contracting, and a value above 0.1 raises the
// no-contraction warning instead of an error (compact or reducible support
// behaves that way legitimately).
struct BoundaryEstimate {
  FlagPoint point;
  double certificate;
  bool no_contraction;
};

BoundaryEstimate boundary_point(const FiniteMeasure& mu, long n_steps,
                                std::uint64_t master_seed,
                                std::uint64_t trajectory_index = 0);

// Cheap, non-binding screens for supports that generate too small a group
// for the asymptotic theory to apply: bounded Cartan growth over a sample
// product (compact closure) and a line fixed by every atom (reducibility).
// Returns a human-readable warning, or nothing when neither screen fires.
std::optional<std::string> zariski_density_warning(const FiniteMeasure& mu,
                                                   std::uint64_t master_seed);

}  // namespace homwalk
