#include "homwalk/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace homwalk {

namespace {

// Critical value of the two-sided Kolmogorov-Smirnov statistic at level 1%:
// sqrt(-log(alpha / 2) / 2) with alpha = 0.01.
constexpr double kKsCritical1Percent = 1.6276236115189504;

double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

struct Moments {
  double mean;
  double variance;  // unbiased
  double sd;
  double skewness;
  double excess_kurtosis;
};

Moments sample_moments(const std::vector<double>& xs) {
  const size_t n = xs.size();
  Moments mo{0.0, 0.0, 0.0, 0.0, 0.0};
  if (n == 0) return mo;
  mo.mean = compensated_sum(xs) / static_cast<double>(n);
  std::vector<double> c2(n), c3(n), c4(n);
  for (size_t i = 0; i < n; ++i) {
    const double d = xs[i] - mo.mean;
    c2[i] = d * d;
    c3[i] = d * d * d;
    c4[i] = d * d * d * d;
  }
  const double m2 = compensated_sum(c2) / static_cast<double>(n);
  const double m3 = compensated_sum(c3) / static_cast<double>(n);
  const double m4 = compensated_sum(c4) / static_cast<double>(n);
  mo.variance = n > 1 ? compensated_sum(c2) / static_cast<double>(n - 1) : 0.0;
  mo.sd = std::sqrt(m2);
  if (mo.sd > 0.0) {
    mo.skewness = m3 / (mo.sd * mo.sd * mo.sd);
    mo.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return mo;
}

double ks_distance(std::vector<double> xs, double mean, double sd) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double f = normal_cdf(xs[i], mean, sd);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::abs(f - lo), std::abs(f - hi)));
  }
  return d;
}

MarginalStats marginal_stats(const std::vector<double>& xs) {
  const Moments mo = sample_moments(xs);
  MarginalStats st{};
  st.variance = mo.variance;
  st.ks_band = kKsCritical1Percent / std::sqrt(static_cast<double>(xs.size()));
  const bool degenerate = mo.sd <= 1e-12 * (1.0 + std::abs(mo.mean));
  if (degenerate) {
    st.skewness = 0.0;
    st.excess_kurtosis = 0.0;
    st.ks_statistic = 0.0;
  } else {
    st.skewness = mo.skewness;
    st.excess_kurtosis = mo.excess_kurtosis;
    st.ks_statistic = ks_distance(xs, mo.mean, mo.sd);
  }
  return st;
}

bool is_degenerate(const std::vector<double>& xs) {
  const Moments mo = sample_moments(xs);
  return mo.sd <= 1e-12 * (1.0 + std::abs(mo.mean));
}

void check_mc_sizes(long n_steps, int n_trajectories) {
  require(n_steps >= 1, ErrorCode::DimensionMismatch, "need at least one step");
  require(n_trajectories >= 1, ErrorCode::DimensionMismatch, "need at least one trajectory");
}

}  // namespace

LyapunovEstimate estimate_lyapunov(const FiniteMeasure& mu, long n_steps, int n_trajectories,
                                   std::uint64_t master_seed, ExecPolicy policy) {
  check_mc_sizes(n_steps, n_trajectories);
  const int d = mu.dim();
  const FlagPoint eta0 = FlagPoint::base(d);

  const auto slots = map_indexed<Vector>(
      n_trajectories,
      [&](int t) {
        RandomStream stream(master_seed, static_cast<std::uint64_t>(t));
        CocycleWalker walker(eta0);
        for (long i = 0; i < n_steps; ++i)
          walker.step(mu.atom(stream.next_atom(mu)).element);
        return Vector(walker.sigma() / static_cast<double>(n_steps));
      },
      policy);

  Vector mean(d), se(d);
  std::vector<double> column(slots.size()), sq(slots.size());
  for (int c = 0; c < d; ++c) {
    for (size_t t = 0; t < slots.size(); ++t) column[t] = slots[t](c);
    mean(c) = compensated_sum(column) / static_cast<double>(slots.size());
    for (size_t t = 0; t < slots.size(); ++t) {
      const double dev = column[t] - mean(c);
      sq[t] = dev * dev;
    }
    se(c) = slots.size() > 1
                ? std::sqrt(compensated_sum(sq) /
                            static_cast<double>((slots.size() - 1) * slots.size()))
                : 0.0;
  }
  return LyapunovEstimate{AVector(mean), se, n_steps, n_trajectories};
}

CovarianceEstimate estimate_covariance(const FiniteMeasure& mu, const SubgroupSpec& spec,
                                       long n_steps, int n_trajectories,
                                       std::uint64_t master_seed, ExecPolicy policy) {
  check_mc_sizes(n_steps, n_trajectories);
  require(n_trajectories >= 2, ErrorCode::DimensionMismatch,
          "covariance needs at least two trajectories");
  require(mu.dim() == spec.dim(), ErrorCode::DimensionMismatch,
          "measure and subgroup live in different dimensions");
  const int k = spec.codim();
  require(k >= 1, ErrorCode::DegenerateQuotient,
          "quotient direction is zero-dimensional, nothing to estimate");
  const FlagPoint eta0 = FlagPoint::base(mu.dim());
  const double root_n = std::sqrt(static_cast<double>(n_steps));

  const auto slots = map_indexed<Vector>(
      n_trajectories,
      [&](int t) {
        RandomStream stream(master_seed, static_cast<std::uint64_t>(t));
        CocycleWalker walker(eta0);
        for (long i = 0; i < n_steps; ++i)
          walker.step(mu.atom(stream.next_atom(mu)).element);
        return Vector((spec.e_basis() * walker.sigma()) / root_n);
      },
      policy);

  Vector mean = Vector::Zero(k);
  std::vector<double> column(slots.size());
  for (int c = 0; c < k; ++c) {
    for (size_t t = 0; t < slots.size(); ++t) column[t] = slots[t](c);
    mean(c) = compensated_sum(column) / static_cast<double>(slots.size());
  }
  Matrix cov = Matrix::Zero(k, k);
  std::vector<double> prod(slots.size());
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      for (size_t t = 0; t < slots.size(); ++t)
        prod[t] = (slots[t](a) - mean(a)) * (slots[t](b) - mean(b));
      cov(a, b) = compensated_sum(prod) / static_cast<double>(slots.size() - 1);
      cov(b, a) = cov(a, b);
    }
  }
  return CovarianceEstimate{std::move(cov), n_trajectories, n_steps};
}

CltReport clt_diagnostics(const FiniteMeasure& mu, const SubgroupSpec& spec,
                          const LyapunovEstimate& lyap, long n_steps, int n_samples,
                          std::uint64_t master_seed, ExecPolicy policy) {
  check_mc_sizes(n_steps, n_samples);
  require(mu.dim() == spec.dim() && lyap.mean.dim() == mu.dim(), ErrorCode::DimensionMismatch,
          "measure, subgroup and drift estimate must share one dimension");
  const int k = spec.codim();
  require(k >= 1, ErrorCode::DegenerateQuotient,
          "quotient direction is zero-dimensional, nothing to test");
  const FlagPoint base = FlagPoint::base(mu.dim());
  const FlagPoint probe = FlagPoint::generic(mu.dim());
  const Vector drift = spec.e_basis() * lyap.mean.coords();
  const double root_n = std::sqrt(static_cast<double>(n_steps));

  // Slot layout: first k entries from the base flag, next k from the probe
  // flag, both driven by the same letters.
  const auto slots = map_indexed<Vector>(
      n_samples,
      [&](int t) {
        RandomStream stream(master_seed, static_cast<std::uint64_t>(t));
        CocycleWalker wbase(base), wprobe(probe);
        for (long i = 0; i < n_steps; ++i) {
          const GroupElement& g = mu.atom(stream.next_atom(mu)).element;
          wbase.step(g);
          wprobe.step(g);
        }
        Vector both(2 * k);
        both.head(k) =
            (spec.e_basis() * wbase.sigma() - static_cast<double>(n_steps) * drift) / root_n;
        both.tail(k) =
            (spec.e_basis() * wprobe.sigma() - static_cast<double>(n_steps) * drift) / root_n;
        return both;
      },
      policy);

  CltReport report;
  report.n_steps = n_steps;
  report.n_samples = n_samples;
  report.degenerate = false;
  std::vector<double> column(slots.size());
  for (int block = 0; block < 2; ++block) {
    auto& out = block == 0 ? report.base_flag : report.probe_flag;
    for (int c = 0; c < k; ++c) {
      for (size_t t = 0; t < slots.size(); ++t) column[t] = slots[t](block * k + c);
      out.push_back(marginal_stats(column));
      if (is_degenerate(column)) report.degenerate = true;
    }
  }
  return report;
}

std::vector<double> sigma_kappa_gap(const FiniteMeasure& mu, const FlagPoint& eta, long n_steps,
                                    std::uint64_t master_seed,
                                    std::uint64_t trajectory_index) {
  require(mu.dim() == eta.dim(), ErrorCode::DimensionMismatch,
          "measure and flag live in different dimensions");
  require(n_steps >= 2, ErrorCode::DimensionMismatch,
          "gap sequence needs at least two steps");
  RandomStream stream(master_seed, trajectory_index);
  CocycleWalker walker(eta);
  CartanTracker tracker(mu.dim());
  std::vector<double> gap;
  gap.reserve(static_cast<size_t>(n_steps));
  for (long i = 0; i < n_steps; ++i) {
    const GroupElement& g = mu.atom(stream.next_atom(mu)).element;
    walker.step(g);
    tracker.step(g);
    gap.push_back((walker.sigma() - tracker.kappa()).norm());
  }
  return gap;
}

BoundaryEstimate boundary_point(const FiniteMeasure& mu, long n_steps,
                                std::uint64_t master_seed, std::uint64_t trajectory_index) {
  require(n_steps >= 1, ErrorCode::DimensionMismatch, "need at least one step");
  RandomStream stream(master_seed, trajectory_index);
  std::vector<int> letters(static_cast<size_t>(n_steps));
  for (auto& l : letters) l = stream.next_atom(mu);

  // The flag of the forward product b_1 ... b_n applied to F is obtained by
  // feeding the letters to a cocycle walker in reverse order, which never
  // forms the product and therefore neither overflows nor loses the small
  // principal directions.
  CocycleWalker from_base(FlagPoint::base(mu.dim()));
  CocycleWalker from_probe(FlagPoint::generic(mu.dim()));
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    const GroupElement& g = mu.atom(*it).element;
    from_base.step(g);
    from_probe.step(g);
  }
  const double certificate = flag_distance(from_base.flag(), from_probe.flag());
  return BoundaryEstimate{from_base.flag(), certificate, certificate > 0.1};
}

std::optional<std::string> zariski_density_warning(const FiniteMeasure& mu,
                                                   std::uint64_t master_seed) {
  // Screen 1: the Cartan projection of a 1000-letter sample product stays
  // small, suggesting the support generates a group with compact closure.
  constexpr long kProbeSteps = 1000;
  constexpr double kBoundedGrowth = 2.0;
  RandomStream stream(master_seed, 0);
  CocycleWalker walker(FlagPoint::base(mu.dim()));
  double max_norm = 0.0;
  for (long i = 0; i < kProbeSteps; ++i) {
    walker.step(mu.atom(stream.next_atom(mu)).element);
    max_norm = std::max(max_norm, walker.sigma().cwiseAbs().maxCoeff());
  }
  if (max_norm < kBoundedGrowth)
    return "support may generate a compact group: the cocycle stayed below " +
           std::to_string(kBoundedGrowth) + " nepers over " + std::to_string(kProbeSteps) +
           " steps";

  // Screen 2: a line fixed by every atom means the support acts reducibly.
  constexpr double kLineTol = 1e-9;
  Eigen::EigenSolver<Matrix> solver(mu.atom(0).element.matrix());
  for (int e = 0; e < mu.dim(); ++e) {
    if (std::abs(solver.eigenvalues()(e).imag()) > kLineTol) continue;
    Vector line = solver.eigenvectors().col(e).real();
    if (line.norm() <= kLineTol) continue;
    line /= line.norm();
    bool common = true;
    for (int a = 1; a < mu.size() && common; ++a) {
      const Vector image = mu.atom(a).element.matrix() * line;
      common = (image - image.dot(line) * line).norm() <= kLineTol * image.norm();
    }
    if (common) return "support has a common invariant line: the action is reducible";
  }
  return std::nullopt;
}

}  // namespace homwalk
