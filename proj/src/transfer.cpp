#include "homwalk/transfer.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace homwalk {

namespace {

constexpr double kPi = std::numbers::pi;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Deterministic pseudo-random start vector for growth-rate probes.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double unit_noise(std::uint64_t i) {
  return static_cast<double>(mix64(i) >> 11) * 0x1.0p-53 - 0.5;
}

}  // namespace

OperatorGrid::OperatorGrid(int n_points) : n_points_(n_points) {
  require(n_points_ >= 16 && power_of_two(n_points_), ErrorCode::DimensionMismatch,
          "grid size must be a power of two, at least 16; got " + std::to_string(n_points_));
}

double OperatorGrid::angle(int i) const {
  return kPi * static_cast<double>(i) / static_cast<double>(n_points_);
}

TransferAssembly::TransferAssembly(const FiniteMeasure& mu, const SubgroupSpec& spec,
                                   int n_points)
    : grid_(n_points), n_atoms_(mu.size()) {
  require(mu.dim() == 2 && spec.dim() == 2, ErrorCode::UnsupportedDimension,
          "transfer operators are implemented on the circle of lines, d = 2 only");
  require(spec.codim() == 1, ErrorCode::DegenerateQuotient,
          "theta ranges over a one-dimensional quotient; got codimension " +
              std::to_string(spec.codim()));

  const int n = grid_.n_points();
  // sigma(g, line) = (log|g v|, -log|g v|) for a unit vector v on the line,
  // so the projected value is a fixed multiple of log|g v|.
  const double e_coeff = spec.e_basis()(0, 0) - spec.e_basis()(0, 1);

  weight_.resize(static_cast<size_t>(n_atoms_));
  sbar_.resize(static_cast<size_t>(n_atoms_) * static_cast<size_t>(n));
  cell_.resize(sbar_.size());
  frac_.resize(sbar_.size());
  for (int a = 0; a < n_atoms_; ++a) {
    weight_[static_cast<size_t>(a)] = mu.atom(a).weight;
    const Matrix& g = mu.atom(a).element.matrix();
    for (int i = 0; i < n; ++i) {
      const double x = grid_.angle(i);
      const Eigen::Vector2d v(std::cos(x), std::sin(x));
      const Eigen::Vector2d w = g * v;
      const double len = w.norm();
      require(len > 0.0 && std::isfinite(len), ErrorCode::NumericalBreakdown,
              "moved line collapsed");
      double moved = std::atan2(w(1), w(0));
      if (moved < 0.0) moved += kPi;
      if (moved >= kPi) moved -= kPi;
      double u = moved / kPi * static_cast<double>(n);
      int c = static_cast<int>(u);
      double f = u - static_cast<double>(c);
      if (c >= n) {  // guards the roundoff edge moved / pi * n == n
        c = 0;
        f = 0.0;
      }
      const size_t slot = static_cast<size_t>(a) * static_cast<size_t>(n) +
                          static_cast<size_t>(i);
      sbar_[slot] = e_coeff * std::log(len);
      cell_[slot] = c;
      frac_[slot] = f;
    }
  }
}

void TransferAssembly::apply_serial(const ComplexVector& in, Complex theta,
                                    ComplexVector& out) const {
  const int n = grid_.n_points();
  require(static_cast<int>(in.size()) == n, ErrorCode::DimensionMismatch,
          "input vector does not match the grid");
  out.resize(n);
  for (int i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (int a = 0; a < n_atoms_; ++a) {
      const size_t slot = static_cast<size_t>(a) * static_cast<size_t>(n) +
                          static_cast<size_t>(i);
      const int c = cell_[slot];
      // f0 + frac * (f1 - f0) rather than (1-frac) f0 + frac f1: the former
      // maps constants to themselves exactly.
      const Complex value = in(c) + frac_[slot] * (in(grid_.wrap(c + 1)) - in(c));
      acc += weight_[static_cast<size_t>(a)] * std::exp(theta * sbar_[slot]) * value;
    }
    out(i) = acc;
  }
}

void TransferAssembly::apply(const ComplexVector& in, Complex theta, ComplexVector& out,
                             ExecPolicy policy) const {
  const int workers = resolve_workers(policy.workers);
  const int n = grid_.n_points();
  require(static_cast<int>(in.size()) == n, ErrorCode::DimensionMismatch,
          "input vector does not match the grid");
  if (workers <= 1) {
    apply_serial(in, theta, out);
    return;
  }
#ifdef _OPENMP
  out.resize(n);
#pragma omp parallel for schedule(static) num_threads(workers)
  for (int i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (int a = 0; a < n_atoms_; ++a) {
      const size_t slot = static_cast<size_t>(a) * static_cast<size_t>(n) +
                          static_cast<size_t>(i);
      const int c = cell_[slot];
      const Complex value = in(c) + frac_[slot] * (in(grid_.wrap(c + 1)) - in(c));
      acc += weight_[static_cast<size_t>(a)] * std::exp(theta * sbar_[slot]) * value;
    }
    out(i) = acc;
  }
#else
  apply_serial(in, theta, out);
#endif
}

void TransferAssembly::apply_adjoint_mass(const Eigen::VectorXd& in,
                                          Eigen::VectorXd& out) const {
  const int n = grid_.n_points();
  require(static_cast<int>(in.size()) == n, ErrorCode::DimensionMismatch,
          "input vector does not match the grid");
  out.setZero(n);
  for (int a = 0; a < n_atoms_; ++a) {
    const double w = weight_[static_cast<size_t>(a)];
    for (int i = 0; i < n; ++i) {
      const size_t slot = static_cast<size_t>(a) * static_cast<size_t>(n) +
                          static_cast<size_t>(i);
      const double mass = w * in(i);
      out(cell_[slot]) += mass * (1.0 - frac_[slot]);
      out(grid_.wrap(cell_[slot] + 1)) += mass * frac_[slot];
    }
  }
}

void TransferAssembly::apply_adjoint(const ComplexVector& in, Complex theta,
                                     ComplexVector& out) const {
  const int n = grid_.n_points();
  require(static_cast<int>(in.size()) == n, ErrorCode::DimensionMismatch,
          "input vector does not match the grid");
  out.setZero(n);
  for (int a = 0; a < n_atoms_; ++a) {
    const double w = weight_[static_cast<size_t>(a)];
    for (int i = 0; i < n; ++i) {
      const size_t slot = static_cast<size_t>(a) * static_cast<size_t>(n) +
                          static_cast<size_t>(i);
      const Complex mass = std::conj(w * std::exp(theta * sbar_[slot])) * in(i);
      out(cell_[slot]) += mass * (1.0 - frac_[slot]);
      out(grid_.wrap(cell_[slot] + 1)) += mass * frac_[slot];
    }
  }
}

ComplexMatrix TransferAssembly::dense(Complex theta) const {
  const int n = grid_.n_points();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < n_atoms_; ++a) {
      const size_t slot = static_cast<size_t>(a) * static_cast<size_t>(n) +
                          static_cast<size_t>(i);
      const Complex coeff =
          weight_[static_cast<size_t>(a)] * std::exp(theta * sbar_[slot]);
      m(i, cell_[slot]) += coeff * (1.0 - frac_[slot]);
      m(i, grid_.wrap(cell_[slot] + 1)) += coeff * frac_[slot];
    }
  }
  return m;
}

EigenReport leading_eigen(const FiniteMeasure& mu, Complex theta, const SubgroupSpec& spec,
                          int n_points, double tolerance, int max_iterations) {
  require(n_points >= 256, ErrorCode::DimensionMismatch,
          "eigenpair extraction needs a grid of at least 256 points");
  TransferAssembly assembly(mu, spec, n_points);
  const int n = assembly.n_points();
  require(tolerance > 0.0, ErrorCode::DimensionMismatch, "tolerance must be positive");
  require(max_iterations >= 1, ErrorCode::DimensionMismatch, "need at least one iteration");

  ComplexVector f = ComplexVector::Ones(n), fn(n);
  Complex lambda(0.0, 0.0);
  int used = 0;
  bool converged = false;
  for (int it = 1; it <= max_iterations; ++it) {
    assembly.apply(f, theta, fn);
    const Complex num = f.dot(fn);  // Eigen's dot conjugates the left factor
    const Complex den = f.dot(f);
    lambda = num / den;
    const double residual = (fn - lambda * f).cwiseAbs().maxCoeff();
    used = it;
    if (residual <= tolerance * std::max(1.0, std::abs(lambda))) {
      converged = true;
      f = fn;
      break;
    }
    const double scale = fn.cwiseAbs().maxCoeff();
    require(scale > 0.0, ErrorCode::NumericalBreakdown, "power iteration collapsed to zero");
    f = fn / scale;
  }
  require(converged, ErrorCode::NoConvergence,
          "power iteration did not reach tolerance " + std::to_string(tolerance) + " in " +
              std::to_string(max_iterations) + " iterations");

  // Normalize the eigenfunction against the stationary measure: the grid
  // integral of f with respect to nu becomes exactly 1 when that pairing is
  // away from zero.  (At theta = 0 this leaves the constant function 1
  // untouched, since nu has total mass 1.)  When the pairing degenerates,
  // fall back to making the largest-modulus entry 1.
  {
    Eigen::VectorXd nu = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    Eigen::VectorXd nu_next(n);
    for (int it = 0; it < 2000; ++it) {
      assembly.apply_adjoint_mass(nu, nu_next);
      nu_next /= nu_next.sum();
      const double change = (nu_next - nu).lpNorm<1>();
      nu.swap(nu_next);
      if (change < 1e-12) break;
    }
    const Complex integral = nu.cast<Complex>().dot(f);  // real weights: plain pairing
    if (std::abs(integral) > 1e-8 * f.cwiseAbs().maxCoeff()) {
      f /= integral;
    } else {
      int arg_max = 0;
      f.cwiseAbs().maxCoeff(&arg_max);
      require(std::abs(f(arg_max)) > 0.0, ErrorCode::NumericalBreakdown, "zero eigenfunction");
      f /= f(arg_max);
    }
  }

  // Left eigenvector by adjoint iteration, for deflation.
  ComplexVector psi = ComplexVector::Ones(n), psin(n);
  for (int it = 0; it < 400; ++it) {
    assembly.apply_adjoint(psi, theta, psin);
    const double scale = psin.cwiseAbs().maxCoeff();
    if (scale == 0.0) break;
    psi = psin / scale;
    assembly.apply_adjoint(psi, theta, psin);
    if ((psin - std::conj(lambda) * psi).cwiseAbs().maxCoeff() <
        tolerance * std::max(1.0, std::abs(lambda)))
      break;
  }
  const Complex pairing = psi.dot(f);

  // Growth rate of the deflated operator from a deterministic noise vector.
  double rest_radius = 0.0;
  if (std::abs(pairing) > 1e-12) {
    ComplexVector u(n), un(n);
    for (int i = 0; i < n; ++i)
      u(i) = Complex(unit_noise(static_cast<std::uint64_t>(i)),
                     unit_noise(static_cast<std::uint64_t>(i) + 77777));
    u -= f * (psi.dot(u) / pairing);
    u /= u.norm();
    const int burn_in = 120, window = 60;
    std::vector<double> log_ratio;
    for (int it = 0; it < burn_in + window; ++it) {
      assembly.apply(u, theta, un);
      un -= f * (psi.dot(un) / pairing);
      const double growth = un.norm();
      if (growth <= 1e-280) {  // rest spectrum numerically nilpotent
        log_ratio.assign(1, -650.0);
        break;
      }
      if (it >= burn_in) log_ratio.push_back(std::log(growth));
      u = un / growth;
    }
    double acc = 0.0;
    for (double r : log_ratio) acc += r;
    rest_radius = std::exp(acc / static_cast<double>(log_ratio.size()));
  }

  EigenReport report;
  report.theta = theta;
  report.lambda = lambda;
  report.eigenfunction = f;
  report.rest_radius = rest_radius;
  report.iterations = used;
  return report;
}

Eigen::VectorXd stationary_measure(const FiniteMeasure& mu, int n_points, double tolerance,
                                   int max_iterations) {
  require(mu.dim() == 2, ErrorCode::UnsupportedDimension,
          "stationary measures are computed on the circle of lines, d = 2 only");
  const SubgroupSpec trivial(2, {}, UnipotentPart::FullN);
  TransferAssembly assembly(mu, trivial, n_points);
  const int n = assembly.n_points();
  Eigen::VectorXd nu = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd next(n);
  for (int it = 0; it < max_iterations; ++it) {
    assembly.apply_adjoint_mass(nu, next);
    next /= next.sum();  // mass transport preserves total mass up to roundoff
    const double residual = (next - nu).lpNorm<1>();  // = ||nu - mu * nu||_1
    if (residual < tolerance) return nu;
    nu.swap(next);
  }
  fail(ErrorCode::NoConvergence,
       "stationary measure iteration did not reach tolerance " + std::to_string(tolerance));
}

std::pair<double, double> log_lambda_derivatives(const FiniteMeasure& mu,
                                                 const SubgroupSpec& spec, double e,
                                                 double t, int n_points) {
  require(t >= 1e-4 && t <= 1e-2, ErrorCode::DimensionMismatch,
          "finite-difference step must lie in [1e-4, 1e-2]");
  const auto log_leading = [&](double theta_real) {
    const Complex lambda = leading_eigen(mu, Complex(theta_real, 0.0), spec, n_points).lambda;
    require(lambda.real() > 0.0, ErrorCode::NumericalBreakdown,
            "leading eigenvalue of a positive operator came out non-positive");
    return std::log(lambda.real());
  };
  const double plus = log_leading(t * e);
  const double zero = log_leading(0.0);
  const double minus = log_leading(-t * e);
  const double first = (plus - minus) / (2.0 * t);
  const double second = (plus - 2.0 * zero + minus) / (t * t);
  return {first, second};
}

CurvatureCheck second_derivative_check(const FiniteMeasure& mu, const SubgroupSpec& spec,
                                       const LyapunovEstimate& drift,
                                       const CovarianceEstimate& covariance, double e,
                                       double t, int n_points) {
  require(spec.codim() == 1, ErrorCode::DegenerateQuotient,
          "curvature check needs a one-dimensional quotient");
  require(covariance.matrix.rows() == 1, ErrorCode::DimensionMismatch,
          "covariance estimate does not match a one-dimensional quotient");

  // The identity d^2 log lambda = variance holds for centered marginals; a
  // drift that is statistically nonzero along e is a contract violation.
  const Vector a = e * spec.e_basis().row(0).transpose();
  const double drift_e = a.dot(drift.mean.coords());
  double se_sq = 0.0;
  for (int c = 0; c < a.size(); ++c)
    se_sq += a(c) * a(c) * drift.std_error(c) * drift.std_error(c);
  const double se_e = std::sqrt(se_sq);
  require(std::abs(drift_e) <= 4.0 * se_e + 1e-12, ErrorCode::NotCentered,
          "drift along e is " + std::to_string(drift_e) + " with standard error " +
              std::to_string(se_e));

  const auto [first, second] = log_lambda_derivatives(mu, spec, e, t, n_points);
  (void)first;
  return CurvatureCheck{second, e * e * covariance.matrix(0, 0)};
}

}  // namespace homwalk
