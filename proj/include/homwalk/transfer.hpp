#pragma once

#include <complex>
#include <utility>

#include "homwalk/lyapunov.hpp"
#include "homwalk/subgroup.hpp"

namespace homwalk {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

// Uniform grid on the circle of lines in R^2: cell i sits at angle i*pi/n.
// Grid sizes are powers of two (at least 16) so that refinement studies halve
// the spacing exactly.
class OperatorGrid {
 public:
  explicit OperatorGrid(int n_points);
  int n_points() const { return n_points_; }
  double angle(int i) const;
  int wrap(int i) const { return i & (n_points_ - 1); }

 private:
  int n_points_;
};

// Discretization of the weighted transfer operators
//   (P_theta f)(x) = sum_a w_a exp(theta * sbar_a(x)) f(g_a . x)
// on the line grid, where sbar_a(x) is the projected cocycle of atom a at the
// line of angle x and g_a . x is the moved line.  Values of f at moved lines
// come from periodic linear interpolation.  Only d = 2 is supported: the
// flag variety is a circle there, and a grid on it is an honest
// discretization rather than a model choice.
class TransferAssembly {
 public:
  TransferAssembly(const FiniteMeasure& mu, const SubgroupSpec& spec, int n_points);

  const OperatorGrid& grid() const { return grid_; }
  int n_points() const { return grid_.n_points(); }

  // out = P_theta in.  Gather formulation: every output cell is independent,
  // so the parallel path is bit-identical to the serial one.
  void apply(const ComplexVector& in, Complex theta, ComplexVector& out,
             ExecPolicy policy = {}) const;
  void apply_serial(const ComplexVector& in, Complex theta, ComplexVector& out) const;

  // nu <- P_0^T nu, the mass-transport adjoint used for stationary measures.
  void apply_adjoint_mass(const Eigen::VectorXd& in, Eigen::VectorXd& out) const;

  // out = P_theta^H in, the Hermitian adjoint; used for left eigenvectors.
  void apply_adjoint(const ComplexVector& in, Complex theta, ComplexVector& out) const;

  // Dense matrix of P_theta, for validation against direct eigensolvers.
  ComplexMatrix dense(Complex theta) const;

 private:
  OperatorGrid grid_;
  int n_atoms_;
  std::vector<double> weight_;   // per atom
  std::vector<double> sbar_;     // atom-major: sbar_[a * n + i]
  std::vector<int> cell_;        // left interpolation cell of the moved line
  std::vector<double> frac_;     // interpolation fraction in [0, 1)
};

// Leading eigenvalue data of P_theta on the grid.  The eigenfunction is
// normalized so its integral against the grid stationary measure is 1; when
// that pairing degenerates, the largest-modulus entry is set to 1 instead.
struct EigenReport {
  Complex theta;
  Complex lambda;                 // leading eigenvalue
  ComplexVector eigenfunction;
  double rest_radius;             // growth-rate estimate of the deflated operator
  int iterations;
};

EigenReport leading_eigen(const FiniteMeasure& mu, Complex theta, const SubgroupSpec& spec,
                          int n_points, double tolerance = 1e-12, int max_iterations = 5000);

// Stationary measure of the projective action on the grid: the fixed point of
// the mass-transport adjoint at theta = 0, as probability weights per cell.
Eigen::VectorXd stationary_measure(const FiniteMeasure& mu, int n_points,
                                   double tolerance = 1e-13, int max_iterations = 200000);

// First and second derivatives of log lambda(t * e) at t = 0 by central
// differences of the spectral curve.
std::pair<double, double> log_lambda_derivatives(const FiniteMeasure& mu,
                                                 const SubgroupSpec& spec, double e,
                                                 double t, int n_points);

// Compares the spectral second derivative of log lambda along the covector
// e with the Monte Carlo variance of the e-marginal of the projected cocycle.
// The two agree in the limit: the curvature of the leading eigenvalue at
// theta = 0 is the variance in the central limit theorem.  Requires the
// drift along e to be statistically indistinguishable from zero, since the
// comparison is meaningful for centered marginals.
struct CurvatureCheck {
  double spectral;   // d^2/dt^2 log lambda(t e) at 0
  double monte_carlo;  // e-marginal variance from the covariance estimate
};

CurvatureCheck second_derivative_check(const FiniteMeasure& mu, const SubgroupSpec& spec,
                                       const LyapunovEstimate& drift,
                                       const CovarianceEstimate& covariance, double e,
                                       double t, int n_points);

}  // namespace homwalk
