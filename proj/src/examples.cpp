#include "homwalk/examples.hpp"

#include <cmath>

namespace homwalk::examples {

namespace {

Matrix rotation2(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

Matrix diag2(double top) {
  Matrix d(2, 2);
  d << top, 0.0, 0.0, 1.0 / top;
  return d;
}

// Rotation in the (i, j) coordinate plane of R^d.
Matrix plane_rotation(int dim, int i, int j, double angle) {
  Matrix r = Matrix::Identity(dim, dim);
  r(i, i) = std::cos(angle);
  r(j, j) = std::cos(angle);
  r(i, j) = -std::sin(angle);
  r(j, i) = std::sin(angle);
  return r;
}

Matrix diag3(double a, double b) {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = a;
  d(1, 1) = b;
  d(2, 2) = 1.0 / (a * b);
  return d;
}

Matrix diag4(double a, double b, double c) {
  Matrix d = Matrix::Zero(4, 4);
  d(0, 0) = a;
  d(1, 1) = b;
  d(2, 2) = c;
  d(3, 3) = 1.0 / (a * b * c);
  return d;
}

}  // namespace

FiniteMeasure sl2_hyperbolic() {
  return make_measure({
      {0.4, diag2(1.8)},
      {0.35, rotation2(0.7) * diag2(1.5)},
      {0.25, rotation2(2.1) * diag2(1.3)},
  });
}

FiniteMeasure sl2_centered() {
  const double h = std::exp(0.004);
  return make_measure({
      {0.5, rotation2(0.9) * diag2(h)},
      {0.5, rotation2(2.3) * diag2(h)},
  });
}

FiniteMeasure sl2_rotation() {
  return make_measure({{1.0, rotation2(0.9)}});
}

FiniteMeasure sl3_generic() {
  return make_measure({
      {0.4, diag3(1.7, 1.1) * plane_rotation(3, 0, 1, 0.6)},
      {0.35, plane_rotation(3, 1, 2, 0.8) * diag3(1.4, 0.8)},
      {0.25, plane_rotation(3, 0, 2, 1.1) * diag3(0.9, 1.5)},
  });
}

FiniteMeasure sl4_generic() {
  return make_measure({
      {0.35, diag4(1.5, 1.1, 0.9) * plane_rotation(4, 0, 1, 0.7)},
      {0.35, plane_rotation(4, 1, 2, 0.9) * diag4(1.2, 0.8, 1.1)},
      {0.30, plane_rotation(4, 2, 3, 1.3) * plane_rotation(4, 0, 3, 0.5) *
                 diag4(0.8, 1.3, 1.0)},
  });
}

Vector sl3_drift_direction() {
  // Frozen from a 4*10^7-step run of `calibrate drift` (n = 20000 steps,
  // 2000 trajectories; per-coordinate standard error ~5e-5).  Unit vector;
  // its coordinate sum is ~1e-17, well inside the zero-sum tolerance.
  Vector v(3);
  v << 0.6738028890452753, 0.062463363686198391, -0.73626625273147361;
  return v / v.norm();
}

SubgroupSpec sl2_full() { return SubgroupSpec(2, {}, UnipotentPart::FullN); }

SubgroupSpec sl2_proper_n() { return SubgroupSpec(2, {}, UnipotentPart::ProperSubgroup); }

SubgroupSpec sl3_drift_off() {
  // A line in a chosen to keep a healthy angle to the drift direction, so the
  // transverse drift component is far above any statistical threshold.
  Vector v(3);
  v << 1.0, -2.0, 1.0;
  return SubgroupSpec(3, {v / v.norm()}, UnipotentPart::FullN);
}

SubgroupSpec sl3_recurrent() {
  return SubgroupSpec(3, {sl3_drift_direction()}, UnipotentPart::FullN);
}

SubgroupSpec sl4_codim3() { return SubgroupSpec(4, {}, UnipotentPart::FullN); }

}  // namespace homwalk::examples
