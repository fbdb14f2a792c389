// Benchmark of the OpenMP kernels against their serial reference paths.
// Each kernel is run both ways; the outputs must agree bit for bit (the
// parallel design writes one slot per trajectory and reduces in fixed order),
// and the wall times are reported side by side.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "homwalk/examples.hpp"
#include "homwalk/lyapunov.hpp"
#include "homwalk/transfer.hpp"
#include "homwalk/walk.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int available_workers() { return homwalk::resolve_workers(0); }

struct Row {
  const char* name;
  double serial_s;
  double parallel_s;
  bool identical;
};

void print_rows(const std::vector<Row>& rows) {
  std::printf("%-28s %12s %12s %9s %10s\n", "kernel", "serial[s]", "parallel[s]",
              "speedup", "identical");
  for (const auto& r : rows) {
    std::printf("%-28s %12.3f %12.3f %8.2fx %10s\n", r.name, r.serial_s, r.parallel_s,
                r.serial_s / (r.parallel_s > 0 ? r.parallel_s : 1e-12),
                r.identical ? "yes" : "NO");
  }
}

}  // namespace

int main() {
  const int workers = available_workers();
  std::printf("parallel path uses %d worker(s)\n\n", workers);

  std::vector<Row> rows;
  const auto mu2 = homwalk::examples::sl2_hyperbolic();
  const auto mu3 = homwalk::examples::sl3_generic();
  const auto spec2 = homwalk::examples::sl2_full();

  {
    constexpr long kSteps = 4000;
    constexpr int kTrajectories = 64;
    auto t0 = Clock::now();
    const auto serial = homwalk::estimate_lyapunov(mu3, kSteps, kTrajectories, 7, {1});
    const double ts = seconds_since(t0);
    t0 = Clock::now();
    const auto parallel = homwalk::estimate_lyapunov(mu3, kSteps, kTrajectories, 7, {0});
    const double tp = seconds_since(t0);
    const bool same = serial.mean.coords() == parallel.mean.coords() &&
                      serial.std_error == parallel.std_error;
    rows.push_back({"lyapunov d=3", ts, tp, same});
  }

  {
    constexpr long kSteps = 20000;
    constexpr int kTrajectories = 64;
    const auto eta = homwalk::FlagPoint::base(2);
    const homwalk::Vector t0vec = homwalk::Vector::Zero(1);
    auto t0 = Clock::now();
    const auto serial = homwalk::empirical_green(mu2, spec2, eta, t0vec, 2.0, kSteps,
                                                 kTrajectories, 11, {}, {1});
    const double ts = seconds_since(t0);
    t0 = Clock::now();
    const auto parallel = homwalk::empirical_green(mu2, spec2, eta, t0vec, 2.0, kSteps,
                                                   kTrajectories, 11, {}, {0});
    const double tp = seconds_since(t0);
    rows.push_back({"green d=2", ts, tp, serial == parallel});
  }

  {
    constexpr int kPoints = 4096;
    constexpr int kRepeats = 400;
    const homwalk::TransferAssembly assembly(mu2, spec2, kPoints);
    homwalk::ComplexVector f(kPoints), out(kPoints);
    for (int i = 0; i < kPoints; ++i)
      f(i) = homwalk::Complex(std::cos(0.01 * i), std::sin(0.013 * i));
    const homwalk::Complex theta(0.05, 0.2);

    auto t0 = Clock::now();
    homwalk::ComplexVector serial = f;
    for (int r = 0; r < kRepeats; ++r) {
      assembly.apply_serial(serial, theta, out);
      serial.swap(out);
      serial /= serial.norm();
    }
    const double ts = seconds_since(t0);

    t0 = Clock::now();
    homwalk::ComplexVector parallel = f;
    for (int r = 0; r < kRepeats; ++r) {
      assembly.apply(parallel, theta, out, {0});
      parallel.swap(out);
      parallel /= parallel.norm();
    }
    const double tp = seconds_since(t0);
    const bool same = std::memcmp(serial.data(), parallel.data(),
                                  sizeof(homwalk::Complex) * kPoints) == 0;
    rows.push_back({"transfer apply n=4096", ts, tp, same});
  }

  print_rows(rows);
  bool all_same = true;
  for (const auto& r : rows) all_same = all_same && r.identical;
  return all_same ? 0 : 1;
}
