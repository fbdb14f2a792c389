// homwalk: command-line laboratory for random walks on SL(d,R) / (A'N').
//
// Every randomized command takes --seed (env HOMWALK_SEED) and emits a
// provenance header with the seed, worker count, version tag and the full
// parameter set, so runs are reproducible byte for byte at --workers 1.
// Exit codes: 0 success, 2 when classify returns Indeterminate, 1 on error.

#include <complex>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "homwalk/classify.hpp"
#include "homwalk/decomp.hpp"
#include "homwalk/errors.hpp"
#include "homwalk/io.hpp"
#include "homwalk/lyapunov.hpp"
#include "homwalk/transfer.hpp"
#include "homwalk/walk.hpp"

namespace {

using homwalk::Json;

struct CommonOptions {
  std::string measure_path;
  std::string spec_path;
  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 1729;
  int workers = 1;
};

void write_output(const CommonOptions& opt, const std::string& text) {
  if (opt.out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    homwalk::write_text_file(opt.out_path, text.back() == '\n' ? text : text + "\n");
  }
}

void emit_json(const CommonOptions& opt, const Json& j) { write_output(opt, j.dump(2)); }

// Provenance line for CSV output; callers that write it verbatim prepend the
// comment marker, trajectory_to_csv adds its own.
std::string csv_comment(const Json& header) {
  std::ostringstream out;
  out << header["version"].get<std::string>()
      << " command=" << header["command"].get<std::string>();
  if (header.contains("seed")) out << " seed=" << header["seed"].dump();
  if (header.contains("workers")) out << " workers=" << header["workers"].dump();
  for (const auto& [key, value] : header["parameters"].items())
    out << " " << key << "=" << (value.is_string() ? value.get<std::string>() : value.dump());
  return out.str();
}

void warn_if_degenerate(const homwalk::FiniteMeasure& mu, std::uint64_t seed) {
  if (auto warning = homwalk::zariski_density_warning(mu, seed))
    std::cerr << "warning: " << *warning << "\n";
}

homwalk::FiniteMeasure load_measure_checked(const CommonOptions& opt) {
  homwalk::require(!opt.measure_path.empty(), homwalk::ErrorCode::ParseError,
                   "--measure is required for this command");
  return homwalk::load_measure(opt.measure_path);
}

homwalk::SubgroupSpec load_spec_checked(const CommonOptions& opt) {
  homwalk::require(!opt.spec_path.empty(), homwalk::ErrorCode::ParseError,
                   "--spec is required for this command");
  return homwalk::load_subgroup(opt.spec_path);
}

void check_format(const CommonOptions& opt, bool csv_supported) {
  if (opt.format == "csv" && !csv_supported)
    homwalk::fail(homwalk::ErrorCode::ParseError,
                  "this command emits JSON only; drop --format csv");
}

// --- decompose ------------------------------------------------------------

int cmd_decompose(const CommonOptions& opt, const std::string& matrix_path) {
  check_format(opt, false);
  Json j = homwalk::load_json_file(matrix_path);
  if (j.is_object() && j.contains("matrix")) j = j["matrix"];
  const homwalk::GroupElement g(homwalk::matrix_from_json(j));
  const auto triple = homwalk::iwasawa_decompose(g);
  const auto kappa = homwalk::cartan_projection(g);

  Json out;
  out["version"] = homwalk::kVersionTag;
  out["command"] = "decompose";
  out["input"] = matrix_path;
  out["k"] = homwalk::matrix_to_json(triple.k);
  Json sigma = Json::array();
  for (int i = 0; i < triple.log_diagonal.dim(); ++i) sigma.push_back(triple.log_diagonal(i));
  out["sigma"] = sigma;
  out["n"] = homwalk::matrix_to_json(triple.n);
  Json kap = Json::array();
  for (int i = 0; i < kappa.dim(); ++i) kap.push_back(kappa(i));
  out["kappa"] = kap;
  emit_json(opt, out);
  return 0;
}

// --- classify ---------------------------------------------------------------

int cmd_classify(const CommonOptions& opt, long n_steps, int n_trajectories, double z) {
  check_format(opt, false);
  const auto mu = load_measure_checked(opt);
  const auto spec = load_spec_checked(opt);
  warn_if_degenerate(mu, opt.seed);

  const auto lyap = homwalk::estimate_lyapunov(mu, n_steps, n_trajectories, opt.seed,
                                               {opt.workers});
  const auto verdict = homwalk::classify(spec, lyap, z);

  Json out = homwalk::provenance(
      "classify", opt.seed, opt.workers,
      Json{{"measure", opt.measure_path}, {"spec", opt.spec_path}, {"steps", n_steps},
           {"trajectories", n_trajectories}, {"z", z}});
  out["lyapunov"] = homwalk::lyapunov_to_json(lyap);
  out["verdict"] = homwalk::verdict_to_json(verdict);
  emit_json(opt, out);
  return verdict.kind == homwalk::VerdictKind::Indeterminate ? 2 : 0;
}

// --- lyapunov ---------------------------------------------------------------

int cmd_lyapunov(const CommonOptions& opt, long n_steps, int n_trajectories) {
  check_format(opt, false);
  const auto mu = load_measure_checked(opt);
  warn_if_degenerate(mu, opt.seed);

  const auto lyap = homwalk::estimate_lyapunov(mu, n_steps, n_trajectories, opt.seed,
                                               {opt.workers});
  Json out = homwalk::provenance(
      "lyapunov", opt.seed, opt.workers,
      Json{{"measure", opt.measure_path}, {"steps", n_steps},
           {"trajectories", n_trajectories}});
  out["estimate"] = homwalk::lyapunov_to_json(lyap);
  emit_json(opt, out);
  return 0;
}

// --- walk -------------------------------------------------------------------

int cmd_walk(const CommonOptions& opt, long n_steps, std::uint64_t trajectory_index,
             std::optional<double> radius, bool symmetrize) {
  const auto mu = load_measure_checked(opt);
  const auto spec = load_spec_checked(opt);
  warn_if_degenerate(mu, opt.seed);

  homwalk::WalkOptions wopts;
  wopts.symmetrize = symmetrize;
  const auto trajectory = homwalk::simulate_walk(
      mu, spec, homwalk::FlagPoint::base(mu.dim()),
      homwalk::Vector::Zero(spec.codim()), n_steps, opt.seed, trajectory_index, wopts);

  Json header = homwalk::provenance(
      "walk", opt.seed, opt.workers,
      Json{{"measure", opt.measure_path}, {"spec", opt.spec_path}, {"steps", n_steps},
           {"trajectory_index", trajectory_index}, {"symmetrize", symmetrize},
           {"radius", radius ? Json(*radius) : Json(nullptr)}});

  if (opt.format == "csv") {
    write_output(opt, homwalk::trajectory_to_csv(trajectory, csv_comment(header)));
    return 0;
  }
  Json out = header;
  out["points"] = homwalk::matrix_to_json(trajectory.points);
  if (radius) out["return_stats"] = homwalk::return_stats_to_json(
      homwalk::return_stats(trajectory, *radius));
  emit_json(opt, out);
  return 0;
}

// --- green ------------------------------------------------------------------

int cmd_green(const CommonOptions& opt, long n_steps, int n_trajectories, double radius,
              bool symmetrize) {
  const auto mu = load_measure_checked(opt);
  const auto spec = load_spec_checked(opt);
  warn_if_degenerate(mu, opt.seed);

  homwalk::WalkOptions wopts;
  wopts.symmetrize = symmetrize;
  const auto curve = homwalk::empirical_green(
      mu, spec, homwalk::FlagPoint::base(mu.dim()), homwalk::Vector::Zero(spec.codim()),
      radius, n_steps, n_trajectories, opt.seed, wopts, {opt.workers});

  Json header = homwalk::provenance(
      "green", opt.seed, opt.workers,
      Json{{"measure", opt.measure_path}, {"spec", opt.spec_path}, {"steps", n_steps},
           {"trajectories", n_trajectories}, {"radius", radius},
           {"symmetrize", symmetrize}});

  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "# " << csv_comment(header) << "\n" << "step,green\n";
    csv.precision(17);
    for (size_t n = 0; n < curve.size(); ++n) csv << n << "," << curve[n] << "\n";
    write_output(opt, csv.str());
    return 0;
  }
  Json out = header;
  out["green"] = curve;
  emit_json(opt, out);
  return 0;
}

// --- clt --------------------------------------------------------------------

int cmd_clt(const CommonOptions& opt, long n_steps, int n_samples, int drift_trajectories) {
  check_format(opt, false);
  const auto mu = load_measure_checked(opt);
  const auto spec = load_spec_checked(opt);
  warn_if_degenerate(mu, opt.seed);

  // The centering drift comes from an independent stream (seed phase 1), so
  // samples and centering never share letters.
  const auto drift = homwalk::estimate_lyapunov(
      mu, n_steps, drift_trajectories, homwalk::derive_seed(opt.seed, 1), {opt.workers});
  const auto report = homwalk::clt_diagnostics(mu, spec, drift, n_steps, n_samples,
                                               opt.seed, {opt.workers});

  Json out = homwalk::provenance(
      "clt", opt.seed, opt.workers,
      Json{{"measure", opt.measure_path}, {"spec", opt.spec_path}, {"steps", n_steps},
           {"samples", n_samples}, {"drift_trajectories", drift_trajectories}});
  out["drift"] = homwalk::lyapunov_to_json(drift);
  out["report"] = homwalk::clt_to_json(report);
  emit_json(opt, out);
  return 0;
}

// --- spectrum ---------------------------------------------------------------

int cmd_spectrum(const CommonOptions& opt, int n_points, double s_max, double t_step) {
  const auto mu = load_measure_checked(opt);
  const auto spec = load_spec_checked(opt);
  warn_if_degenerate(mu, opt.seed);
  homwalk::require(s_max > 0.0, homwalk::ErrorCode::ParseError,
                   "--theta must be positive for the imaginary-axis sweep");

  std::vector<homwalk::EigenReport> reports;
  reports.push_back(homwalk::leading_eigen(mu, {0.0, 0.0}, spec, n_points));
  constexpr int kSweep = 8;
  for (int j = 1; j <= kSweep; ++j) {
    const double s = s_max * static_cast<double>(j) / static_cast<double>(kSweep);
    reports.push_back(homwalk::leading_eigen(mu, {0.0, s}, spec, n_points));
  }
  const auto [d1, d2] = homwalk::log_lambda_derivatives(mu, spec, 1.0, t_step, n_points);

  double worst = 0.0;  // largest |lambda| off the origin: 1 - worst is the gap
  for (size_t i = 1; i < reports.size(); ++i)
    worst = std::max(worst, std::abs(reports[i].lambda));

  Json header = homwalk::provenance(
      "spectrum", opt.seed, opt.workers,
      Json{{"measure", opt.measure_path}, {"spec", opt.spec_path}, {"grid", n_points},
           {"theta", s_max}, {"derivative_step", t_step}});

  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "# " << csv_comment(header) << "\n"
        << "s,lambda_re,lambda_im,abs_lambda,rest_radius\n";
    csv.precision(17);
    for (const auto& r : reports)
      csv << r.theta.imag() << "," << r.lambda.real() << "," << r.lambda.imag() << ","
          << std::abs(r.lambda) << "," << r.rest_radius << "\n";
    write_output(opt, csv.str());
    return 0;
  }
  Json out = header;
  Json sweep = Json::array();
  for (const auto& r : reports) sweep.push_back(homwalk::eigen_report_to_json(r));
  out["sweep"] = sweep;
  out["dlog_lambda"] = d1;
  out["d2log_lambda"] = d2;
  out["imaginary_gap"] = 1.0 - worst;
  emit_json(opt, out);
  return 0;
}

// --- ldp --------------------------------------------------------------------

int cmd_ldp(const CommonOptions& opt, double threshold, int k_max, int n_samples) {
  check_format(opt, false);
  const auto mu = load_measure_checked(opt);
  const auto spec = load_spec_checked(opt);
  warn_if_degenerate(mu, opt.seed);

  const auto report = homwalk::large_deviation_decay(
      mu, spec, homwalk::FlagPoint::base(mu.dim()), threshold, k_max, n_samples, opt.seed,
      {opt.workers});
  Json out = homwalk::provenance(
      "ldp", opt.seed, opt.workers,
      Json{{"measure", opt.measure_path}, {"spec", opt.spec_path},
           {"threshold", threshold}, {"k_max", k_max}, {"samples", n_samples}});
  out["report"] = homwalk::ldp_to_json(report);
  emit_json(opt, out);
  return 0;
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_files = true) {
  if (with_files) {
    cmd->add_option("--measure", opt.measure_path, "measure file (JSON)");
    cmd->add_option("--spec", opt.spec_path, "subgroup file (JSON)");
  }
  cmd->add_option("--seed", opt.seed, "master seed")->envname("HOMWALK_SEED");
  cmd->add_option("--workers", opt.workers, "worker threads (0 = all cores)")
      ->check(CLI::Range(0, 1024));
  cmd->add_option("--out", opt.out_path, "output file (default: stdout)");
  cmd->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for random walks on homogeneous spaces of SL(d,R)"};
  app.require_subcommand(1);

  CommonOptions opt;
  int exit_code = 0;

  // decompose
  std::string matrix_path;
  auto* decompose = app.add_subcommand(
      "decompose", "Iwasawa and Cartan decompositions of one matrix");
  decompose->add_option("matrix-file", matrix_path, "JSON file with a d x d matrix")
      ->required();
  add_common(decompose, opt, false);
  decompose->callback([&] { exit_code = cmd_decompose(opt, matrix_path); });

  // classify
  long steps = 2000;
  int trajectories = 200;
  double z = 4.0;
  auto* classify = app.add_subcommand(
      "classify", "recurrence/transience verdict for the walk on G/(A'N')");
  add_common(classify, opt);
  classify->add_option("--steps", steps, "steps per trajectory");
  classify->add_option("--trajectories", trajectories, "number of trajectories");
  classify->add_option("--z", z, "confidence multiplier for the drift test");
  classify->callback([&] { exit_code = cmd_classify(opt, steps, trajectories, z); });

  // lyapunov
  long lsteps = 10000;
  int ltrajectories = 200;
  auto* lyapunov = app.add_subcommand("lyapunov", "Monte Carlo Lyapunov vector estimate");
  add_common(lyapunov, opt);
  lyapunov->add_option("--steps", lsteps, "steps per trajectory");
  lyapunov->add_option("--trajectories", ltrajectories, "number of trajectories");
  lyapunov->callback([&] { exit_code = cmd_lyapunov(opt, lsteps, ltrajectories); });

  // walk
  long wsteps = 10000;
  std::uint64_t windex = 0;
  double wradius = -1.0;
  bool wsym = false;
  auto* walk = app.add_subcommand("walk", "one projected-cocycle trajectory on E");
  add_common(walk, opt);
  walk->add_option("--steps", wsteps, "number of steps");
  walk->add_option("--trajectory-index", windex, "which i.i.d. stream to use");
  walk->add_option("--radius", wradius, "ball radius for return statistics");
  walk->add_flag("--symmetrize", wsym, "antithetic sign symmetrization of increments");
  walk->callback([&] {
    exit_code = cmd_walk(opt, wsteps, windex,
                         wradius > 0 ? std::optional<double>(wradius) : std::nullopt, wsym);
  });

  // green
  long gsteps = 100000;
  int gtrajectories = 200;
  double gradius = 1.0;
  bool gsym = false;
  auto* green = app.add_subcommand("green", "empirical Green function of a centered ball");
  add_common(green, opt);
  green->add_option("--steps", gsteps, "steps per trajectory");
  green->add_option("--trajectories", gtrajectories, "number of trajectories");
  green->add_option("--radius", gradius, "ball radius")->check(CLI::PositiveNumber);
  green->add_flag("--symmetrize", gsym, "antithetic sign symmetrization of increments");
  green->callback([&] {
    exit_code = cmd_green(opt, gsteps, gtrajectories, gradius, gsym);
  });

  // clt
  long csteps = 2000;
  int csamples = 10000;
  int cdrift = 200;
  auto* clt = app.add_subcommand("clt", "central-limit diagnostics of the projected cocycle");
  add_common(clt, opt);
  clt->add_option("--steps", csteps, "steps per sample");
  clt->add_option("--trajectories", csamples, "number of samples");
  clt->add_option("--drift-trajectories", cdrift, "trajectories for the centering estimate");
  clt->callback([&] { exit_code = cmd_clt(opt, csteps, csamples, cdrift); });

  // spectrum
  int grid = 1024;
  double theta = 1.0;
  double tstep = 1e-3;
  auto* spectrum = app.add_subcommand(
      "spectrum", "leading eigenvalue and spectral gap of the transfer operators (d = 2)");
  add_common(spectrum, opt);
  spectrum->add_option("--grid", grid, "grid points on the circle of lines");
  spectrum->add_option("--theta", theta, "imaginary sweep reaches i*theta");
  spectrum->add_option("--derivative-step", tstep, "finite-difference step in [1e-4, 1e-2]");
  spectrum->callback([&] { exit_code = cmd_spectrum(opt, grid, theta, tstep); });

  // ldp
  double threshold = 0.5;
  int kmax = 20;
  int nsamples = 10000;
  auto* ldp = app.add_subcommand("ldp", "large-deviation decay of the projected walk");
  add_common(ldp, opt);
  ldp->add_option("--threshold", threshold, "deviation per step, in nepers");
  ldp->add_option("--steps", kmax, "largest horizon k");
  ldp->add_option("--trajectories", nsamples, "number of sample paths");
  ldp->callback([&] { exit_code = cmd_ldp(opt, threshold, kmax, nsamples); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const homwalk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
