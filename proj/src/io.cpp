#include "homwalk/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace homwalk {

namespace {

const Json& field(const Json& j, const char* name) {
  const auto it = j.find(name);
  require(it != j.end(), ErrorCode::ParseError,
          std::string("missing field \"") + name + "\"");
  return *it;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ParseError, path + ": " + e.what());
  }
}

Matrix matrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), ErrorCode::ParseError,
          "matrix must be a nonempty array of rows");
  const size_t rows = j.size();
  size_t cols = 0;
  Matrix m;
  for (size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    require(row.is_array() && !row.empty(), ErrorCode::ParseError,
            "matrix row " + std::to_string(r) + " must be a nonempty array");
    if (r == 0) {
      cols = row.size();
      m.resize(static_cast<long>(rows), static_cast<long>(cols));
    }
    require(row.size() == cols, ErrorCode::ParseError,
            "matrix rows have inconsistent lengths");
    for (size_t c = 0; c < cols; ++c) {
      require(row[c].is_number(), ErrorCode::ParseError, "matrix entries must be numbers");
      m(static_cast<long>(r), static_cast<long>(c)) = row[c].get<double>();
    }
  }
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (long r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

FiniteMeasure measure_from_json(const Json& j) {
  require(j.is_object(), ErrorCode::ParseError, "measure must be a JSON object");
  const int dim = field(j, "dim").get<int>();
  const Json& atoms = field(j, "atoms");
  require(atoms.is_array(), ErrorCode::ParseError, "\"atoms\" must be an array");
  std::vector<std::pair<double, Matrix>> pairs;
  for (const Json& a : atoms) {
    const Json& w = field(a, "weight");
    require(w.is_number(), ErrorCode::ParseError, "atom weight must be a number");
    Matrix m = matrix_from_json(field(a, "matrix"));
    require(m.rows() == dim && m.cols() == dim, ErrorCode::ParseError,
            "atom matrix does not match the declared dimension");
    pairs.emplace_back(w.get<double>(), std::move(m));
  }
  return make_measure(std::move(pairs));
}

Json measure_to_json(const FiniteMeasure& mu) {
  Json j;
  j["dim"] = mu.dim();
  Json atoms = Json::array();
  for (const Atom& a : mu.atoms()) {
    Json atom;
    atom["weight"] = a.weight;
    atom["matrix"] = matrix_to_json(a.element.matrix());
    atoms.push_back(std::move(atom));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

FiniteMeasure load_measure(const std::string& path) {
  return measure_from_json(load_json_file(path));
}

SubgroupSpec subgroup_from_json(const Json& j) {
  require(j.is_object(), ErrorCode::ParseError, "subgroup spec must be a JSON object");
  const int dim = field(j, "dim").get<int>();
  const Json& basis = field(j, "a_prime_basis");
  require(basis.is_array(), ErrorCode::ParseError, "\"a_prime_basis\" must be an array");
  std::vector<Vector> vectors;
  for (const Json& row : basis) {
    require(row.is_array(), ErrorCode::ParseError, "basis vectors must be arrays");
    Vector v(static_cast<long>(row.size()));
    for (size_t c = 0; c < row.size(); ++c) {
      require(row[c].is_number(), ErrorCode::ParseError, "basis entries must be numbers");
      v(static_cast<long>(c)) = row[c].get<double>();
    }
    vectors.push_back(std::move(v));
  }
  const std::string part = field(j, "unipotent_part").get<std::string>();
  UnipotentPart up;
  if (part == "full")
    up = UnipotentPart::FullN;
  else if (part == "proper")
    up = UnipotentPart::ProperSubgroup;
  else
    fail(ErrorCode::ParseError, "unipotent_part must be \"full\" or \"proper\", got \"" +
                                    part + "\"");
  return SubgroupSpec(dim, std::move(vectors), up);
}

Json subgroup_to_json(const SubgroupSpec& spec) {
  Json j;
  j["dim"] = spec.dim();
  Json basis = Json::array();
  for (const Vector& v : spec.a_prime_basis()) {
    Json row = Json::array();
    for (long c = 0; c < v.size(); ++c) row.push_back(v(c));
    basis.push_back(std::move(row));
  }
  j["a_prime_basis"] = std::move(basis);
  j["unipotent_part"] = spec.unipotent_part() == UnipotentPart::FullN ? "full" : "proper";
  return j;
}

SubgroupSpec load_subgroup(const std::string& path) {
  return subgroup_from_json(load_json_file(path));
}

Json provenance(const std::string& command, std::uint64_t seed, int workers,
                const Json& parameters) {
  Json j;
  j["command"] = command;
  j["version"] = kVersionTag;
  j["seed"] = seed;
  j["workers"] = workers;
  j["parameters"] = parameters;
  return j;
}

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["kind"] = to_string(v.kind);
  j["reason"] = to_string(v.reason);
  j["distance_to_aprime"] = v.distance_to_aprime;
  j["threshold"] = v.threshold;
  return j;
}

Json lyapunov_to_json(const LyapunovEstimate& est) {
  Json j;
  Json mean = Json::array(), se = Json::array();
  for (int c = 0; c < est.mean.dim(); ++c) {
    mean.push_back(est.mean(c));
    se.push_back(est.std_error(c));
  }
  j["mean"] = std::move(mean);
  j["stderr"] = std::move(se);
  j["n_steps"] = est.n_steps;
  j["n_trajectories"] = est.n_trajectories;
  return j;
}

Json covariance_to_json(const CovarianceEstimate& est) {
  Json j;
  j["cov"] = matrix_to_json(est.matrix);
  j["n_samples"] = est.n_samples;
  j["n_steps"] = est.n_steps;
  return j;
}

namespace {

Json marginals_to_json(const std::vector<MarginalStats>& stats) {
  Json arr = Json::array();
  for (const MarginalStats& s : stats) {
    Json j;
    j["variance"] = s.variance;
    j["skewness"] = s.skewness;
    j["excess_kurtosis"] = s.excess_kurtosis;
    j["ks_statistic"] = s.ks_statistic;
    j["ks_band"] = s.ks_band;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

Json clt_to_json(const CltReport& report) {
  Json j;
  j["degenerate"] = report.degenerate;
  j["n_steps"] = report.n_steps;
  j["n_samples"] = report.n_samples;
  j["base_flag"] = marginals_to_json(report.base_flag);
  j["probe_flag"] = marginals_to_json(report.probe_flag);
  return j;
}

Json eigen_report_to_json(const EigenReport& report) {
  Json j;
  j["theta"] = Json::array({report.theta.real(), report.theta.imag()});
  j["lambda"] = Json::array({report.lambda.real(), report.lambda.imag()});
  j["lambda_abs"] = std::abs(report.lambda);
  j["rest_radius"] = report.rest_radius;
  j["iterations"] = report.iterations;
  j["grid_points"] = report.eigenfunction.size();
  return j;
}

Json ldp_to_json(const LdpReport& report) {
  Json j;
  j["threshold"] = report.threshold;
  j["k_max"] = report.k_max;
  j["n_samples"] = report.n_samples;
  Json freq = Json::array();
  for (double f : report.log_frequency) {
    if (std::isfinite(f))
      freq.push_back(f);
    else
      freq.push_back(nullptr);  // JSON has no -inf; null marks "never observed"
  }
  j["log_frequency"] = std::move(freq);
  j["slope"] = report.slope;
  j["intercept"] = report.intercept;
  j["r_squared"] = report.r_squared;
  return j;
}

Json return_stats_to_json(const ReturnStats& stats) {
  Json j;
  j["radius"] = stats.radius;
  j["n_returns"] = stats.return_times.size();
  j["return_times"] = stats.return_times;
  j["last_exit"] = stats.last_exit;
  return j;
}

std::string trajectory_to_csv(const WalkTrajectory& trajectory, const std::string& comment) {
  std::ostringstream out;
  out.precision(17);
  if (!comment.empty()) out << "# " << comment << "\n";
  const long k = trajectory.points.cols();
  out << "step";
  for (long c = 1; c <= k; ++c) out << ",coord_" << c;
  out << "\n";
  for (long r = 0; r < trajectory.points.rows(); ++r) {
    out << (r);
    for (long c = 0; c < k; ++c) out << "," << trajectory.points(r, c);
    out << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::ParseError, "cannot write " + path);
  out << text;
  require(out.good(), ErrorCode::ParseError, "failed while writing " + path);
}

}  // namespace homwalk
