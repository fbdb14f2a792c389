#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>

#include "homwalk/classify.hpp"
#include "homwalk/lyapunov.hpp"
#include "homwalk/transfer.hpp"
#include "homwalk/walk.hpp"

namespace homwalk {

// Insertion-ordered JSON keeps provenance first and makes output byte-stable.
using Json = nlohmann::ordered_json;

inline constexpr const char* kVersionTag = "homwalk 0.1.0";

// Parses text or a file into JSON, turning parser exceptions into ParseError
// with the parser's position diagnostic preserved.
Json parse_json(const std::string& text);
Json load_json_file(const std::string& path);

Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);

// Measure files: { "dim": d, "atoms": [ { "weight": w, "matrix": [[..]] } ] }
// with matrices row-major.
FiniteMeasure measure_from_json(const Json& j);
Json measure_to_json(const FiniteMeasure& mu);
FiniteMeasure load_measure(const std::string& path);

// Subgroup files: { "dim": d, "a_prime_basis": [[..], ..],
//                   "unipotent_part": "full" | "proper" }
SubgroupSpec subgroup_from_json(const Json& j);
Json subgroup_to_json(const SubgroupSpec& spec);
SubgroupSpec load_subgroup(const std::string& path);

// Header attached to every randomized artifact: command, version tag, seed,
// worker count and the parameters that shaped the run.
Json provenance(const std::string& command, std::uint64_t seed, int workers,
                const Json& parameters);

Json verdict_to_json(const Verdict& v);
Json lyapunov_to_json(const LyapunovEstimate& est);
Json covariance_to_json(const CovarianceEstimate& est);
Json clt_to_json(const CltReport& report);
Json eigen_report_to_json(const EigenReport& report);
Json ldp_to_json(const LdpReport& report);
Json return_stats_to_json(const ReturnStats& stats);

// CSV with columns step, coord_1..coord_k; comment lines carry provenance.
std::string trajectory_to_csv(const WalkTrajectory& trajectory,
                              const std::string& comment);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace homwalk
