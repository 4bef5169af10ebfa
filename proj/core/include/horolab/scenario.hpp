#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "horolab/json_io.hpp"

namespace horolab {

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<double> tol;
    std::optional<long> n;
    std::optional<std::uint64_t> seed;
    bool parallel = false;
};

struct ScenarioReport {
    std::string name;
    json doc;  // {"name","task","seed","results","assertions","pass"}
    std::vector<std::pair<std::string, std::string>> traces;  // filename -> csv body
    bool pass = true;
};

/// Runs a parsed scenario document. Tasks: evaluate, orbit-limit,
/// subinvariance, translation, average, fixed-point, ump, replicate.
/// Throws SchemaError for malformed documents.
ScenarioReport run_scenario(const json& doc, const std::string& name, const RunOptions& opts);

/// Built-in catalog of worked-example scenarios.
std::vector<std::string> replicate_ids();
ScenarioReport replicate(const std::string& id, const RunOptions& opts);

/// Writes report JSON and CSV traces atomically (temp file + rename).
void write_report(const ScenarioReport& r, const RunOptions& opts);

/// CLI drivers; return the process exit code: 0 all assertions pass,
/// 1 assertion failure, 2 schema or input error.
int run_files(const std::vector<std::filesystem::path>& files, const RunOptions& opts);
int run_replicates(const std::vector<std::string>& ids, const RunOptions& opts);

}  // namespace horolab
