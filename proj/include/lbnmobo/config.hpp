#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lbnmobo/optimizer.hpp"

namespace lbnmobo {

struct ProblemSpec {
    std::string name = "zdt3";
    std::size_t dim = 0;         // 0: 30 for ZDT, 6 for DTLZ
    std::size_t objectives = 0;  // 0: 2 for ZDT, 3 for DTLZ
    // external problems only
    std::string command;
    std::string workdir;
    Vector lower;
    Vector upper;
    std::vector<Direction> directions;

    std::size_t resolved_dim() const;
    std::size_t resolved_objectives() const;
    bool operator==(const ProblemSpec&) const = default;
};

ProblemDefinition make_problem(const ProblemSpec& spec);

/// Everything a run needs, in serializable form.
struct AppConfig {
    ProblemSpec problem;
    RunMode mode = RunMode::LbnMobo;
    std::size_t batch_size = 1000;
    int iterations = 10;
    std::size_t init_size = 0;
    SurrogateConfig surrogate;
    AcquisitionConfig acquisition;
    Vector reference_point;
    std::size_t mc_samples = 1'000'000;
    std::uint64_t seed = 0;
    std::string output_dir;
    unsigned threads = 0;  // 0: hardware concurrency
    bool record_wall_times = true;

    RunConfig to_run_config() const;
    /// Defaults made explicit: problem sizes and the activation roster.
    AppConfig resolved() const;
    bool operator==(const AppConfig&) const = default;
};

/// Strict JSON parsing: unknown keys and wrong types raise ConfigError.
/// Missing keys keep their defaults.
AppConfig parse_config(const std::string& json_text);
AppConfig load_config(const std::filesystem::path& path);

/// Every key present, defaults resolved; parse_config(to_json(c)) == c.resolved().
std::string to_json(const AppConfig& cfg);

}  // namespace lbnmobo
