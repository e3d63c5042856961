#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lbnmobo/acquisition.hpp"
#include "lbnmobo/core.hpp"
#include "lbnmobo/problems.hpp"
#include "lbnmobo/surrogate.hpp"

namespace lbnmobo {

enum class RunMode { LbnMobo, Nsga2Baseline, RandomBaseline, AblateUncertainty };

std::string_view to_string(RunMode m);
RunMode parse_run_mode(std::string_view s);

struct SurrogateConfig {
    std::size_t members = 10;
    std::vector<Activation> activations;  // empty: default roster cycled over `members`
    std::vector<std::size_t> hidden_widths = kBenchmarkHiddenWidths;
    TrainConfig train;

    std::vector<Activation> roster() const;
    std::vector<MlpSpec> specs(std::size_t input_dim, std::size_t output_dim) const;
    bool operator==(const SurrogateConfig&) const = default;
};

struct RunConfig {
    ProblemDefinition problem;
    RunMode mode = RunMode::LbnMobo;
    std::size_t batch_size = 1000;
    int iterations = 10;
    std::size_t init_size = 0;  // 0: batch_size
    SurrogateConfig surrogate;
    AcquisitionConfig acquisition;  // batch_size and use_uncertainty follow the run
    Vector reference_point;         // all-minimize; empty: problem default or derived from the initial batch
    std::size_t mc_samples = 1'000'000;
    std::uint64_t master_seed = 0;
    std::filesystem::path output_dir;
    bool record_wall_times = true;

    std::size_t resolved_init_size() const { return init_size ? init_size : batch_size; }
    AcquisitionConfig resolved_acquisition() const;
    bool trains_surrogate() const { return mode == RunMode::LbnMobo || mode == RunMode::AblateUncertainty; }
    void validate() const;
};

struct WallTimes {
    double train = 0.0;
    double acquire = 0.0;
    double evaluate = 0.0;
    bool operator==(const WallTimes&) const = default;
};

struct IterationMetrics {
    int iteration = 0;
    double hv_estimate = 0.0;
    double hv_std_error = 0.0;
    std::size_t front_size = 0;
    std::size_t dataset_size = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t topped_up = 0;
    WallTimes wall_times;

    std::string to_json() const;
    static IterationMetrics from_json(const std::string& text);
    bool operator==(const IterationMetrics&) const = default;
};

struct ParetoResult {
    std::vector<std::size_t> indices;  // dataset rows, ascending
    std::vector<Vector> designs;       // P_S
    std::vector<Vector> performances;  // P_F, raw NFP values
};

/// Non-dominated rows of the dataset under its objective directions.
ParetoResult extract_pareto(const Dataset& ds);

struct RunState {
    int iteration = 0;
    Dataset dataset;
    ParetoResult pareto;
    std::vector<IterationMetrics> history;
    Vector reference_point;
    std::optional<EnsembleSurrogate> surrogate;
    Population parents;  // NSGA-II baseline only
};

/// Thrown when an iteration fails after at least one snapshot was written.
struct RunError : std::runtime_error {
    RunError(const std::string& what, int last_snapshot)
        : std::runtime_error(what), last_snapshot(last_snapshot) {}
    int last_snapshot;
};

/// Initial design, then `iterations` rounds of propose, evaluate, append and
/// retrain. Writes `iter_<k>/` snapshots under cfg.output_dir after every round.
RunState run(const RunConfig& cfg);

/// Continues the run stored in cfg.output_dir from its last complete snapshot.
/// Every random stream is derived from (master_seed, iteration), so the
/// remaining snapshots match an uninterrupted run.
RunState resume(const RunConfig& cfg);

/// Loads the last complete snapshot without running anything.
RunState load_state(const RunConfig& cfg);

std::filesystem::path snapshot_dir(const std::filesystem::path& output_dir, int iteration);
/// Iterations with a complete snapshot, ascending.
std::vector<int> list_snapshots(const std::filesystem::path& output_dir);

}  // namespace lbnmobo
