#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lbnmobo/optimizer.hpp"

namespace lbnmobo {

struct SnapshotInfo {
    std::string problem;
    std::string mode;
    int iteration = 0;
    std::vector<Direction> directions;
    Vector reference_point;
};

/// Reads state.json of the last complete snapshot. Throws LoadError when the
/// directory holds none.
SnapshotInfo last_snapshot_info(const std::filesystem::path& run_dir);

/// metrics.json of every complete snapshot, ascending by iteration.
std::vector<IterationMetrics> load_history(const std::filesystem::path& run_dir);

/// iteration,hv,stderr,front_size,dataset_size,train_s,acquire_s,evaluate_s
void write_hv_evolution_csv(std::ostream& os, const std::vector<IterationMetrics>& history);

/// Rows keyed by the union of iterations; missing cells stay empty.
void write_compare_csv(std::ostream& os, const std::vector<IterationMetrics>& a,
                       const std::vector<IterationMetrics>& b);

/// Scatter of the first two objectives, with an optional reference front drawn
/// as a polyline.
std::string render_front_svg(const std::vector<Vector>& front, const std::vector<Vector>& reference,
                             const std::string& title);

struct ReportFiles {
    std::filesystem::path hv_evolution;
    std::filesystem::path pareto_front;
    std::filesystem::path svg;
};

/// Writes hv_evolution.csv, pareto_front.csv and pareto_front.svg into out_dir.
ReportFiles write_report(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir);

}  // namespace lbnmobo
