#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lbnmobo/core.hpp"

namespace lbnmobo {

/// Maps a batch of in-bounds designs to one performance vector each.
using BatchEvaluator = std::function<std::vector<Vector>(std::span<const Vector>)>;

/// A native forward process: the ground-truth evaluator being optimized.
struct ProblemDefinition {
    std::string name;
    DesignSpace space;
    std::size_t num_objectives = 2;
    std::vector<Direction> directions;
    BatchEvaluator evaluator;
};

/// Checks bounds, evaluates, and validates shape and finiteness of the result.
/// Row order is preserved.
std::vector<Vector> evaluate_batch(const ProblemDefinition& problem, std::span<const Vector> xs);

/// Wraps a point-wise function as a batch evaluator that runs in parallel
/// chunks of `chunk` rows.
BatchEvaluator chunked_evaluator(std::function<Vector(std::span<const double>)> point_fn,
                                 std::size_t chunk = 1024);

// Canonical ZDT1/2/3, [0,1]^n, both objectives minimized.
ProblemDefinition zdt_suite(int variant, std::size_t n);
Vector zdt_point(int variant, std::span<const double> x);

// Canonical DTLZ1/DTLZ4 (alpha = 100), [0,1]^n, all objectives minimized.
ProblemDefinition dtlz_suite(int variant, std::size_t n, std::size_t m);
Vector dtlz_point(int variant, std::span<const double> x, std::size_t m);

/// Subprocess-backed NFP. Each batch is written to `<workdir>/batch_<k>_in.csv`
/// (header x_0..x_{n-1}); the command is run as
/// `<command> --in <in.csv> --out <out.csv>` and must exit 0 after writing
/// `<out.csv>` with header y_0..y_{M-1} and one row per input row. Calls are
/// serialized per evaluator instance.
ProblemDefinition external_nfp(const std::string& command, const std::filesystem::path& workdir,
                               DesignSpace space, std::size_t num_objectives,
                               std::vector<Direction> directions = {});

struct ProblemInfo {
    std::string name;
    std::string description;
};
std::vector<ProblemInfo> builtin_problems();

}  // namespace lbnmobo
