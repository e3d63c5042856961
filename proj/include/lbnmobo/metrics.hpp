#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lbnmobo/core.hpp"

namespace lbnmobo {

// All fronts and reference points here are in the all-minimize convention.

struct HypervolumeSpec {
    Vector reference_point;
    Vector ideal_point;  // lower corner of the sampling box
    std::size_t mc_samples = 1'000'000;

    void validate() const;

    /// Box lower corner at the front's component-wise minimum minus a 5% margin
    /// of the distance to the reference point.
    static HypervolumeSpec around(std::span<const Vector> front, std::span<const double> reference,
                                  double margin = 0.05);
};

struct HypervolumeEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Exact dominated area of a 2-D front. Points beyond the reference point in
/// any coordinate are discarded; dominated points contribute nothing.
double hypervolume_2d_exact(std::span<const Vector> front, std::span<const double> reference);

/// Uniform Monte-Carlo estimate over the [ideal, reference] box. The standard
/// error is the binomial one scaled by the box volume. Samples are drawn in
/// fixed-size chunks with per-chunk child seeds, so the estimate does not
/// depend on the worker count.
HypervolumeEstimate hypervolume_mc(std::span<const Vector> front, const HypervolumeSpec& spec, std::uint64_t seed);

/// Exact for two objectives, Monte-Carlo (error > 0) otherwise.
HypervolumeEstimate hypervolume(std::span<const Vector> front, std::span<const double> reference,
                                std::size_t mc_samples, std::uint64_t seed);

/// Non-dominated subset of the g = 1 slice of ZDT1/2/3, sampled on a uniform
/// x1 grid with `resolution` points, in ascending f1 order.
std::vector<Vector> reference_front(int zdt_variant, std::size_t resolution);

/// Default reference point for a built-in problem: (11, 11) for ZDT, 1.1 per
/// objective for DTLZ. Empty for unknown problems.
Vector default_reference_point(const std::string& problem_name, std::size_t num_objectives);

/// Mean Euclidean distance over all unordered pairs.
double mean_pairwise_distance(std::span<const Vector> points);

}  // namespace lbnmobo
