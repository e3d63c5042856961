#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lbnmobo/core.hpp"
#include "lbnmobo/moea.hpp"
#include "lbnmobo/surrogate.hpp"

namespace lbnmobo {

struct AcquisitionConfig {
    std::size_t batch_size = 1000;
    std::size_t num_seeds = 0;  // 0: ceil(batch_size / per_seed_population)
    std::size_t per_seed_population = 100;
    NsgaConfig nsga{.generations = 500};  // population and seed are set per run
    bool use_uncertainty = true;

    void validate() const;
    std::size_t resolved_num_seeds() const;
    /// per_seed_population rounded up to an even count.
    std::size_t resolved_population() const;
    bool operator==(const AcquisitionConfig&) const = default;
};

/// Acquisition search space in the all-minimize convention: dimension m is the
/// predicted mean of objective m (negated when maximized), dimension M+m is
/// minus the epistemic variance of objective m. Without uncertainty only the
/// first M dimensions are produced.
std::vector<Vector> acquisition_objectives(const EnsembleMoments& moments, std::span<const Direction> directions,
                                           bool use_uncertainty);
std::vector<Vector> acquisition_objectives(const EnsembleSurrogate& surrogate, std::span<const Direction> directions,
                                           std::span<const Vector> xs, bool use_uncertainty);

/// Front-by-front fill of `count` slots with crowding-distance truncation of
/// the last front. Returns pool indices in selection order.
std::vector<std::size_t> select_candidates(std::span<const Vector> objectives, std::size_t count);

struct AcquisitionDiagnostics {
    std::vector<std::size_t> seed_front_sizes;
    std::size_t pooled = 0;
    std::size_t duplicates_known = 0;
    std::size_t duplicates_internal = 0;
    std::size_t topped_up = 0;
    std::vector<Vector> predicted_mean;
    std::vector<Vector> predicted_variance;

    std::string to_json() const;
};

struct AcquisitionResult {
    std::vector<Vector> candidates;
    AcquisitionDiagnostics diagnostics;
};

/// Independent NSGA-II runs on the surrogate (seed i draws from
/// SeedTree(seed).seed("acq-seed", i)), merged, de-duplicated against `known`
/// and each other, and cut to exactly batch_size candidates. Shortfalls are
/// topped up with uniform samples.
AcquisitionResult acquire(const EnsembleSurrogate& surrogate, const DesignSpace& space, const Dataset& known,
                          const AcquisitionConfig& cfg, std::uint64_t seed);

}  // namespace lbnmobo
