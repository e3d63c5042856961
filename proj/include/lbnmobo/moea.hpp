#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "lbnmobo/core.hpp"

namespace lbnmobo {

// Everything in this header uses the all-minimize convention.

/// a <= b component-wise with at least one strict inequality.
bool dominates(std::span<const double> a, std::span<const double> b);

using Fronts = std::vector<std::vector<std::size_t>>;

/// Deb's fast non-dominated sort. Indices inside each front are ascending.
Fronts fast_nondominated_sort(std::span<const Vector> objectives);

/// Indices of the non-dominated members, ascending. O(N * |front|) memory-light
/// filter for large archives.
std::vector<std::size_t> nondominated_indices(std::span<const Vector> objectives);

/// Crowding distance of every member of `front` (indices into `objectives`),
/// returned in front order. Boundary members get +inf; objectives with zero
/// range across the front contribute nothing.
std::vector<double> crowding_distance(std::span<const Vector> objectives, std::span<const std::size_t> front);
std::vector<double> crowding_distance(std::span<const Vector> front);

inline constexpr double kInfiniteCrowding = std::numeric_limits<double>::infinity();

struct Individual {
    Vector x;
    Vector objectives;
    int rank = 0;
    double crowding = 0.0;
};
using Population = std::vector<Individual>;

struct NsgaConfig {
    std::size_t population = 100;
    int generations = 100;
    double sbx_eta = 15.0;
    double sbx_prob = 0.9;
    double mut_eta = 20.0;
    std::optional<double> mut_prob;  // unset: 1/n
    std::uint64_t seed = 0;

    double mutation_probability(std::size_t dim) const { return mut_prob ? *mut_prob : 1.0 / static_cast<double>(dim); }
    void validate() const;
    bool operator==(const NsgaConfig&) const = default;
};

using ObjectiveFn = std::function<std::vector<Vector>(std::span<const Vector>)>;

/// Annotates rank (front index) and crowding (within the front) in place.
void assign_rank_and_crowding(Population& pop);

/// Picks `count` survivors ordered by (rank asc, crowding desc, index asc).
std::vector<std::size_t> environmental_selection(std::span<const Vector> objectives, std::size_t count);

/// Binary tournament on (rank, crowding); full ties resolved by a coin flip.
std::size_t tournament(const Population& pop, Rng& rng);

/// Deb's bounded simulated binary crossover. Returns two children.
std::pair<Vector, Vector> sbx_crossover(std::span<const double> p1, std::span<const double> p2,
                                        const DesignSpace& space, double eta, double prob, Rng& rng);

/// Deb's bounded polynomial mutation, applied per variable with probability `prob`.
void polynomial_mutation(std::span<double> x, const DesignSpace& space, double eta, double prob, Rng& rng);

/// Offspring by tournament, SBX and polynomial mutation, clipped to the box.
/// `pop` must carry rank/crowding annotations.
std::vector<Vector> make_offspring(const Population& pop, const DesignSpace& space, const NsgaConfig& cfg,
                                   std::size_t count, Rng& rng);

using GenerationObserver = std::function<void(int generation, const Population& pop)>;

/// Generational elitist NSGA-II from a uniform initial population. Returns
/// the final population annotated with rank and crowding.
Population nsga2_run(const ObjectiveFn& objective_fn, const DesignSpace& space, const NsgaConfig& cfg,
                     const GenerationObserver& observer = {});

/// Collects `generation, front0_size[, hypervolume]` rows from an observer.
class GenerationTrace {
public:
    explicit GenerationTrace(std::optional<Vector> reference_point = std::nullopt)
        : reference_(std::move(reference_point)) {}

    GenerationObserver observer();
    void write_csv(std::ostream& os) const;

    struct Row {
        int generation;
        std::size_t front0_size;
        std::optional<double> hypervolume;
    };
    const std::vector<Row>& rows() const { return rows_; }

private:
    std::optional<Vector> reference_;
    std::vector<Row> rows_;
};

}  // namespace lbnmobo
