#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace lbnmobo {

using Vector = std::vector<double>;
using Rng = std::mt19937_64;

// Error hierarchy shared by every module.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EvolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Direction { Minimize, Maximize };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

/// Maps a raw objective value into the all-minimize convention.
inline double to_minimize(double v, Direction d) { return d == Direction::Maximize ? -v : v; }
Vector to_minimize(std::span<const double> y, std::span<const Direction> dirs);

/// Axis-aligned box in R^n.
class DesignSpace {
public:
    DesignSpace(Vector lower, Vector upper);

    /// Unit hypercube [0,1]^n.
    static DesignSpace unit(std::size_t dim);

    std::size_t dim() const { return lower_.size(); }
    const Vector& lower() const { return lower_; }
    const Vector& upper() const { return upper_; }
    bool contains(std::span<const double> x) const;
    void clip(std::span<double> x) const;

    bool operator==(const DesignSpace&) const = default;

private:
    Vector lower_;
    Vector upper_;
};

/// Deterministic seed derivation: child = mix(master, hash(label), index).
/// Streams for different labels or indices never depend on each other, so
/// adding workers leaves existing streams untouched.
class SeedTree {
public:
    explicit SeedTree(std::uint64_t master) : master_(master) {}

    std::uint64_t master() const { return master_; }
    std::uint64_t seed(std::string_view label, std::uint64_t index = 0) const;
    SeedTree child(std::string_view label, std::uint64_t index = 0) const {
        return SeedTree(seed(label, index));
    }
    Rng rng(std::string_view label, std::uint64_t index = 0) const { return Rng(seed(label, index)); }

private:
    std::uint64_t master_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

/// `count` i.i.d. uniform points in the box.
std::vector<Vector> uniform_sample(const DesignSpace& space, std::size_t count, std::uint64_t seed);

/// Append-only archive of evaluated designs. Single writer; readers may share a
/// const reference freely.
class Dataset {
public:
    struct AppendResult {
        std::size_t accepted = 0;
        std::size_t duplicates = 0;
        std::size_t non_finite = 0;
        std::size_t rejected() const { return duplicates + non_finite; }
    };

    Dataset(std::size_t dim, std::vector<Direction> directions);

    std::size_t dim() const { return dim_; }
    std::size_t num_objectives() const { return directions_.size(); }
    const std::vector<Direction>& directions() const { return directions_; }
    std::size_t size() const { return designs_.size(); }
    bool empty() const { return designs_.empty(); }

    const std::vector<Vector>& designs() const { return designs_; }
    const std::vector<Vector>& performances() const { return performances_; }
    const std::vector<int>& iterations() const { return iterations_; }

    bool contains(std::span<const double> x) const;

    /// Rows with an exact duplicate design (against the archive or earlier rows
    /// of the same call) or a non-finite performance are rejected and counted.
    AppendResult append(std::span<const Vector> xs, std::span<const Vector> ys, int iteration);

    void write_csv(std::ostream& os) const;
    void save_csv(const std::filesystem::path& path) const;
    static Dataset read_csv(std::istream& is, std::vector<Direction> directions);
    static Dataset load_csv(const std::filesystem::path& path, std::vector<Direction> directions);

    bool operator==(const Dataset& o) const {
        return dim_ == o.dim_ && directions_ == o.directions_ && designs_ == o.designs_ &&
               performances_ == o.performances_ && iterations_ == o.iterations_;
    }

private:
    struct DesignHash {
        std::size_t operator()(const Vector& v) const;
    };

    std::size_t dim_;
    std::vector<Direction> directions_;
    std::vector<Vector> designs_;
    std::vector<Vector> performances_;
    std::vector<int> iterations_;
    std::unordered_set<Vector, DesignHash> index_;
};

/// Hash for exact component-wise design matching (+0.0 and -0.0 collide).
std::size_t hash_design(std::span<const double> x);

bool all_finite(std::span<const double> v);

/// Shortest round-trip formatting with 17 significant digits.
std::string format_double(double v);

// Worker-count cap applied to every parallel phase. 0 means hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs fn(i) for i in [0, count) with a static contiguous partition across
/// workers. Nested calls from inside a worker run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace lbnmobo
