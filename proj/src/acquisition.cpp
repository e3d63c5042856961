#include "lbnmobo/acquisition.hpp"

#include <json.hpp>
#include <unordered_set>

namespace lbnmobo {

void AcquisitionConfig::validate() const {
    if (batch_size < 1) throw ConfigError("acquisition batch size must be >= 1");
    if (per_seed_population < 4) throw ConfigError("per-seed population must be >= 4");
    NsgaConfig probe = nsga;
    probe.population = resolved_population();
    probe.validate();
}

std::size_t AcquisitionConfig::resolved_num_seeds() const {
    if (num_seeds > 0) return num_seeds;
    return (batch_size + per_seed_population - 1) / per_seed_population;
}

std::size_t AcquisitionConfig::resolved_population() const { return per_seed_population + per_seed_population % 2; }

std::vector<Vector> acquisition_objectives(const EnsembleMoments& moments, std::span<const Direction> directions,
                                           bool use_uncertainty) {
    const std::size_t m = directions.size();
    std::vector<Vector> out(moments.mean.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        auto& v = out[j];
        v.resize(use_uncertainty ? 2 * m : m);
        for (std::size_t o = 0; o < m; ++o) {
            v[o] = to_minimize(moments.mean[j][o], directions[o]);
            if (use_uncertainty) v[m + o] = -moments.variance[j][o];
        }
    }
    return out;
}

std::vector<Vector> acquisition_objectives(const EnsembleSurrogate& surrogate, std::span<const Direction> directions,
                                           std::span<const Vector> xs, bool use_uncertainty) {
    if (directions.size() != surrogate.output_dim()) throw ArgumentError("direction count does not match surrogate");
    return acquisition_objectives(surrogate.moments(xs), directions, use_uncertainty);
}

std::vector<std::size_t> select_candidates(std::span<const Vector> objectives, std::size_t count) {
    return environmental_selection(objectives, std::min(count, objectives.size()));
}

std::string AcquisitionDiagnostics::to_json() const {
    nlohmann::json j;
    j["seed_front_sizes"] = seed_front_sizes;
    j["pooled"] = pooled;
    j["duplicates_known"] = duplicates_known;
    j["duplicates_internal"] = duplicates_internal;
    j["topped_up"] = topped_up;
    j["predicted_mean"] = predicted_mean;
    j["predicted_variance"] = predicted_variance;
    return j.dump(1);
}

namespace {

struct DesignKeyHash {
    std::size_t operator()(const Vector& v) const { return hash_design(v); }
};

}  // namespace

AcquisitionResult acquire(const EnsembleSurrogate& surrogate, const DesignSpace& space, const Dataset& known,
                          const AcquisitionConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (surrogate.input_dim() != space.dim()) throw ArgumentError("surrogate input dimension differs from the design space");
    const auto& dirs = known.directions();
    if (dirs.size() != surrogate.output_dim()) throw ArgumentError("dataset objectives differ from surrogate outputs");

    const SeedTree tree(seed);
    const std::size_t seeds = cfg.resolved_num_seeds();
    std::vector<Population> finals(seeds);
    const ObjectiveFn fn = [&](std::span<const Vector> xs) {
        return acquisition_objectives(surrogate, dirs, xs, cfg.use_uncertainty);
    };
    parallel_for(seeds, [&](std::size_t s) {
        NsgaConfig nc = cfg.nsga;
        nc.population = cfg.resolved_population();
        nc.seed = tree.seed("acq-seed", s);
        finals[s] = nsga2_run(fn, space, nc);
    });

    AcquisitionResult result;
    auto& diag = result.diagnostics;
    std::vector<Vector> pool_x, pool_obj;
    std::unordered_set<Vector, DesignKeyHash> seen;
    for (const auto& pop : finals) {
        std::size_t front0 = 0;
        for (const auto& ind : pop) {
            front0 += ind.rank == 0;
            ++diag.pooled;
            if (known.contains(ind.x)) {
                ++diag.duplicates_known;
                continue;
            }
            if (!seen.insert(ind.x).second) {
                ++diag.duplicates_internal;
                continue;
            }
            pool_x.push_back(ind.x);
            pool_obj.push_back(ind.objectives);
        }
        diag.seed_front_sizes.push_back(front0);
    }

    for (auto i : select_candidates(pool_obj, cfg.batch_size)) result.candidates.push_back(pool_x[i]);

    if (result.candidates.size() < cfg.batch_size) {
        Rng rng = tree.rng("topup");
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        while (result.candidates.size() < cfg.batch_size) {
            Vector x(space.dim());
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] = std::min(space.upper()[i], space.lower()[i] + unit(rng) * (space.upper()[i] - space.lower()[i]));
            if (known.contains(x) || !seen.insert(x).second) continue;
            result.candidates.push_back(std::move(x));
            ++diag.topped_up;
        }
    }

    const auto mom = surrogate.moments(result.candidates);
    diag.predicted_mean = mom.mean;
    diag.predicted_variance = mom.variance;
    return result;
}

}  // namespace lbnmobo
