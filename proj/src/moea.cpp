#include "lbnmobo/moea.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "lbnmobo/metrics.hpp"

namespace lbnmobo {

bool dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ArgumentError("dominates: objective vectors differ in length");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

Fronts fast_nondominated_sort(std::span<const Vector> objectives) {
    const std::size_t n = objectives.size();
    Fronts fronts;
    if (n == 0) return fronts;
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(objectives[p], objectives[q])) {
                dominated[p].push_back(q);
                ++count[q];
            } else if (dominates(objectives[q], objectives[p])) {
                dominated[q].push_back(p);
                ++count[p];
            }
        }
    }
    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p)
        if (count[p] == 0) current.push_back(p);
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto p : current)
            for (auto q : dominated[p])
                if (--count[q] == 0) next.push_back(q);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<std::size_t> nondominated_indices(std::span<const Vector> objectives) {
    std::vector<std::size_t> order(objectives.size());
    std::iota(order.begin(), order.end(), 0);
    // A dominator always precedes its victim lexicographically.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return objectives[a] < objectives[b]; });
    std::vector<std::size_t> kept;
    for (auto i : order) {
        const bool beaten = std::any_of(kept.begin(), kept.end(),
                                        [&](std::size_t k) { return dominates(objectives[k], objectives[i]); });
        if (!beaten) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

std::vector<double> crowding_distance(std::span<const Vector> objectives, std::span<const std::size_t> front) {
    const std::size_t size = front.size();
    std::vector<double> dist(size, 0.0);
    if (size <= 2) {
        std::fill(dist.begin(), dist.end(), kInfiniteCrowding);
        return dist;
    }
    const std::size_t dims = objectives[front[0]].size();
    std::vector<std::size_t> order(size);
    for (std::size_t d = 0; d < dims; ++d) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return objectives[front[a]][d] < objectives[front[b]][d];
        });
        const double lo = objectives[front[order.front()]][d];
        const double hi = objectives[front[order.back()]][d];
        const double range = hi - lo;
        // A flat objective carries no spacing information, boundaries included.
        if (!(range > 0.0)) continue;
        dist[order.front()] = kInfiniteCrowding;
        dist[order.back()] = kInfiniteCrowding;
        for (std::size_t i = 1; i + 1 < size; ++i) {
            const double gap = objectives[front[order[i + 1]]][d] - objectives[front[order[i - 1]]][d];
            dist[order[i]] += gap / range;
        }
    }
    return dist;
}

std::vector<double> crowding_distance(std::span<const Vector> front) {
    std::vector<std::size_t> idx(front.size());
    std::iota(idx.begin(), idx.end(), 0);
    return crowding_distance(front, idx);
}

// ---------------------------------------------------------------------------

void NsgaConfig::validate() const {
    if (population < 4 || population % 2 != 0) throw ConfigError("NSGA-II population must be even and >= 4");
    if (generations < 1) throw ConfigError("NSGA-II generations must be >= 1");
    auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob_ok(sbx_prob)) throw ConfigError("SBX probability must be in [0,1]");
    if (mut_prob && !prob_ok(*mut_prob)) throw ConfigError("mutation probability must be in [0,1]");
    if (!(sbx_eta >= 0.0) || !(mut_eta >= 0.0)) throw ConfigError("distribution indices must be non-negative");
}

void assign_rank_and_crowding(Population& pop) {
    std::vector<Vector> objs;
    objs.reserve(pop.size());
    for (const auto& ind : pop) objs.push_back(ind.objectives);
    const auto fronts = fast_nondominated_sort(objs);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        const auto cd = crowding_distance(objs, fronts[r]);
        for (std::size_t i = 0; i < fronts[r].size(); ++i) {
            pop[fronts[r][i]].rank = static_cast<int>(r);
            pop[fronts[r][i]].crowding = cd[i];
        }
    }
}

std::vector<std::size_t> environmental_selection(std::span<const Vector> objectives, std::size_t count) {
    const auto fronts = fast_nondominated_sort(objectives);
    std::vector<std::size_t> selected;
    selected.reserve(count);
    for (const auto& front : fronts) {
        if (selected.size() >= count) break;
        if (selected.size() + front.size() <= count) {
            selected.insert(selected.end(), front.begin(), front.end());
            continue;
        }
        const auto cd = crowding_distance(objectives, front);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
        for (std::size_t i = 0; selected.size() < count; ++i) selected.push_back(front[order[i]]);
    }
    return selected;
}

std::size_t tournament(const Population& pop, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (pop[a].rank != pop[b].rank) return pop[a].rank < pop[b].rank ? a : b;
    if (pop[a].crowding != pop[b].crowding) return pop[a].crowding > pop[b].crowding ? a : b;
    return std::uniform_int_distribution<int>(0, 1)(rng) ? a : b;
}

std::pair<Vector, Vector> sbx_crossover(std::span<const double> p1, std::span<const double> p2,
                                        const DesignSpace& space, double eta, double prob, Rng& rng) {
    constexpr double kEps = 1e-14;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector c1(p1.begin(), p1.end()), c2(p2.begin(), p2.end());
    if (!(unit(rng) < prob)) return {c1, c2};
    const double exponent = 1.0 / (eta + 1.0);
    auto spread = [&](double beta, double u) {
        const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
        return u <= 1.0 / alpha ? std::pow(u * alpha, exponent) : std::pow(1.0 / (2.0 - u * alpha), exponent);
    };
    for (std::size_t i = 0; i < c1.size(); ++i) {
        if (unit(rng) > 0.5) continue;
        if (std::abs(p1[i] - p2[i]) <= kEps) continue;
        const double y1 = std::min(p1[i], p2[i]);
        const double y2 = std::max(p1[i], p2[i]);
        const double lo = space.lower()[i], hi = space.upper()[i];
        const double u = unit(rng);
        const double bq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1), u);
        const double bq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1), u);
        const double a = std::clamp(0.5 * ((y1 + y2) - bq1 * (y2 - y1)), lo, hi);
        const double b = std::clamp(0.5 * ((y1 + y2) + bq2 * (y2 - y1)), lo, hi);
        if (unit(rng) <= 0.5) {
            c1[i] = b;
            c2[i] = a;
        } else {
            c1[i] = a;
            c2[i] = b;
        }
    }
    return {c1, c2};
}

void polynomial_mutation(std::span<double> x, const DesignSpace& space, double eta, double prob, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double power = 1.0 / (eta + 1.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(unit(rng) < prob)) continue;
        const double lo = space.lower()[i], hi = space.upper()[i];
        const double y = x[i];
        const double d1 = (y - lo) / (hi - lo);
        const double d2 = (hi - y) / (hi - lo);
        const double u = unit(rng);
        double deltaq;
        if (u <= 0.5) {
            const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
            deltaq = std::pow(val, power) - 1.0;
        } else {
            const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
            deltaq = 1.0 - std::pow(val, power);
        }
        x[i] = std::clamp(y + deltaq * (hi - lo), lo, hi);
    }
}

std::vector<Vector> make_offspring(const Population& pop, const DesignSpace& space, const NsgaConfig& cfg,
                                   std::size_t count, Rng& rng) {
    std::vector<Vector> children;
    children.reserve(count + 1);
    const double pm = cfg.mutation_probability(space.dim());
    while (children.size() < count) {
        const auto& a = pop[tournament(pop, rng)].x;
        const auto& b = pop[tournament(pop, rng)].x;
        auto [c1, c2] = sbx_crossover(a, b, space, cfg.sbx_eta, cfg.sbx_prob, rng);
        polynomial_mutation(c1, space, cfg.mut_eta, pm, rng);
        polynomial_mutation(c2, space, cfg.mut_eta, pm, rng);
        space.clip(c1);
        space.clip(c2);
        children.push_back(std::move(c1));
        if (children.size() < count) children.push_back(std::move(c2));
    }
    return children;
}

namespace {

std::vector<Vector> evaluate_checked(const ObjectiveFn& fn, std::span<const Vector> xs, int generation) {
    auto ys = fn(xs);
    if (ys.size() != xs.size())
        throw EvolutionError("objective function returned the wrong number of rows in generation " +
                             std::to_string(generation));
    for (const auto& y : ys)
        if (y.empty() || !all_finite(y))
            throw EvolutionError("objective function returned a non-finite value in generation " +
                                 std::to_string(generation));
    return ys;
}

}  // namespace

Population nsga2_run(const ObjectiveFn& objective_fn, const DesignSpace& space, const NsgaConfig& cfg,
                     const GenerationObserver& observer) {
    cfg.validate();
    const SeedTree tree(cfg.seed);
    Rng rng = tree.rng("nsga2");
    const std::size_t n = cfg.population;

    Population pop(n);
    {
        auto xs = uniform_sample(space, n, tree.seed("init"));
        auto ys = evaluate_checked(objective_fn, xs, 0);
        for (std::size_t i = 0; i < n; ++i) pop[i] = Individual{std::move(xs[i]), std::move(ys[i])};
    }
    assign_rank_and_crowding(pop);
    if (observer) observer(0, pop);

    for (int gen = 1; gen <= cfg.generations; ++gen) {
        auto children = make_offspring(pop, space, cfg, n, rng);
        auto child_obj = evaluate_checked(objective_fn, children, gen);
        std::vector<Vector> pool_obj;
        pool_obj.reserve(2 * n);
        for (const auto& ind : pop) pool_obj.push_back(ind.objectives);
        for (const auto& y : child_obj) pool_obj.push_back(y);
        const auto keep = environmental_selection(pool_obj, n);
        Population next;
        next.reserve(n);
        for (auto i : keep) {
            if (i < n)
                next.push_back(pop[i]);
            else
                next.push_back(Individual{std::move(children[i - n]), std::move(child_obj[i - n])});
        }
        pop = std::move(next);
        assign_rank_and_crowding(pop);
        if (observer) observer(gen, pop);
    }
    return pop;
}

// ---------------------------------------------------------------------------

GenerationObserver GenerationTrace::observer() {
    return [this](int generation, const Population& pop) {
        std::vector<Vector> front;
        for (const auto& ind : pop)
            if (ind.rank == 0) front.push_back(ind.objectives);
        Row row{generation, front.size(), std::nullopt};
        if (reference_) {
            if (reference_->size() == 2) {
                row.hypervolume = hypervolume_2d_exact(front, *reference_);
            } else {
                HypervolumeSpec spec = HypervolumeSpec::around(front, *reference_);
                spec.mc_samples = 100000;
                row.hypervolume = hypervolume_mc(front, spec, static_cast<std::uint64_t>(generation)).estimate;
            }
        }
        rows_.push_back(row);
    };
}

void GenerationTrace::write_csv(std::ostream& os) const {
    os << "generation,front0_size" << (reference_ ? ",hypervolume" : "") << '\n';
    for (const auto& r : rows_) {
        os << r.generation << ',' << r.front0_size;
        if (reference_) os << ',' << (r.hypervolume ? format_double(*r.hypervolume) : "");
        os << '\n';
    }
}

}  // namespace lbnmobo
