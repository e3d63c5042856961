#include "lbnmobo/optimizer.hpp"

#include <chrono>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lbnmobo/metrics.hpp"
#include "lbnmobo/moea.hpp"

namespace lbnmobo {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(RunMode m) {
    switch (m) {
        case RunMode::LbnMobo: return "lbn-mobo";
        case RunMode::Nsga2Baseline: return "nsga2-baseline";
        case RunMode::RandomBaseline: return "random-baseline";
        case RunMode::AblateUncertainty: return "ablate-uncertainty";
    }
    return "?";
}

RunMode parse_run_mode(std::string_view s) {
    for (auto m : {RunMode::LbnMobo, RunMode::Nsga2Baseline, RunMode::RandomBaseline, RunMode::AblateUncertainty})
        if (to_string(m) == s) return m;
    throw ConfigError("unknown mode '" + std::string(s) + "'");
}

std::vector<Activation> SurrogateConfig::roster() const {
    if (activations.empty()) return default_activation_roster(members);
    std::vector<Activation> out(members);
    for (std::size_t k = 0; k < members; ++k) out[k] = activations[k % activations.size()];
    return out;
}

std::vector<MlpSpec> SurrogateConfig::specs(std::size_t input_dim, std::size_t output_dim) const {
    return ensemble_specs(input_dim, output_dim, hidden_widths, roster());
}

AcquisitionConfig RunConfig::resolved_acquisition() const {
    AcquisitionConfig a = acquisition;
    a.batch_size = batch_size;
    a.use_uncertainty = mode != RunMode::AblateUncertainty && acquisition.use_uncertainty;
    return a;
}

void RunConfig::validate() const {
    if (!problem.evaluator) throw ConfigError("run has no problem evaluator");
    if (iterations < 0) throw ConfigError("iterations must be >= 0");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (output_dir.empty()) throw ConfigError("output directory is not set");
    if (!reference_point.empty() && reference_point.size() != problem.num_objectives)
        throw ConfigError("reference point has the wrong number of objectives");
    if (mc_samples == 0) throw ConfigError("mc_samples must be positive");
    if (trains_surrogate()) {
        surrogate.train.validate();
        if (surrogate.members < 2) throw ConfigError("the ensemble needs at least two members");
        if (surrogate.hidden_widths.empty()) throw ConfigError("the surrogate needs at least one hidden layer");
        if (resolved_init_size() < static_cast<std::size_t>(surrogate.train.minibatch))
            throw ConfigError("initial sample size must be >= the training minibatch");
        resolved_acquisition().validate();
    }
    if (mode == RunMode::Nsga2Baseline) {
        NsgaConfig nc = acquisition.nsga;
        nc.population = batch_size + batch_size % 2;
        nc.validate();
    }
}

// ---------------------------------------------------------------------------

std::string IterationMetrics::to_json() const {
    json j;
    j["iteration"] = iteration;
    j["hv_estimate"] = hv_estimate;
    j["hv_std_error"] = hv_std_error;
    j["front_size"] = front_size;
    j["dataset_size"] = dataset_size;
    j["accepted"] = accepted;
    j["rejected"] = rejected;
    j["topped_up"] = topped_up;
    j["wall_times"] = {{"train", wall_times.train}, {"acquire", wall_times.acquire}, {"evaluate", wall_times.evaluate}};
    return j.dump(2) + "\n";
}

IterationMetrics IterationMetrics::from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        IterationMetrics m;
        m.iteration = j.at("iteration").get<int>();
        m.hv_estimate = j.at("hv_estimate").get<double>();
        m.hv_std_error = j.at("hv_std_error").get<double>();
        m.front_size = j.at("front_size").get<std::size_t>();
        m.dataset_size = j.at("dataset_size").get<std::size_t>();
        m.accepted = j.at("accepted").get<std::size_t>();
        m.rejected = j.at("rejected").get<std::size_t>();
        m.topped_up = j.at("topped_up").get<std::size_t>();
        const auto& w = j.at("wall_times");
        m.wall_times = {w.at("train").get<double>(), w.at("acquire").get<double>(), w.at("evaluate").get<double>()};
        return m;
    } catch (const json::exception& e) {
        throw LoadError(std::string("malformed metrics.json: ") + e.what());
    }
}

ParetoResult extract_pareto(const Dataset& ds) {
    std::vector<Vector> mins;
    mins.reserve(ds.size());
    for (const auto& y : ds.performances()) mins.push_back(to_minimize(y, ds.directions()));
    ParetoResult r;
    r.indices = nondominated_indices(mins);
    for (auto i : r.indices) {
        r.designs.push_back(ds.designs()[i]);
        r.performances.push_back(ds.performances()[i]);
    }
    return r;
}

fs::path snapshot_dir(const fs::path& output_dir, int iteration) {
    return output_dir / ("iter_" + std::to_string(iteration));
}

std::vector<int> list_snapshots(const fs::path& output_dir) {
    std::vector<int> out;
    if (!fs::is_directory(output_dir)) return out;
    for (const auto& e : fs::directory_iterator(output_dir)) {
        const auto name = e.path().filename().string();
        if (!e.is_directory() || !name.starts_with("iter_")) continue;
        const auto digits = name.substr(5);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) continue;
        if (!fs::exists(e.path() / "state.json")) continue;
        out.push_back(std::stoi(digits));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Vector> minimize_all(std::span<const Vector> ys, std::span<const Direction> dirs) {
    std::vector<Vector> out;
    out.reserve(ys.size());
    for (const auto& y : ys) out.push_back(to_minimize(y, dirs));
    return out;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << text;
}

std::string read_text(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw LoadError("cannot open " + p.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_rows_csv(const fs::path& p, std::span<const Vector> xs, std::span<const Vector> ys,
                    const std::string& y_prefix) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    const std::size_t n = xs.empty() ? 0 : xs.front().size();
    const std::size_t m = ys.empty() ? 0 : ys.front().size();
    std::string header;
    for (std::size_t i = 0; i < n; ++i) header += "x_" + std::to_string(i) + ",";
    for (std::size_t j = 0; j < m; ++j) header += y_prefix + std::to_string(j) + ",";
    if (!header.empty()) header.pop_back();
    os << header << '\n';
    for (std::size_t r = 0; r < xs.size(); ++r) {
        std::string line;
        for (double v : xs[r]) line += format_double(v) + ",";
        if (r < ys.size())
            for (double v : ys[r]) line += format_double(v) + ",";
        if (!line.empty()) line.pop_back();
        os << line << '\n';
    }
}

Population read_population_csv(const fs::path& p, std::size_t n, std::size_t m) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw LoadError("cannot open " + p.string());
    std::string line;
    std::getline(is, line);
    Population pop;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        Vector vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
        if (vals.size() != n + m) throw LoadError("malformed population.csv row");
        pop.push_back(Individual{Vector(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(n)),
                                 Vector(vals.begin() + static_cast<std::ptrdiff_t>(n), vals.end())});
    }
    assign_rank_and_crowding(pop);
    return pop;
}

class Runner {
public:
    explicit Runner(const RunConfig& cfg) : cfg_(cfg), seeds_(cfg.master_seed) {}

    RunState start() {
        cfg_.validate();
        fs::create_directories(cfg_.output_dir);
        const auto& p = cfg_.problem;
        RunState st{.iteration = 0, .dataset = Dataset(p.space.dim(), p.directions)};
        const SeedTree it = seeds_.child("iteration", 0);

        IterationMetrics met;
        auto t0 = Clock::now();
        const auto xs = uniform_sample(p.space, cfg_.resolved_init_size(), it.seed("sample"));
        const auto ys = evaluate_batch(p, xs);
        met.wall_times.evaluate = seconds_since(t0);
        const auto added = st.dataset.append(xs, ys, 0);
        met.accepted = added.accepted;
        met.rejected = added.rejected();

        st.reference_point = cfg_.reference_point;
        if (st.reference_point.empty()) st.reference_point = default_reference_point(p.name, p.num_objectives);
        if (st.reference_point.empty()) st.reference_point = derive_reference(st.dataset);

        if (cfg_.mode == RunMode::Nsga2Baseline) {
            const auto mins = minimize_all(st.dataset.performances(), p.directions);
            for (auto i : environmental_selection(mins, std::min(nsga_population(), mins.size())))
                st.parents.push_back(Individual{st.dataset.designs()[i], mins[i]});
            assign_rank_and_crowding(st.parents);
        }
        if (cfg_.trains_surrogate()) {
            t0 = Clock::now();
            st.surrogate = train(st.dataset, it);
            met.wall_times.train = seconds_since(t0);
        }
        finish_iteration(st, met, xs, ys);
        return st;
    }

    RunState load() const {
        const auto snaps = list_snapshots(cfg_.output_dir);
        if (snaps.empty()) throw LoadError("no snapshots in " + cfg_.output_dir.string());
        const int k = snaps.back();
        const auto dir = snapshot_dir(cfg_.output_dir, k);
        json state;
        try {
            state = json::parse(read_text(dir / "state.json"));
        } catch (const json::exception& e) {
            throw LoadError("corrupt snapshot state in " + dir.string() + ": " + e.what());
        }
        const auto& p = cfg_.problem;
        try {
            if (state.at("problem").get<std::string>() != p.name)
                throw LoadError("snapshot belongs to problem '" + state.at("problem").get<std::string>() +
                                "', not '" + p.name + "'");
            if (state.at("mode").get<std::string>() != to_string(cfg_.mode))
                throw LoadError("snapshot was produced in mode '" + state.at("mode").get<std::string>() + "'");
            if (state.at("master_seed").get<std::uint64_t>() != cfg_.master_seed)
                throw LoadError("snapshot master seed differs from the configuration");
            if (state.at("dim").get<std::size_t>() != p.space.dim() ||
                state.at("objectives").get<std::size_t>() != p.num_objectives)
                throw LoadError("snapshot dimensions differ from the configured problem");
            if (state.at("iteration").get<int>() != k) throw LoadError("snapshot iteration tag is inconsistent");
        } catch (const json::exception& e) {
            throw LoadError(std::string("corrupt snapshot state: ") + e.what());
        }
        RunState st{.iteration = k, .dataset = Dataset::load_csv(dir / "dataset.csv", p.directions)};
        st.reference_point = state.at("reference_point").get<Vector>();
        for (int i : snaps)
            if (i <= k)
                st.history.push_back(IterationMetrics::from_json(read_text(snapshot_dir(cfg_.output_dir, i) / "metrics.json")));
        st.pareto = extract_pareto(st.dataset);
        if (cfg_.trains_surrogate()) st.surrogate = EnsembleSurrogate::load(dir / "surrogate.ckpt");
        if (cfg_.mode == RunMode::Nsga2Baseline)
            st.parents = read_population_csv(dir / "population.csv", p.space.dim(), p.num_objectives);
        return st;
    }

    void iterate(RunState& st, int k) {
        const auto& p = cfg_.problem;
        const SeedTree it = seeds_.child("iteration", static_cast<std::uint64_t>(k));
        IterationMetrics met;

        auto t0 = Clock::now();
        std::vector<Vector> xs;
        std::string diagnostics;
        switch (cfg_.mode) {
            case RunMode::LbnMobo:
            case RunMode::AblateUncertainty: {
                auto acq = acquire(*st.surrogate, p.space, st.dataset, cfg_.resolved_acquisition(), it.seed("acquire"));
                met.topped_up = acq.diagnostics.topped_up;
                diagnostics = acq.diagnostics.to_json();
                xs = std::move(acq.candidates);
                break;
            }
            case RunMode::RandomBaseline:
                xs = uniform_sample(p.space, cfg_.batch_size, it.seed("sample"));
                break;
            case RunMode::Nsga2Baseline: {
                NsgaConfig nc = cfg_.acquisition.nsga;
                nc.population = nsga_population();
                Rng rng = it.rng("nsga2-baseline");
                xs = make_offspring(st.parents, p.space, nc, cfg_.batch_size, rng);
                break;
            }
        }
        met.wall_times.acquire = seconds_since(t0);

        t0 = Clock::now();
        const auto ys = evaluate_batch(p, xs);
        met.wall_times.evaluate = seconds_since(t0);
        const auto added = st.dataset.append(xs, ys, k);
        met.accepted = added.accepted;
        met.rejected = added.rejected();

        if (cfg_.mode == RunMode::Nsga2Baseline) {
            Population pool = st.parents;
            const auto mins = minimize_all(ys, p.directions);
            for (std::size_t i = 0; i < xs.size(); ++i) pool.push_back(Individual{xs[i], mins[i]});
            std::vector<Vector> pool_obj;
            for (const auto& ind : pool) pool_obj.push_back(ind.objectives);
            Population next;
            for (auto i : environmental_selection(pool_obj, std::min(nsga_population(), pool.size())))
                next.push_back(pool[i]);
            assign_rank_and_crowding(next);
            st.parents = std::move(next);
        }
        if (cfg_.trains_surrogate()) {
            t0 = Clock::now();
            st.surrogate = train(st.dataset, it);
            met.wall_times.train = seconds_since(t0);
        }
        st.iteration = k;
        finish_iteration(st, met, xs, ys, diagnostics);
    }

private:
    std::size_t nsga_population() const { return cfg_.batch_size + cfg_.batch_size % 2; }

    EnsembleSurrogate train(const Dataset& ds, const SeedTree& it) const {
        const auto& p = cfg_.problem;
        return train_ensemble(ds, p.space, cfg_.surrogate.specs(p.space.dim(), p.num_objectives), cfg_.surrogate.train,
                              it.seed("train"));
    }

    /// Nadir of the initial batch pushed out by 10% of its range.
    static Vector derive_reference(const Dataset& ds) {
        const auto mins = minimize_all(ds.performances(), ds.directions());
        Vector lo = mins.front(), hi = mins.front();
        for (const auto& y : mins)
            for (std::size_t i = 0; i < y.size(); ++i) {
                lo[i] = std::min(lo[i], y[i]);
                hi[i] = std::max(hi[i], y[i]);
            }
        Vector ref(hi.size());
        for (std::size_t i = 0; i < hi.size(); ++i) ref[i] = hi[i] + std::max(0.1 * (hi[i] - lo[i]), 1e-9);
        return ref;
    }

    void finish_iteration(RunState& st, IterationMetrics& met, std::span<const Vector> xs, std::span<const Vector> ys,
                          const std::string& diagnostics = {}) {
        const auto& p = cfg_.problem;
        st.pareto = extract_pareto(st.dataset);
        const auto front = minimize_all(st.pareto.performances, p.directions);
        const auto hv = hypervolume(front, st.reference_point, cfg_.mc_samples,
                                    seeds_.child("iteration", static_cast<std::uint64_t>(st.iteration)).seed("hv"));
        met.iteration = st.iteration;
        met.hv_estimate = hv.estimate;
        met.hv_std_error = hv.std_error;
        met.front_size = st.pareto.indices.size();
        met.dataset_size = st.dataset.size();
        if (!cfg_.record_wall_times) met.wall_times = {};
        st.history.push_back(met);

        const auto dir = snapshot_dir(cfg_.output_dir, st.iteration);
        auto tmp = dir;
        tmp += ".partial";
        fs::remove_all(tmp);
        fs::create_directories(tmp);
        st.dataset.save_csv(tmp / "dataset.csv");
        write_rows_csv(tmp / "candidates.csv", xs, ys, "y_");
        write_text(tmp / "metrics.json", met.to_json());
        if (st.surrogate) st.surrogate->save(tmp / "surrogate.ckpt");
        if (!diagnostics.empty()) write_text(tmp / "acquisition.json", diagnostics);
        if (cfg_.mode == RunMode::Nsga2Baseline) {
            std::vector<Vector> px, py;
            for (const auto& ind : st.parents) {
                px.push_back(ind.x);
                py.push_back(ind.objectives);
            }
            write_rows_csv(tmp / "population.csv", px, py, "f_");
        }
        json state;
        state["problem"] = p.name;
        state["mode"] = std::string(to_string(cfg_.mode));
        state["master_seed"] = cfg_.master_seed;
        state["iteration"] = st.iteration;
        state["dim"] = p.space.dim();
        state["objectives"] = p.num_objectives;
        state["reference_point"] = st.reference_point;
        std::vector<std::string> dirs;
        for (auto d : p.directions) dirs.emplace_back(to_string(d));
        state["directions"] = dirs;
        write_text(tmp / "state.json", state.dump(2) + "\n");
        fs::remove_all(dir);
        fs::rename(tmp, dir);
    }

    const RunConfig& cfg_;
    SeedTree seeds_;
};

RunState continue_run(const RunConfig& cfg, Runner& runner, RunState st) {
    for (int k = st.iteration + 1; k <= cfg.iterations; ++k) {
        try {
            runner.iterate(st, k);
        } catch (const std::exception& e) {
            throw RunError("iteration " + std::to_string(k) + " failed: " + e.what() +
                               " (resume from snapshot iter_" + std::to_string(st.iteration) + ")",
                           st.iteration);
        }
    }
    return st;
}

}  // namespace

RunState run(const RunConfig& cfg) {
    Runner runner(cfg);
    return continue_run(cfg, runner, runner.start());
}

RunState load_state(const RunConfig& cfg) { return Runner(cfg).load(); }

RunState resume(const RunConfig& cfg) {
    cfg.validate();
    Runner runner(cfg);
    return continue_run(cfg, runner, runner.load());
}

}  // namespace lbnmobo
