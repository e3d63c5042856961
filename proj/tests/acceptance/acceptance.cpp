// Acceptance gate: one PASS/FAIL line per criterion.
//
// Usage: lbnmobo_acceptance [work_dir] [criterion...]
// With no criteria listed every criterion runs. The work directory is wiped
// first unless LBNMOBO_ACCEPTANCE_REUSE is set.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "lbnmobo/config.hpp"
#include "lbnmobo/metrics.hpp"
#include "lbnmobo/moea.hpp"
#include "lbnmobo/optimizer.hpp"
#include "lbnmobo/surrogate.hpp"

using namespace lbnmobo;
namespace fs = std::filesystem;

namespace {

fs::path g_work;
std::map<std::string, RunState> g_runs;

void note(const char* fmt, auto... args) {
    std::printf("  ");
    std::printf(fmt, args...);
    std::printf("\n");
    std::fflush(stdout);
}

RunConfig base_config(const std::string& problem, std::size_t dim, RunMode mode, std::uint64_t seed, int iterations) {
    AppConfig app;
    app.problem.name = problem;
    app.problem.dim = dim;
    app.mode = mode;
    app.batch_size = 1000;
    app.iterations = iterations;
    app.seed = seed;
    app.record_wall_times = false;
    auto cfg = app.resolved().to_run_config();
    cfg.output_dir = g_work / (problem + "-" + std::to_string(dim) + "-" + std::string(to_string(mode)) + "-" +
                               std::to_string(seed));
    return cfg;
}

const RunState& cached_run(const std::string& problem, std::size_t dim, RunMode mode, std::uint64_t seed,
                           int iterations) {
    auto cfg = base_config(problem, dim, mode, seed, iterations);
    const auto key = cfg.output_dir.string();
    auto it = g_runs.find(key);
    if (it != g_runs.end() && static_cast<int>(it->second.history.size()) > iterations) return it->second;
    const auto t0 = std::chrono::steady_clock::now();
    RunState st = list_snapshots(cfg.output_dir).empty() ? run(cfg) : resume(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    note("%s seed %llu: %d iterations in %.0f s", key.c_str(), static_cast<unsigned long long>(seed), iterations,
         secs);
    g_runs.insert_or_assign(key, std::move(st));
    return g_runs.at(key);
}

double reference_hv(int variant) {
    return hypervolume_2d_exact(reference_front(variant, 10000), Vector{11.0, 11.0});
}

double mean_hv_fraction(const std::string& problem, int variant, std::size_t dim, int iteration, int max_iter) {
    const double ref = reference_hv(variant);
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto& st = cached_run(problem, dim, RunMode::LbnMobo, seed, max_iter);
        const double f = st.history.at(iteration).hv_estimate / ref;
        note("seed %llu iteration %d: hv %.4f / %.4f = %.4f%%", static_cast<unsigned long long>(seed), iteration,
             st.history.at(iteration).hv_estimate, ref, 100.0 * f);
        sum += f;
    }
    return sum / 3.0;
}

bool threshold(double frac, double needed, const char* what) {
    note("%s: mean %.4f%% (needs >= %.1f%%)", what, 100.0 * frac, 100.0 * needed);
    return frac >= needed;
}

bool criterion_zdt3_6d() {
    const bool a = threshold(mean_hv_fraction("zdt3", 3, 6, 1, 3), 0.97, "iteration 1");
    const bool b = threshold(mean_hv_fraction("zdt3", 3, 6, 3, 3), 0.99, "iteration 3");
    return a && b;
}

bool criterion_zdt3_30d() {
    const bool a = threshold(mean_hv_fraction("zdt3", 3, 30, 3, 5), 0.95, "iteration 3");
    const bool b = threshold(mean_hv_fraction("zdt3", 3, 30, 5, 5), 0.98, "iteration 5");
    return a && b;
}

bool criterion_zdt12_30d() {
    const bool a = threshold(mean_hv_fraction("zdt1", 1, 30, 2, 2), 0.97, "zdt1 iteration 2");
    const bool b = threshold(mean_hv_fraction("zdt2", 2, 30, 2, 2), 0.97, "zdt2 iteration 2");
    return a && b;
}

double candidate_spread(const RunState& st, int iteration) {
    std::vector<Vector> ys;
    for (std::size_t i = 0; i < st.dataset.size(); ++i)
        if (st.dataset.iterations()[i] == iteration) ys.push_back(st.dataset.performances()[i]);
    return mean_pairwise_distance(ys);
}

bool criterion_ablation() {
    int hv_ok = 0, spread_ok = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        // Reuses the full-mode runs of the 30-D criterion when present.
        const int full_iters = g_runs.count(base_config("zdt3", 30, RunMode::LbnMobo, seed, 5).output_dir.string())
                                   ? 5
                                   : 3;
        const auto& full = cached_run("zdt3", 30, RunMode::LbnMobo, seed, full_iters);
        const auto& abl = cached_run("zdt3", 30, RunMode::AblateUncertainty, seed, 3);
        const double hf = full.history.at(3).hv_estimate, ha = abl.history.at(3).hv_estimate;
        const double sf = candidate_spread(full, 3), sa = candidate_spread(abl, 3);
        note("seed %llu: hv full %.4f ablated %.4f, spread full %.4f ablated %.4f",
             static_cast<unsigned long long>(seed), hf, ha, sf, sa);
        hv_ok += ha <= hf;
        spread_ok += sf > sa;
    }
    note("ablated hv <= full on %d/3 seeds, full spread > ablated on %d/3 seeds", hv_ok, spread_ok);
    return hv_ok >= 2 && spread_ok >= 2;
}

// ---- oracle equivalences ----

bool brute_dominates(const Vector& a, const Vector& b) {
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly = true;
    }
    return strictly;
}

Fronts brute_fronts(const std::vector<Vector>& pts) {
    std::vector<bool> left(pts.size(), true);
    std::size_t remaining = pts.size();
    Fronts out;
    while (remaining) {
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!left[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
                dominated = left[j] && j != i && brute_dominates(pts[j], pts[i]);
            if (!dominated) front.push_back(i);
        }
        for (auto i : front) left[i] = false;
        remaining -= front.size();
        out.push_back(front);
    }
    return out;
}

bool sort_oracle() {
    int bad = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Rng rng(seed);
        std::uniform_int_distribution<int> size(1, 150), grid(0, 5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const std::size_t n = size(rng), d = 2 + seed % 4;
        std::vector<Vector> pts(n, Vector(d));
        for (auto& p : pts)
            for (auto& v : p) v = seed % 3 == 0 ? grid(rng) : u(rng);
        bad += fast_nondominated_sort(pts) != brute_fronts(pts);
    }
    note("non-dominated sort: %d/500 instances differ from brute force", bad);
    return bad == 0;
}

double hv_inclusion_exclusion(const std::vector<Vector>& pts, const Vector& ref) {
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << pts.size()); ++mask) {
        double x = -INFINITY, y = -INFINITY;
        int bits = 0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (mask & (std::size_t{1} << i)) {
                ++bits;
                x = std::max(x, pts[i][0]);
                y = std::max(y, pts[i][1]);
            }
        total += (bits % 2 ? 1.0 : -1.0) * std::max(0.0, ref[0] - x) * std::max(0.0, ref[1] - y);
    }
    return total;
}

bool hv_oracle() {
    Rng rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int outside = 0;
    double worst_exact = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vector> pts;
        for (int i = 0; i < 2 + trial % 12; ++i) {
            const double a = u(rng);
            pts.push_back({a, (1.0 - a) * (0.5 + 0.5 * u(rng))});
        }
        const Vector ref{1.1, 1.1};
        const double exact = hypervolume_2d_exact(pts, ref);
        worst_exact = std::max(worst_exact, std::abs(exact - hv_inclusion_exclusion(pts, ref)));
        auto spec = HypervolumeSpec::around(pts, ref);
        spec.mc_samples = 200000;
        const auto est = hypervolume_mc(pts, spec, 500 + trial);
        outside += std::abs(est.estimate - exact) > 3.0 * est.std_error;
    }
    note("hypervolume: exact vs inclusion-exclusion max gap %.3g; MC outside 3 std errors on %d/50 fronts",
         worst_exact, outside);
    return outside == 0 && worst_exact <= 1e-12;
}

bool variance_oracle() {
    const auto roster = default_activation_roster(10);
    Rng rng(5);
    std::vector<Mlp> members;
    for (auto act : roster) members.push_back(Mlp::glorot(MlpSpec{4, 2, {100, 50, 100}, act}, rng));
    const EnsembleSurrogate s(std::move(members), InputScaler{Vector(4, 0.0), Vector(4, 1.0)},
                              OutputScaler{{1.0, -2.0}, {2.0, 0.5}});
    const auto xs = uniform_sample(DesignSpace::unit(4), 1000, 6);
    const auto outs = s.member_outputs(xs);
    const auto var = s.predict_epistemic_variance(xs);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (Eigen::Index k = 0; k < 2; ++k) {
            const auto col = static_cast<Eigen::Index>(i);
            double mu = 0.0;
            for (const auto& o : outs) mu += o(k, col);
            mu /= static_cast<double>(outs.size());
            double v = 0.0;
            for (const auto& o : outs) v += (o(k, col) - mu) * (o(k, col) - mu);
            v /= static_cast<double>(outs.size());
            worst = std::max(worst, std::abs(var[i][static_cast<std::size_t>(k)] - v));
        }
    note("ensemble variance: max gap to two-pass oracle %.3g", worst);
    return worst <= 1e-10;
}

double mse(const Mlp& net, const Vector& x, const Vector& y) {
    const auto out = net.forward(x);
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += (out[i] - y[i]) * (out[i] - y[i]);
    return s / static_cast<double>(out.size());
}

bool gradient_oracle() {
    bool ok = true;
    std::set<Activation> roster;
    for (auto a : default_activation_roster(10)) roster.insert(a);
    for (auto act : roster) {
        Rng rng(31);
        Mlp net = Mlp::glorot(MlpSpec{3, 2, {6, 4}, act}, rng);
        std::normal_distribution<double> nd(0.0, 0.7);
        Vector theta = net.parameters();
        for (double& t : theta) t = nd(rng);
        net.set_parameters(theta);
        const Vector x{nd(rng), nd(rng), nd(rng)}, y{nd(rng), nd(rng)};
        Vector analytic;
        for (const auto& l : net.backward(x, y)) {
            analytic.insert(analytic.end(), l.weights.data(), l.weights.data() + l.weights.size());
            analytic.insert(analytic.end(), l.bias.data(), l.bias.data() + l.bias.size());
        }
        const double h = 1e-4;
        double worst = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            Vector tp = theta, tm = theta;
            tp[i] += h;
            tm[i] -= h;
            Mlp a = net, b = net;
            a.set_parameters(tp);
            b.set_parameters(tm);
            const double numeric = (mse(a, x, y) - mse(b, x, y)) / (2.0 * h);
            const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
            worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
        }
        note("gradient %s: max relative error %.3g", std::string(to_string(act)).c_str(), worst);
        ok = ok && worst <= 1e-4;
    }
    return ok;
}

bool criterion_oracles() {
    const bool a = sort_oracle();
    const bool b = hv_oracle();
    const bool c = variance_oracle();
    const bool d = gradient_oracle();
    return a && b && c && d;
}

// ---- determinism ----

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

RunConfig determinism_config(const std::string& tag) {
    auto cfg = base_config("zdt3", 6, RunMode::LbnMobo, 42, 2);
    cfg.batch_size = 200;
    cfg.output_dir = g_work / ("determinism-" + tag);
    fs::remove_all(cfg.output_dir);
    return cfg;
}

bool criterion_determinism() {
    set_max_threads(1);
    const auto a = run(determinism_config("serial-a"));
    const auto b = run(determinism_config("serial-b"));
    bool same_bytes = true;
    for (int k = 0; k <= 2; ++k) {
        const auto name = fs::path("iter_" + std::to_string(k)) / "metrics.json";
        const auto ta = slurp(g_work / "determinism-serial-a" / name), tb = slurp(g_work / "determinism-serial-b" / name);
        same_bytes = same_bytes && !ta.empty() && ta == tb;
    }
    note("single-threaded metrics.json identical across runs: %s", same_bytes ? "yes" : "no");

    set_max_threads(4);
    const auto c = run(determinism_config("parallel-a"));
    const auto d = run(determinism_config("parallel-b"));
    set_max_threads(0);
    const double hc = c.history.back().hv_estimate, hd = d.history.back().hv_estimate;
    const bool same_hv = std::memcmp(&hc, &hd, sizeof hc) == 0;
    note("4-worker final hypervolume %.17g vs %.17g", hc, hd);
    (void)a;
    (void)b;
    return same_bytes && same_hv;
}

// ---- configuration snapshot ----

bool criterion_defaults() {
    const auto cfg = AppConfig{}.resolved().to_run_config();
    const std::vector<Activation> expected{Activation::Tanh, Activation::Tanh, Activation::ReLU,
                                           Activation::ReLU, Activation::CELU, Activation::CELU,
                                           Activation::LeakyReLU, Activation::LeakyReLU, Activation::ELU,
                                           Activation::Hardswish};
    const auto specs = cfg.surrogate.specs(30, 2);
    bool ok = specs.size() == 10 && cfg.surrogate.roster() == expected;
    for (std::size_t i = 0; ok && i < specs.size(); ++i)
        ok = specs[i].activation == expected[i] && specs[i].hidden_widths == std::vector<std::size_t>{100, 50, 100};
    ok = ok && cfg.surrogate.train.epochs == 60 && cfg.surrogate.train.minibatch == 10;
    std::string roster;
    for (auto a : cfg.surrogate.roster()) roster += std::string(to_string(a)) + " ";
    note("members %zu, roster %s, epochs %d, minibatch %zu", specs.size(), roster.c_str(),
         static_cast<int>(cfg.surrogate.train.epochs), static_cast<std::size_t>(cfg.surrogate.train.minibatch));
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    g_work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "lbnmobo-acceptance";
    if (!std::getenv("LBNMOBO_ACCEPTANCE_REUSE")) fs::remove_all(g_work);
    fs::create_directories(g_work);
    std::set<int> only;
    for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

    const std::vector<std::pair<const char*, std::function<bool()>>> criteria{
        {"ZDT3 6-D convergence", criterion_zdt3_6d},
        {"ZDT3 30-D convergence", criterion_zdt3_30d},
        {"ZDT1/ZDT2 30-D convergence", criterion_zdt12_30d},
        {"uncertainty ablation direction", criterion_ablation},
        {"oracle equivalences", criterion_oracles},
        {"determinism", criterion_determinism},
        {"default surrogate configuration", criterion_defaults},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        std::printf("criterion %d: %s\n", id, criteria[i].first);
        std::fflush(stdout);
        bool ok = false;
        try {
            ok = criteria[i].second();
        } catch (const std::exception& e) {
            note("error: %s", e.what());
        }
        std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, criteria[i].first);
        std::fflush(stdout);
        failed += !ok;
    }
    return failed ? 1 : 0;
}
