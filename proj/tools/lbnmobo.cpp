#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "lbnmobo/config.hpp"
#include "lbnmobo/optimizer.hpp"
#include "lbnmobo/report.hpp"

namespace fs = std::filesystem;
using namespace lbnmobo;

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeFailure = 1;
constexpr int kUsage = 2;

struct RunOverrides {
    std::string config;
    std::optional<std::string> mode, problem, output, command, workdir;
    std::optional<std::size_t> dim, objectives, batch, init, mc_samples, members, num_seeds;
    std::optional<int> iters, epochs, generations;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::vector<double>> lower, upper, reference;
    std::optional<std::vector<std::string>> directions;
    bool no_wall_times = false;
};

fs::path default_output(const AppConfig& c) {
    const char* root = std::getenv("LBNMOBO_OUTPUT_ROOT");
    const fs::path base = root && *root ? fs::path(root) : fs::path("runs");
    return base / (c.problem.name + "-" + std::string(to_string(c.mode)) + "-seed" + std::to_string(c.seed));
}

AppConfig apply(const RunOverrides& o) {
    AppConfig c = o.config.empty() ? AppConfig{} : load_config(o.config);
    if (o.mode) c.mode = parse_run_mode(*o.mode);
    if (o.problem) c.problem.name = *o.problem;
    if (o.dim) c.problem.dim = *o.dim;
    if (o.objectives) c.problem.objectives = *o.objectives;
    if (o.command) c.problem.command = *o.command;
    if (o.workdir) c.problem.workdir = *o.workdir;
    if (o.lower) c.problem.lower = *o.lower;
    if (o.upper) c.problem.upper = *o.upper;
    if (o.directions) {
        c.problem.directions.clear();
        try {
            for (const auto& d : *o.directions) c.problem.directions.push_back(parse_direction(d));
        } catch (const ArgumentError& e) {
            throw ConfigError(e.what());
        }
    }
    if (o.batch) c.batch_size = *o.batch;
    if (o.iters) c.iterations = *o.iters;
    if (o.init) c.init_size = *o.init;
    if (o.seed) c.seed = *o.seed;
    if (o.threads) c.threads = *o.threads;
    if (o.mc_samples) c.mc_samples = *o.mc_samples;
    if (o.members) c.surrogate.members = *o.members;
    if (o.epochs) c.surrogate.train.epochs = *o.epochs;
    if (o.generations) c.acquisition.nsga.generations = *o.generations;
    if (o.num_seeds) c.acquisition.num_seeds = *o.num_seeds;
    if (o.reference) c.reference_point = *o.reference;
    if (o.no_wall_times) c.record_wall_times = false;
    if (o.output) c.output_dir = *o.output;
    if (c.output_dir.empty()) c.output_dir = default_output(c).string();
    return c.resolved();
}

void print_summary(const RunState& st) {
    std::printf("%5s %14s %11s %7s %8s %9s %9s %9s\n", "iter", "hypervolume", "std_err", "front", "dataset",
                "train_s", "acquire_s", "eval_s");
    for (const auto& m : st.history)
        std::printf("%5d %14.6g %11.3g %7zu %8zu %9.2f %9.2f %9.2f\n", m.iteration, m.hv_estimate, m.hv_std_error,
                    m.front_size, m.dataset_size, m.wall_times.train, m.wall_times.acquire, m.wall_times.evaluate);
}

int execute(const AppConfig& app, bool resume_run) {
    RunConfig rc = app.to_run_config();
    rc.validate();
    if (app.threads) set_max_threads(app.threads);
    fs::create_directories(rc.output_dir);
    if (!resume_run) {
        std::ofstream os(rc.output_dir / "config.json", std::ios::binary);
        os << to_json(app);
    }
    try {
        const RunState st = resume_run ? resume(rc) : run(rc);
        print_summary(st);
        std::printf("output: %s\n", rc.output_dir.string().c_str());
        return kOk;
    } catch (const RunError& e) {
        std::fprintf(stderr, "error: %s\nresume with: lbnmobo resume %s\n", e.what(), rc.output_dir.string().c_str());
        return kRuntimeFailure;
    } catch (const ConfigError&) {
        throw;
    } catch (const LoadError&) {
        throw;
    } catch (const std::exception& e) {
        const auto snaps = list_snapshots(rc.output_dir);
        std::fprintf(stderr, "error: %s\n", e.what());
        if (!snaps.empty())
            std::fprintf(stderr, "last snapshot iter_%d; resume with: lbnmobo resume %s\n", snaps.back(),
                         rc.output_dir.string().c_str());
        return kRuntimeFailure;
    }
}

template <class T>
void opt(CLI::App* app, const std::string& name, std::optional<T>& target, const std::string& help) {
    app->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Large-batch neural multi-objective Bayesian optimization"};
    app.require_subcommand(1);

    RunOverrides ro;
    auto* run_cmd = app.add_subcommand("run", "start a new optimization run");
    run_cmd->add_option("--config,-c", ro.config, "JSON config file")->check(CLI::ExistingFile);
    opt(run_cmd, "--mode", ro.mode, "lbn-mobo | nsga2-baseline | random-baseline | ablate-uncertainty");
    opt(run_cmd, "--problem", ro.problem, "zdt1 | zdt2 | zdt3 | dtlz1 | dtlz4 | external");
    opt(run_cmd, "--dim", ro.dim, "design-space dimension");
    opt(run_cmd, "--objectives", ro.objectives, "number of objectives");
    opt(run_cmd, "--command", ro.command, "external NFP command");
    opt(run_cmd, "--workdir", ro.workdir, "external NFP working directory");
    opt(run_cmd, "--lower", ro.lower, "external lower bounds");
    opt(run_cmd, "--upper", ro.upper, "external upper bounds");
    opt(run_cmd, "--directions", ro.directions, "per-objective min|max");
    opt(run_cmd, "--batch", ro.batch, "batch size S");
    opt(run_cmd, "--iters", ro.iters, "iterations Q");
    opt(run_cmd, "--init", ro.init, "initial sample size (default S)");
    opt(run_cmd, "--seed", ro.seed, "master seed");
    opt(run_cmd, "--output,-o", ro.output, "output directory");
    opt(run_cmd, "--threads", ro.threads, "worker cap (0: all cores)");
    opt(run_cmd, "--mc-samples", ro.mc_samples, "Monte-Carlo hypervolume samples");
    opt(run_cmd, "--members", ro.members, "ensemble size K");
    opt(run_cmd, "--epochs", ro.epochs, "training epochs");
    opt(run_cmd, "--generations", ro.generations, "NSGA-II generations per acquisition seed");
    opt(run_cmd, "--num-seeds", ro.num_seeds, "parallel acquisition seeds (0: auto)");
    opt(run_cmd, "--reference", ro.reference, "hypervolume reference point (all-minimize)");
    run_cmd->add_flag("--no-wall-times", ro.no_wall_times, "write zero wall times for byte-stable metrics");

    std::string resume_dir;
    std::optional<unsigned> resume_threads;
    auto* resume_cmd = app.add_subcommand("resume", "continue a run from its last snapshot");
    resume_cmd->add_option("dir", resume_dir, "run directory")->required();
    opt(resume_cmd, "--threads", resume_threads, "worker cap (0: all cores)");

    std::string report_dir, report_out;
    std::vector<std::string> compare;
    auto* report_cmd = app.add_subcommand("report", "export hypervolume history and the final front");
    report_cmd->add_option("dir", report_dir, "run directory");
    report_cmd->add_option("--out", report_out, "destination (default: the run directory)");
    report_cmd->add_option("--compare", compare, "two run directories to merge by iteration")->expected(2);

    auto* problems_cmd = app.add_subcommand("problems", "problem catalogue");
    auto* list_cmd = problems_cmd->add_subcommand("list", "list built-in problems");
    problems_cmd->require_subcommand(1);

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate-config", "check a config file and print it resolved");
    validate_cmd->add_option("config", validate_path, "JSON config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*run_cmd) return execute(apply(ro), false);
        if (*resume_cmd) {
            AppConfig c = load_config(fs::path(resume_dir) / "config.json");
            c.output_dir = resume_dir;
            if (resume_threads) c.threads = *resume_threads;
            return execute(c, true);
        }
        if (*report_cmd) {
            if (!compare.empty()) {
                const auto a = load_history(compare[0]);
                const auto b = load_history(compare[1]);
                const fs::path out = report_out.empty() ? fs::path("compare.csv") : fs::path(report_out) / "compare.csv";
                if (out.has_parent_path()) fs::create_directories(out.parent_path());
                std::ofstream os(out, std::ios::binary);
                write_compare_csv(os, a, b);
                std::printf("wrote %s\n", out.string().c_str());
                return kOk;
            }
            if (report_dir.empty()) {
                std::fprintf(stderr, "report needs a run directory or --compare a b\n");
                return kUsage;
            }
            const auto files = write_report(report_dir, report_out.empty() ? fs::path(report_dir) : fs::path(report_out));
            std::printf("wrote %s\nwrote %s\nwrote %s\n", files.hv_evolution.string().c_str(),
                        files.pareto_front.string().c_str(), files.svg.string().c_str());
            return kOk;
        }
        if (*list_cmd) {
            for (const auto& p : builtin_problems()) std::printf("%-10s %s\n", p.name.c_str(), p.description.c_str());
            return kOk;
        }
        if (*validate_cmd) {
            AppConfig c = load_config(validate_path);
            if (c.output_dir.empty()) c.output_dir = default_output(c).string();
            c.to_run_config().validate();
            std::cout << to_json(c);
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kUsage;
    } catch (const LoadError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const ArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntimeFailure;
    }
    return kUsage;
}
