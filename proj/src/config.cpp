#include "lbnmobo/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace lbnmobo {

using nlohmann::json;

std::size_t ProblemSpec::resolved_dim() const {
    if (dim) return dim;
    if (name.starts_with("zdt")) return 30;
    if (name.starts_with("dtlz")) return 6;
    return lower.size();
}

std::size_t ProblemSpec::resolved_objectives() const {
    if (objectives) return objectives;
    if (name.starts_with("zdt")) return 2;
    if (name.starts_with("dtlz")) return 3;
    return directions.size();
}

ProblemDefinition make_problem(const ProblemSpec& spec) {
    try {
        const auto n = spec.resolved_dim();
        const auto m = spec.resolved_objectives();
        if (spec.name == "zdt1" || spec.name == "zdt2" || spec.name == "zdt3") {
            if (m != 2) throw ConfigError("ZDT problems have exactly two objectives");
            return zdt_suite(spec.name.back() - '0', n);
        }
        if (spec.name == "dtlz1" || spec.name == "dtlz4") return dtlz_suite(spec.name.back() - '0', n, m);
        if (spec.name == "external") {
            if (spec.command.empty()) throw ConfigError("external problem needs a command");
            if (spec.lower.empty() || spec.lower.size() != spec.upper.size())
                throw ConfigError("external problem needs matching lower/upper bounds");
            if (m < 2) throw ConfigError("external problem needs at least two objectives");
            const std::filesystem::path wd = spec.workdir.empty() ? std::filesystem::current_path() : std::filesystem::path(spec.workdir);
            return external_nfp(spec.command, wd, DesignSpace(spec.lower, spec.upper), m, spec.directions);
        }
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown problem '" + spec.name + "'");
}

RunConfig AppConfig::to_run_config() const {
    RunConfig rc{.problem = make_problem(problem)};
    rc.mode = mode;
    rc.batch_size = batch_size;
    rc.iterations = iterations;
    rc.init_size = init_size;
    rc.surrogate = surrogate;
    rc.acquisition = acquisition;
    rc.reference_point = reference_point;
    rc.mc_samples = mc_samples;
    rc.master_seed = seed;
    rc.output_dir = output_dir;
    rc.record_wall_times = record_wall_times;
    return rc;
}

AppConfig AppConfig::resolved() const {
    AppConfig c = *this;
    c.problem.dim = problem.resolved_dim();
    c.problem.objectives = problem.resolved_objectives();
    c.surrogate.activations = surrogate.roster();
    return c;
}

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) throw ConfigError("unknown key '" + (where.empty() ? k : where + "." + k) + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + (where.empty() ? std::string(key) : where + "." + key) + "'");
    }
}

std::vector<Direction> read_directions(const json& j) {
    std::vector<Direction> out;
    if (!j.is_array()) throw ConfigError("problem.directions must be an array");
    for (const auto& d : j) {
        if (!d.is_string()) throw ConfigError("problem.directions entries must be strings");
        try {
            out.push_back(parse_direction(d.get<std::string>()));
        } catch (const ArgumentError& e) {
            throw ConfigError(e.what());
        }
    }
    return out;
}

}  // namespace

AppConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, "", {"problem", "mode", "batch_size", "iterations", "init_size", "surrogate", "acquisition",
                       "reference_point", "mc_samples", "seed", "output_dir", "threads", "record_wall_times"});
    AppConfig c;
    if (j.contains("problem")) {
        const auto& p = j["problem"];
        check_keys(p, "problem", {"name", "dim", "objectives", "command", "workdir", "lower", "upper", "directions"});
        read(p, "name", c.problem.name, "problem");
        read(p, "dim", c.problem.dim, "problem");
        read(p, "objectives", c.problem.objectives, "problem");
        read(p, "command", c.problem.command, "problem");
        read(p, "workdir", c.problem.workdir, "problem");
        read(p, "lower", c.problem.lower, "problem");
        read(p, "upper", c.problem.upper, "problem");
        if (p.contains("directions")) c.problem.directions = read_directions(p["directions"]);
    }
    if (j.contains("mode")) {
        std::string mode;
        read(j, "mode", mode, "");
        c.mode = parse_run_mode(mode);
    }
    read(j, "batch_size", c.batch_size, "");
    read(j, "iterations", c.iterations, "");
    read(j, "init_size", c.init_size, "");
    if (j.contains("surrogate")) {
        const auto& s = j["surrogate"];
        check_keys(s, "surrogate", {"members", "activations", "preset", "hidden_widths", "epochs", "minibatch",
                                    "learning_rate", "beta1", "beta2", "epsilon"});
        read(s, "members", c.surrogate.members, "surrogate");
        if (s.contains("activations")) {
            std::vector<std::string> names;
            read(s, "activations", names, "surrogate");
            c.surrogate.activations.clear();
            try {
                for (const auto& n : names) c.surrogate.activations.push_back(parse_activation(n));
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
        }
        if (s.contains("preset")) {
            std::string preset;
            read(s, "preset", preset, "surrogate");
            if (preset == "benchmark") c.surrogate.hidden_widths = kBenchmarkHiddenWidths;
            else if (preset == "airfoil-scale") c.surrogate.hidden_widths = kAirfoilScaleHiddenWidths;
            else throw ConfigError("unknown surrogate preset '" + preset + "'");
        }
        read(s, "hidden_widths", c.surrogate.hidden_widths, "surrogate");
        read(s, "epochs", c.surrogate.train.epochs, "surrogate");
        read(s, "minibatch", c.surrogate.train.minibatch, "surrogate");
        read(s, "learning_rate", c.surrogate.train.learning_rate, "surrogate");
        read(s, "beta1", c.surrogate.train.beta1, "surrogate");
        read(s, "beta2", c.surrogate.train.beta2, "surrogate");
        read(s, "epsilon", c.surrogate.train.epsilon, "surrogate");
    }
    if (j.contains("acquisition")) {
        const auto& a = j["acquisition"];
        check_keys(a, "acquisition", {"num_seeds", "per_seed_population", "generations", "sbx_eta", "sbx_prob",
                                      "mut_eta", "mut_prob", "use_uncertainty"});
        read(a, "num_seeds", c.acquisition.num_seeds, "acquisition");
        read(a, "per_seed_population", c.acquisition.per_seed_population, "acquisition");
        read(a, "generations", c.acquisition.nsga.generations, "acquisition");
        read(a, "sbx_eta", c.acquisition.nsga.sbx_eta, "acquisition");
        read(a, "sbx_prob", c.acquisition.nsga.sbx_prob, "acquisition");
        read(a, "mut_eta", c.acquisition.nsga.mut_eta, "acquisition");
        if (a.contains("mut_prob") && !a["mut_prob"].is_null()) {
            double p = 0.0;
            read(a, "mut_prob", p, "acquisition");
            c.acquisition.nsga.mut_prob = p;
        }
        read(a, "use_uncertainty", c.acquisition.use_uncertainty, "acquisition");
    }
    read(j, "reference_point", c.reference_point, "");
    read(j, "mc_samples", c.mc_samples, "");
    read(j, "seed", c.seed, "");
    read(j, "output_dir", c.output_dir, "");
    read(j, "threads", c.threads, "");
    read(j, "record_wall_times", c.record_wall_times, "");
    return c;
}

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string to_json(const AppConfig& cfg) {
    const AppConfig c = cfg.resolved();
    json p;
    p["name"] = c.problem.name;
    p["dim"] = c.problem.dim;
    p["objectives"] = c.problem.objectives;
    p["command"] = c.problem.command;
    p["workdir"] = c.problem.workdir;
    p["lower"] = c.problem.lower;
    p["upper"] = c.problem.upper;
    std::vector<std::string> dirs;
    for (auto d : c.problem.directions) dirs.emplace_back(to_string(d));
    p["directions"] = dirs;

    json s;
    s["members"] = c.surrogate.members;
    std::vector<std::string> acts;
    for (auto a : c.surrogate.activations) acts.emplace_back(to_string(a));
    s["activations"] = acts;
    s["hidden_widths"] = c.surrogate.hidden_widths;
    s["epochs"] = c.surrogate.train.epochs;
    s["minibatch"] = c.surrogate.train.minibatch;
    s["learning_rate"] = c.surrogate.train.learning_rate;
    s["beta1"] = c.surrogate.train.beta1;
    s["beta2"] = c.surrogate.train.beta2;
    s["epsilon"] = c.surrogate.train.epsilon;

    json a;
    a["num_seeds"] = c.acquisition.num_seeds;
    a["per_seed_population"] = c.acquisition.per_seed_population;
    a["generations"] = c.acquisition.nsga.generations;
    a["sbx_eta"] = c.acquisition.nsga.sbx_eta;
    a["sbx_prob"] = c.acquisition.nsga.sbx_prob;
    a["mut_eta"] = c.acquisition.nsga.mut_eta;
    a["mut_prob"] = c.acquisition.nsga.mut_prob ? json(*c.acquisition.nsga.mut_prob) : json(nullptr);
    a["use_uncertainty"] = c.acquisition.use_uncertainty;

    json j;
    j["problem"] = p;
    j["mode"] = std::string(to_string(c.mode));
    j["batch_size"] = c.batch_size;
    j["iterations"] = c.iterations;
    j["init_size"] = c.init_size;
    j["surrogate"] = s;
    j["acquisition"] = a;
    j["reference_point"] = c.reference_point;
    j["mc_samples"] = c.mc_samples;
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["threads"] = c.threads;
    j["record_wall_times"] = c.record_wall_times;
    return j.dump(2) + "\n";
}

}  // namespace lbnmobo
