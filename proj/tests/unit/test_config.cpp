#include <doctest.h>

#include "lbnmobo/config.hpp"

using namespace lbnmobo;

TEST_CASE("defaults mirror the reference benchmark setup") {
    const AppConfig c = parse_config("{}");
    CHECK(c.mode == RunMode::LbnMobo);
    CHECK(c.batch_size == 1000);
    CHECK(c.iterations == 10);
    CHECK(c.surrogate.members == 10);
    CHECK(c.surrogate.hidden_widths == std::vector<std::size_t>{100, 50, 100});
    CHECK(c.surrogate.train.epochs == 60);
    CHECK(c.surrogate.train.minibatch == 10);
    CHECK(c.acquisition.per_seed_population == 100);
    CHECK(c.mc_samples == 1000000);
    const auto r = c.resolved();
    CHECK(r.problem.dim == 30);
    CHECK(r.problem.objectives == 2);
    CHECK(r.surrogate.activations.size() == 10);
}

TEST_CASE("resolved config round trips") {
    const std::string text = R"({
        "problem": {"name": "dtlz4", "dim": 8, "objectives": 3},
        "mode": "ablate-uncertainty",
        "batch_size": 64,
        "iterations": 3,
        "surrogate": {"members": 4, "preset": "airfoil-scale", "epochs": 7, "minibatch": 16},
        "acquisition": {"num_seeds": 2, "generations": 11, "mut_prob": 0.25},
        "reference_point": [2, 2, 2],
        "seed": 99,
        "output_dir": "out/x",
        "record_wall_times": false
    })";
    const AppConfig c = parse_config(text);
    CHECK(c.surrogate.hidden_widths == std::vector<std::size_t>{150, 200, 200, 150});
    CHECK(c.acquisition.nsga.mut_prob == 0.25);
    const std::string resolved = to_json(c);
    const AppConfig back = parse_config(resolved);
    CHECK(back == c.resolved());
    CHECK(to_json(back) == resolved);
    CHECK(to_json(parse_config(to_json(AppConfig{}))) == to_json(AppConfig{}));
}

TEST_CASE("strict parsing") {
    CHECK_THROWS_AS(parse_config(R"({"batchsize": 10})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"surrogate": {"epoch": 10}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"problem": {"nme": "zdt1"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"batch_size": "ten"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"mode": "bayes"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"surrogate": {"activations": ["swish"]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"surrogate": {"preset": "huge"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"problem": {"directions": ["up"]}})"), ConfigError);
}

TEST_CASE("problem construction") {
    ProblemSpec spec;
    spec.name = "zdt2";
    spec.dim = 12;
    const auto p = make_problem(spec);
    CHECK(p.name == "zdt2");
    CHECK(p.space.dim() == 12);
    spec.name = "dtlz1";
    spec.dim = 0;
    CHECK(make_problem(spec).num_objectives == 3);
    CHECK(make_problem(spec).space.dim() == 6);
    spec.name = "zdt4";
    CHECK_THROWS_AS(make_problem(spec), ConfigError);
    spec.name = "external";
    CHECK_THROWS_AS(make_problem(spec), ConfigError);
    spec.command = "true";
    spec.lower = {0, 0};
    spec.upper = {1, 1};
    spec.objectives = 2;
    CHECK(make_problem(spec).space.dim() == 2);
    spec.name = "zdt1";
    spec.objectives = 3;
    CHECK_THROWS_AS(make_problem(spec), ConfigError);
}

TEST_CASE("run configuration validation") {
    AppConfig c;
    c.output_dir = "x";
    c.problem.name = "zdt3";
    c.problem.dim = 6;
    CHECK_NOTHROW(c.to_run_config().validate());
    c.init_size = 3;
    CHECK_THROWS_AS(c.to_run_config().validate(), ConfigError);
    c.init_size = 0;
    c.acquisition.per_seed_population = 2;
    CHECK_THROWS_AS(c.to_run_config().validate(), ConfigError);
    c.acquisition.per_seed_population = 100;
    c.output_dir.clear();
    CHECK_THROWS_AS(c.to_run_config().validate(), ConfigError);
    CHECK(parse_run_mode("nsga2-baseline") == RunMode::Nsga2Baseline);
    CHECK(to_string(RunMode::RandomBaseline) == "random-baseline");
}
