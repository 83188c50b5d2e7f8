#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "viewplan/coordination.hpp"
#include "viewplan/harness.hpp"
#include "viewplan/world.hpp"

namespace {

using namespace viewplan;

// Generator options shared across subcommands; -1 means "keep the
// generator default".
struct GeneratorArgs {
    std::string name;
    int map_width = -1;
    int map_height = -1;
    int corridor_width = -1;
    int corridor_length = -1;
    int neck_width = -1;
    int obstacles = -1;
    int horizon = -1;
    int robots = -1;
    int actors = -1;
};

void add_generator_options(CLI::App* cmd, GeneratorArgs& args) {
    cmd->add_option("--generator", args.name,
                    "corridor, bottleneck, or random-clutter");
    cmd->add_option("--map-width", args.map_width);
    cmd->add_option("--map-height", args.map_height);
    cmd->add_option("--corridor-width", args.corridor_width);
    cmd->add_option("--corridor-length", args.corridor_length);
    cmd->add_option("--neck-width", args.neck_width);
    cmd->add_option("--obstacles", args.obstacles);
    cmd->add_option("--horizon", args.horizon);
    cmd->add_option("--robots", args.robots);
    cmd->add_option("--actors", args.actors);
}

void apply(int value, int& field) {
    if (value >= 0) field = value;
}

CorridorParams corridor_params(const GeneratorArgs& a, std::uint64_t seed) {
    CorridorParams p;
    apply(a.map_width, p.map_width);
    apply(a.map_height, p.map_height);
    apply(a.corridor_width, p.corridor_width);
    apply(a.corridor_length, p.corridor_length);
    apply(a.horizon, p.horizon);
    apply(a.robots, p.robots);
    apply(a.actors, p.actors);
    p.seed = seed;
    return p;
}

BottleneckParams bottleneck_params(const GeneratorArgs& a, std::uint64_t seed) {
    BottleneckParams p;
    apply(a.map_width, p.map_width);
    apply(a.map_height, p.map_height);
    apply(a.neck_width, p.neck_width);
    apply(a.horizon, p.horizon);
    apply(a.robots, p.robots);
    apply(a.actors, p.actors);
    p.seed = seed;
    return p;
}

ClutterParams clutter_params(const GeneratorArgs& a, std::uint64_t seed) {
    ClutterParams p;
    apply(a.map_width, p.map_width);
    apply(a.map_height, p.map_height);
    apply(a.obstacles, p.obstacle_count);
    apply(a.horizon, p.horizon);
    apply(a.robots, p.robots);
    apply(a.actors, p.actors);
    p.seed = seed;
    return p;
}

Scenario make_scenario(const GeneratorArgs& args, std::uint64_t seed) {
    if (args.name == "corridor")
        return generate_corridor(corridor_params(args, seed));
    if (args.name == "bottleneck")
        return generate_bottleneck(bottleneck_params(args, seed));
    if (args.name == "random-clutter" || args.name == "clutter")
        return generate_clutter(clutter_params(args, seed));
    throw std::invalid_argument("unknown generator: " + args.name);
}

int run_generate(const GeneratorArgs& args, std::uint64_t seed,
                 const std::string& out) {
    Scenario s = make_scenario(args, seed);
    save_scenario(s, out);
    std::cout << "wrote " << out << " (" << s.num_robots() << " robots, "
              << s.num_actors() << " actors, T=" << s.horizon << ")\n";
    return 0;
}

int run_plan(const std::string& scenario_path, const std::string& planner,
             const std::string& solver, double gamma, double lambda_motion,
             const std::string& out) {
    Scenario scenario = load_scenario(scenario_path);
    PlannerOptions options;
    options.params.gamma = gamma;
    options.params.lambda_motion = lambda_motion;
    PlanResult result = plan(planner_from_name(planner), scenario,
                             solver_from_name(solver), options);
    if (!out.empty()) save_plan_result(result, out);
    std::printf("%s + %s: status=%s g=%.6f nodes=%llu/%llu conflicts=%llu "
                "wall_ms=%.3f\n",
                result.planner.c_str(), result.solver.c_str(),
                result.status.c_str(), result.total_reward,
                static_cast<unsigned long long>(result.nodes_expanded),
                static_cast<unsigned long long>(result.nodes_generated),
                static_cast<unsigned long long>(result.conflicts_resolved),
                result.wall_ms);
    return result.ok() ? 0 : 2;
}

int run_validate(const std::string& scenario_path,
                 const std::string& plan_path) {
    Scenario scenario = load_scenario(scenario_path);
    PlanResult result = load_plan_result(plan_path);
    ValidationReport report = validate(result, scenario);
    for (const CheckResult& c : report.checks)
        std::printf("[%s] %s%s%s\n", c.passed ? "PASS" : "FAIL",
                    c.name.c_str(), c.detail.empty() ? "" : ": ",
                    c.detail.c_str());
    return report.all_passed() ? 0 : 2;
}

int run_bench(ExperimentConfig cfg, const GeneratorArgs& gen,
              const std::vector<std::string>& planners) {
    cfg.generator = gen.name;
    cfg.corridor = corridor_params(gen, cfg.seed);
    cfg.bottleneck = bottleneck_params(gen, cfg.seed);
    cfg.clutter = clutter_params(gen, cfg.seed);
    if (!planners.empty()) {
        cfg.planners.clear();
        for (const std::string& p : planners)
            cfg.planners.push_back(planner_from_name(p));
    }
    std::vector<MetricsRecord> records = run_experiment(cfg);
    for (const MetricsRecord& r : records)
        std::printf("rep %d %s + %s: %s g=%.6f\n", r.repetition,
                    r.planner.c_str(), r.solver.c_str(), r.status.c_str(),
                    r.total_reward);
    std::cout << "metrics: " << cfg.out_dir << "/metrics.csv\n";
    return all_cells_ok(records) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-robot coordinated view planning toolkit"};
    app.require_subcommand(1);

    auto* generate = app.add_subcommand("generate", "write a scenario file");
    GeneratorArgs gen_args;
    gen_args.name = "corridor";
    std::uint64_t seed = 0;
    std::string out = "scenario.json";
    add_generator_options(generate, gen_args);
    generate->add_option("--seed", seed);
    generate->add_option("--out", out);

    auto* plan_cmd = app.add_subcommand("plan", "run one planner on a scenario");
    std::string scenario_path, planner = "cocap", solver = "view-search";
    std::string plan_out;
    double gamma = 0.95, lambda_motion = 0.0;
    plan_cmd->add_option("--scenario", scenario_path)->required();
    plan_cmd->add_option("--planner", planner,
                         "unconstrained, sequential, or cocap");
    plan_cmd->add_option("--solver", solver, "value-iteration or view-search");
    plan_cmd->add_option("--gamma", gamma);
    plan_cmd->add_option("--lambda-motion", lambda_motion);
    plan_cmd->add_option("--out", plan_out);

    auto* bench = app.add_subcommand("bench", "run the planner matrix");
    ExperimentConfig cfg;
    GeneratorArgs bench_gen;
    std::vector<std::string> bench_planners;
    bench->add_option("--scenario", cfg.scenario_path);
    add_generator_options(bench, bench_gen);
    bench->add_option("--planner", bench_planners,
                      "repeatable; default all three");
    bench->add_option("--solver", solver);
    bench->add_option("--gamma", cfg.gamma);
    bench->add_option("--lambda-motion", cfg.lambda_motion);
    bench->add_option("--seed", cfg.seed);
    bench->add_option("--reps", cfg.repetitions);
    bench->add_option("--out", cfg.out_dir)->required();
    bench->add_flag("--no-timing",
                    "zero the CSV timing column for byte-reproducible reruns");
    bench->add_flag("--timing-strict", cfg.timing_strict,
                    "run cells one at a time for isolated timing");

    auto* validate_cmd =
        app.add_subcommand("validate", "re-check a plan against a scenario");
    std::string plan_path;
    validate_cmd->add_option("--scenario", scenario_path)->required();
    validate_cmd->add_option("--plan", plan_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return run_generate(gen_args, seed, out);
        if (plan_cmd->parsed())
            return run_plan(scenario_path, planner, solver, gamma,
                            lambda_motion, plan_out);
        if (bench->parsed()) {
            cfg.solver = solver_from_name(solver);
            cfg.emit_timing = bench->count("--no-timing") == 0;
            return run_bench(cfg, bench_gen, bench_planners);
        }
        if (validate_cmd->parsed()) return run_validate(scenario_path, plan_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
