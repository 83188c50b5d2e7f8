#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "viewplan/coordination.hpp"
#include "viewplan/world.hpp"

namespace viewplan {

struct CorridorParams {
    int map_width = 72;
    int map_height = 44;
    int corridor_width = 1;   // open rows inside the passage
    int corridor_length = 20; // walled stretch in cells
    int wall_thickness = 2;
    int horizon = 8;
    int robots = 2;
    int actors = 2;
    std::uint64_t seed = 0;
};

struct BottleneckParams {
    int map_width = 48;
    int map_height = 32;
    int neck_width = 1;
    int feeder_separation = 3;  // rows between a feeder and the neck row
    int horizon = 11;
    int robots = 4;
    int actors = 4;
    std::uint64_t seed = 0;
};

struct ClutterParams {
    int map_width = 24;
    int map_height = 18;
    int obstacle_count = 10;
    int horizon = 8;
    int robots = 2;
    int actors = 2;
    std::uint64_t seed = 0;
};

// Two parallel walls with actors walking the passage in one direction
// and robots seeded just outside the entrance.
Scenario generate_corridor(const CorridorParams& params);

// Two feeder passages merging into a single neck; actor tracks intersect
// in the merge region.
Scenario generate_bottleneck(const BottleneckParams& params);

// Scattered rectangular blocks with random actor walks; used for
// randomized testing.
Scenario generate_clutter(const ClutterParams& params);

struct ExperimentConfig {
    std::string scenario_path;  // either a file ...
    std::string generator;      // ... or "corridor" / "bottleneck" / "random-clutter"
    CorridorParams corridor;
    BottleneckParams bottleneck;
    ClutterParams clutter;
    std::vector<PlannerKind> planners = {PlannerKind::Unconstrained,
                                         PlannerKind::Sequential,
                                         PlannerKind::CoCap};
    SolverKind solver = SolverKind::ViewSearch;
    std::string out_dir;
    int repetitions = 1;
    std::uint64_t seed = 0;
    double gamma = 0.95;
    double lambda_motion = 0.0;
    bool emit_timing = true;    // when false the CSV timing column is zeroed
    bool timing_strict = false; // run cells one at a time
};

struct MetricsRecord {
    std::string planner;
    std::string solver;
    std::string status;
    double total_reward = 0.0;
    double compute_ms = 0.0;
    std::uint64_t nodes_generated = 0;
    std::uint64_t nodes_expanded = 0;
    std::uint64_t conflicts_resolved = 0;
    std::vector<double> scaled_trace;  // length T
    int repetition = 0;
};

// Runs the planner matrix, writes per-run PlanResult JSON files, a
// consolidated metrics CSV and per-repetition trace CSVs into out_dir.
// Returns one record per (repetition, planner) cell.
std::vector<MetricsRecord> run_experiment(const ExperimentConfig& config);

// True when every cell of the last run_experiment call succeeded.
bool all_cells_ok(const std::vector<MetricsRecord>& records);

}  // namespace viewplan
