#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "viewplan/solvers.hpp"
#include "viewplan/world.hpp"

namespace viewplan {

enum class ConflictKind { Vertex, EdgeSwap };

struct Conflict {
    ConflictKind kind = ConflictKind::Vertex;
    int robot_i = 0;
    int robot_j = 0;
    Cell v_i;
    Cell v_j;
    int t = 0;

    bool operator==(const Conflict& o) const {
        return kind == o.kind && robot_i == o.robot_i && robot_j == o.robot_j &&
               v_i == o.v_i && v_j == o.v_j && t == o.t;
    }
};

// Earliest conflict: scans t ascending, pairs (i, j) lexicographically,
// vertex conflicts before swaps at equal t. Throws on ragged input.
std::optional<Conflict> detect_first_conflict(
    const std::vector<Trajectory>& joint_path);

// One constraint per involved robot resolving the conflict.
std::pair<Constraint, Constraint> split(const Conflict& conflict);

enum class PlannerKind { Unconstrained, Sequential, CoCap };

std::string planner_name(PlannerKind kind);
PlannerKind planner_from_name(const std::string& name);

struct PlanResult {
    std::string planner;
    std::string solver;
    std::string status = "ok";  // "ok" or "failed: <reason>"
    double gamma = 0.95;
    double lambda_motion = 0.0;
    std::vector<Trajectory> paths;
    std::vector<double> marginals;  // unscaled joint marginals, t = 1..T
    double total_reward = 0.0;      // g
    std::uint64_t nodes_generated = 0;
    std::uint64_t nodes_expanded = 0;
    std::uint64_t conflicts_resolved = 0;
    double wall_ms = 0.0;
    std::vector<Constraint> constraints;

    bool ok() const { return status == "ok"; }
};

struct PlannerOptions {
    SolverParams params;
    std::uint64_t max_nodes = 100000;  // constraint-tree safety valve
};

// Robots planned greedily in index order with the pixel context of
// lower-index robots; inter-robot collisions permitted.
PlanResult plan_unconstrained(const Scenario& scenario, SolverKind solver,
                              const PlannerOptions& options = {});

// Prioritized planning: robot i additionally avoids every committed
// trajectory of robots < i.
PlanResult plan_sequential(const Scenario& scenario, SolverKind solver,
                           const PlannerOptions& options = {});

// Conflict-tree coordinated planner: greedy root, then max-g expansion
// splitting the first conflict until a conflict-free node pops.
PlanResult plan_cocap(const Scenario& scenario, SolverKind solver,
                      const PlannerOptions& options = {});

PlanResult plan(PlannerKind planner, const Scenario& scenario,
                SolverKind solver, const PlannerOptions& options = {});

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

// Re-checks a plan against its scenario: shape, traversability, motion
// continuity, constraint compliance, conflict-freeness (constrained
// planners), and g recomputation.
ValidationReport validate(const PlanResult& result, const Scenario& scenario);

std::string plan_result_to_json_text(const PlanResult& result);
PlanResult plan_result_from_json_text(const std::string& text);
PlanResult load_plan_result(const std::string& path);
void save_plan_result(const PlanResult& result, const std::string& path);

}  // namespace viewplan
