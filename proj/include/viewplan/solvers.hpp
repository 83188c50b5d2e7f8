#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "viewplan/coverage.hpp"
#include "viewplan/world.hpp"

namespace viewplan {

// A vertex constraint forbids occupying `from` at time t; an edge
// constraint (with `to` set) forbids traversing from@t -> to@t+1.
struct Constraint {
    int robot = 0;
    Cell from;
    std::optional<Cell> to;
    int t = 0;

    bool is_vertex() const { return !to.has_value(); }
    bool operator==(const Constraint& o) const {
        return robot == o.robot && from == o.from && to == o.to && t == o.t;
    }
};

// Fast lookup over one robot's constraint subset.
class ConstraintIndex {
public:
    ConstraintIndex(int robot, const std::vector<Constraint>& all);

    bool blocks_vertex(const Cell& c, int t) const {
        return vertex_.count({t, c.y, c.x}) > 0;
    }
    bool blocks_edge(const Cell& from, const Cell& to, int t) const {
        return edge_.count({t, from.y, from.x, to.y, to.x}) > 0;
    }

private:
    std::set<std::tuple<int, int, int>> vertex_;
    std::set<std::tuple<int, int, int, int, int>> edge_;
};

struct SolverParams {
    double gamma = 0.95;
    double lambda_motion = 0.0;
};

enum class SolverKind { ValueIteration, ViewSearch };

std::string solver_name(SolverKind kind);
SolverKind solver_from_name(const std::string& name);

// Reward for arriving at x via the step prev -> x, against a frozen
// ledger: max(0, covm - lambda_motion * step length).
double step_reward(const GridVertex& x, const Cell& prev,
                   const CoverageLedger& frozen, const Scenario& scenario,
                   const SolverParams& params);

struct SolveResult {
    Trajectory path;                 // length T+1, starts at the robot start
    double discounted_reward = 0.0;  // sum over t=1..T of gamma^t * reward
    std::size_t states_expanded = 0;
};

// Exact backward dynamic program over (x, y, t); returns the greedy
// rollout, or nullopt when no constraint-satisfying trajectory exists.
std::optional<SolveResult> value_iteration(int robot,
                                           const std::vector<Constraint>& omega,
                                           const CoverageLedger& frozen,
                                           const Scenario& scenario,
                                           const SolverParams& params);

// Best-first search over the time-layered graph ordered by (layer,
// cumulative discounted reward). Evaluates rewards only at reachable
// states; agrees with value_iteration on the discounted objective.
std::optional<SolveResult> view_search(int robot,
                                       const std::vector<Constraint>& omega,
                                       const CoverageLedger& frozen,
                                       const Scenario& scenario,
                                       const SolverParams& params);

std::optional<SolveResult> solve(SolverKind kind, int robot,
                                 const std::vector<Constraint>& omega,
                                 const CoverageLedger& frozen,
                                 const Scenario& scenario,
                                 const SolverParams& params);

}  // namespace viewplan
