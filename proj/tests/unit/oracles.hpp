#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "viewplan/coverage.hpp"
#include "viewplan/harness.hpp"
#include "viewplan/solvers.hpp"
#include "viewplan/world.hpp"

namespace oracles {

using namespace viewplan;

// Flat-ground scenario with explicit pieces; origin shifted so cell
// (0, 0) is centered at (0.5, 0.5).
inline Scenario flat_scenario(int width, int height, int horizon,
                              std::vector<Cell> robots,
                              std::vector<ActorTrack> actors,
                              double flight_altitude = 10.0,
                              double focal_px = 400.0) {
    Scenario s{HeightMap(width, height, 1.0,
                         std::vector<double>(width * height, 0.0)),
               MotionModel{1, flight_altitude, 1.0, Connectivity::Eight},
               horizon,
               std::move(robots),
               std::move(actors),
               CameraIntrinsics{focal_px, 640, 480},
               0.95,
               0};
    s.validate();
    return s;
}

inline ActorTrack static_actor(int id, double x, double y, int horizon,
                               double yaw = 0.0, double body_height = 1.8,
                               double w = 0.8, double d = 0.8) {
    return ActorTrack(id, w, d, body_height,
                      std::vector<Pose2>(horizon + 1, Pose2{x, y, yaw}));
}

// Exhaustive DFS over every feasible action sequence; the reference for
// both solvers. Returns the best discounted reward, or nullopt when no
// full-horizon trajectory exists.
inline std::optional<double> brute_force_best(
    int robot, const std::vector<Constraint>& omega,
    const CoverageLedger& frozen, const Scenario& scenario,
    const SolverParams& params) {
    ConstraintIndex idx(robot, omega);
    const GridVertex start = scenario.start_vertex(robot);
    if (!traversable(start.cell(), scenario.heightmap, scenario.motion) ||
        idx.blocks_vertex(start.cell(), 0))
        return std::nullopt;

    std::optional<double> best;
    struct Frame {
        GridVertex v;
        double reward;
    };
    std::vector<Frame> stack{{start, 0.0}};
    // Recursive enumeration, written iteratively to keep depth explicit.
    std::function<void(GridVertex, double)> walk = [&](GridVertex v,
                                                       double reward) {
        if (v.t == scenario.horizon) {
            if (!best || reward > *best) best = reward;
            return;
        }
        for (const GridVertex& s :
             neighbors(v, scenario.motion, scenario.heightmap,
                       scenario.horizon)) {
            if (idx.blocks_vertex(s.cell(), s.t)) continue;
            if (idx.blocks_edge(v.cell(), s.cell(), v.t)) continue;
            double r = step_reward(s, v.cell(), frozen, scenario, params);
            walk(s, reward + std::pow(params.gamma, s.t) * r);
        }
    };
    walk(start, 0.0);
    return best;
}

// Discounted value of a concrete trajectory, accumulated independently.
inline double evaluate_trajectory(const Trajectory& path,
                                  const CoverageLedger& frozen,
                                  const Scenario& scenario,
                                  const SolverParams& params) {
    double total = 0.0;
    for (int t = 1; t < static_cast<int>(path.size()); ++t) {
        GridVertex v{path[t].x, path[t].y, t};
        total += std::pow(params.gamma, t) *
                 step_reward(v, path[t - 1], frozen, scenario, params);
    }
    return total;
}

// Fine segment sampling; the reference for the DDA occlusion walk.
inline bool dense_sample_blocked(const Vec3& from, const Vec3& to,
                                 const HeightMap& h,
                                 int samples_per_cell = 100) {
    double cells = (std::abs(to.x - from.x) + std::abs(to.y - from.y)) /
                       h.cell_size() +
                   1.0;
    int n = static_cast<int>(cells * samples_per_cell);
    for (int k = 0; k <= n; ++k) {
        double s = static_cast<double>(k) / n;
        Vec3 p = from + (to - from) * s;
        Cell c = h.cell_at({p.x, p.y});
        if (p.z < h.elevation(c)) return true;
    }
    return false;
}

// All pairwise conflicts in a joint path, without the early-exit logic
// of the production scanner.
inline std::vector<Conflict> all_conflicts(
    const std::vector<Trajectory>& joint) {
    std::vector<Conflict> out;
    const int n = static_cast<int>(joint.size());
    const int len = n == 0 ? 0 : static_cast<int>(joint[0].size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int t = 0; t < len; ++t) {
                if (joint[i][t] == joint[j][t])
                    out.push_back({ConflictKind::Vertex, i, j, joint[i][t],
                                   joint[j][t], t});
                if (t + 1 < len && joint[i][t] == joint[j][t + 1] &&
                    joint[j][t] == joint[i][t + 1])
                    out.push_back({ConflictKind::EdgeSwap, i, j, joint[i][t],
                                   joint[j][t], t});
            }
        }
    }
    return out;
}

inline std::optional<Conflict> first_conflict_oracle(
    const std::vector<Trajectory>& joint) {
    std::vector<Conflict> all = all_conflicts(joint);
    if (all.empty()) return std::nullopt;
    auto rank = [](const Conflict& c) {
        return std::make_tuple(c.t, c.kind == ConflictKind::Vertex ? 0 : 1,
                               c.robot_i, c.robot_j);
    };
    return *std::min_element(all.begin(), all.end(),
                             [&](const Conflict& a, const Conflict& b) {
                                 return rank(a) < rank(b);
                             });
}

// Random feasible walk for one robot.
inline Trajectory random_walk(const Scenario& scenario, int robot,
                              std::mt19937_64& rng) {
    Trajectory path{scenario.robot_starts[robot]};
    GridVertex v = scenario.start_vertex(robot);
    for (int t = 0; t < scenario.horizon; ++t) {
        auto succ =
            neighbors(v, scenario.motion, scenario.heightmap, scenario.horizon);
        v = succ[rng() % succ.size()];
        path.push_back(v.cell());
    }
    return path;
}

inline Scenario random_clutter_scenario(std::mt19937_64& rng, int max_dim = 16,
                                        int max_horizon = 8, int robots = 2,
                                        int actors = 2) {
    ClutterParams p;
    p.map_width = 8 + static_cast<int>(rng() % (max_dim - 7));
    p.map_height = 8 + static_cast<int>(rng() % (max_dim - 7));
    p.obstacle_count = 2 + static_cast<int>(rng() % 6);
    p.horizon = 4 + static_cast<int>(rng() % (max_horizon - 3));
    p.robots = robots;
    p.actors = actors;
    p.seed = rng();
    return generate_clutter(p);
}

inline CoverageLedger random_ledger(std::mt19937_64& rng, int entries,
                                    int robots = 3, int actors = 2,
                                    int horizon = 8) {
    CoverageLedger ledger;
    int placed = 0;
    while (placed < entries) {
        LedgerKey key{static_cast<int>(rng() % robots),
                      static_cast<int>(rng() % actors),
                      static_cast<int>(rng() % 4),
                      1 + static_cast<int>(rng() % horizon)};
        double density =
            0.1 + static_cast<double>(rng() % 100000) / 100000.0 * 2000.0;
        try {
            ledger.insert(key, density);
            ++placed;
        } catch (const std::invalid_argument&) {
            // duplicate key, draw again
        }
    }
    return ledger;
}

}  // namespace oracles
