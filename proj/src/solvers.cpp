#include "viewplan/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace viewplan {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

ConstraintIndex::ConstraintIndex(int robot, const std::vector<Constraint>& all) {
    for (const Constraint& c : all) {
        if (c.robot != robot) continue;
        if (c.is_vertex())
            vertex_.insert({c.t, c.from.y, c.from.x});
        else
            edge_.insert({c.t, c.from.y, c.from.x, c.to->y, c.to->x});
    }
}

std::string solver_name(SolverKind kind) {
    return kind == SolverKind::ValueIteration ? "value-iteration" : "view-search";
}

SolverKind solver_from_name(const std::string& name) {
    if (name == "value-iteration") return SolverKind::ValueIteration;
    if (name == "view-search") return SolverKind::ViewSearch;
    throw std::invalid_argument("unknown solver: " + name);
}

double step_reward(const GridVertex& x, const Cell& prev,
                   const CoverageLedger& frozen, const Scenario& scenario,
                   const SolverParams& params) {
    double r = covm(x, frozen, scenario);
    if (params.lambda_motion > 0.0)
        r -= params.lambda_motion * step_length(prev, x.cell());
    return std::max(0.0, r);
}

std::optional<SolveResult> value_iteration(int robot,
                                           const std::vector<Constraint>& omega,
                                           const CoverageLedger& frozen,
                                           const Scenario& scenario,
                                           const SolverParams& params) {
    const HeightMap& h = scenario.heightmap;
    const MotionModel& m = scenario.motion;
    const int T = scenario.horizon;
    const int W = h.width(), H = h.height();
    const GridVertex start = scenario.start_vertex(robot);
    ConstraintIndex omega_i(robot, omega);

    auto idx = [W](int x, int y) { return static_cast<size_t>(y) * W + x; };
    auto valid = [&](int x, int y, int t) {
        return traversable(Cell{x, y}, h, m) &&
               !omega_i.blocks_vertex({x, y}, t);
    };
    if (!valid(start.x, start.y, 0)) return std::nullopt;

    // covm is independent of the incoming edge; cache it per (cell, t).
    std::vector<std::vector<double>> gain(T + 1,
                                          std::vector<double>(W * H, 0.0));
    for (int t = 1; t <= T; ++t)
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                if (valid(x, y, t))
                    gain[t][idx(x, y)] = covm({x, y, t}, frozen, scenario);

    std::vector<std::vector<double>> value(
        T + 1, std::vector<double>(W * H, kNegInf));
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
            if (valid(x, y, T)) value[T][idx(x, y)] = 0.0;

    size_t expanded = 0;
    auto action_value = [&](int x, int y, int t, const GridVertex& s) {
        // Value of stepping (x,y,t) -> s at t+1, -inf when infeasible.
        if (value[t + 1][idx(s.x, s.y)] == kNegInf) return kNegInf;
        if (omega_i.blocks_edge({x, y}, s.cell(), t)) return kNegInf;
        double r = gain[t + 1][idx(s.x, s.y)];
        if (params.lambda_motion > 0.0)
            r = std::max(0.0, r - params.lambda_motion *
                                    step_length({x, y}, s.cell()));
        return std::pow(params.gamma, t + 1) * r + value[t + 1][idx(s.x, s.y)];
    };

    for (int t = T - 1; t >= 0; --t) {
        for (int y = 0; y < H; ++y) {
            for (int x = 0; x < W; ++x) {
                if (!valid(x, y, t)) continue;
                double best = kNegInf;
                for (const GridVertex& s : neighbors({x, y, t}, m, h, T)) {
                    if (omega_i.blocks_vertex(s.cell(), s.t)) continue;
                    best = std::max(best, action_value(x, y, t, s));
                }
                value[t][idx(x, y)] = best;
                ++expanded;
            }
        }
    }
    if (value[0][idx(start.x, start.y)] == kNegInf) return std::nullopt;

    // Greedy rollout; neighbors come in (y, x) order, strict improvement
    // keeps the first maximizer.
    SolveResult result;
    result.states_expanded = expanded;
    result.discounted_reward = value[0][idx(start.x, start.y)];
    result.path.push_back(start.cell());
    GridVertex cur = start;
    for (int t = 0; t < T; ++t) {
        double best = kNegInf;
        std::optional<GridVertex> next;
        for (const GridVertex& s : neighbors(cur, m, h, T)) {
            if (omega_i.blocks_vertex(s.cell(), s.t)) continue;
            double v = action_value(cur.x, cur.y, t, s);
            if (v > best) {
                best = v;
                next = s;
            }
        }
        if (!next) return std::nullopt;  // unreachable: value[0] was finite
        cur = *next;
        result.path.push_back(cur.cell());
    }
    return result;
}

namespace {

struct QueueEntry {
    int t;
    double reward;
    int y, x;
};

// Pops the shallowest layer first so every predecessor is final before a
// state expands (the layers topologically order the time-expanded graph);
// within a layer the highest cumulative reward comes first.
struct EntryOrder {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.reward != b.reward) return a.reward < b.reward;
        if (a.y != b.y) return a.y > b.y;
        return a.x > b.x;
    }
};

}  // namespace

std::optional<SolveResult> view_search(int robot,
                                       const std::vector<Constraint>& omega,
                                       const CoverageLedger& frozen,
                                       const Scenario& scenario,
                                       const SolverParams& params) {
    const HeightMap& h = scenario.heightmap;
    const MotionModel& m = scenario.motion;
    const int T = scenario.horizon;
    const int W = h.width(), H = h.height();
    const GridVertex start = scenario.start_vertex(robot);
    ConstraintIndex omega_i(robot, omega);

    if (!traversable(start.cell(), h, m) ||
        omega_i.blocks_vertex(start.cell(), 0))
        return std::nullopt;

    auto key = [W, H](int x, int y, int t) {
        return (static_cast<size_t>(t) * H + y) * W + x;
    };
    std::unordered_map<size_t, double> best;
    std::unordered_map<size_t, Cell> parent;
    std::unordered_map<size_t, double> gain_cache;
    std::vector<bool> processed(static_cast<size_t>(W) * H * (T + 1), false);

    auto cached_gain = [&](const GridVertex& s) {
        auto it = gain_cache.find(key(s.x, s.y, s.t));
        if (it != gain_cache.end()) return it->second;
        double g = covm(s, frozen, scenario);
        gain_cache[key(s.x, s.y, s.t)] = g;
        return g;
    };

    std::priority_queue<QueueEntry, std::vector<QueueEntry>, EntryOrder> queue;
    best[key(start.x, start.y, 0)] = 0.0;
    queue.push({0, 0.0, start.y, start.x});
    size_t expanded = 0;

    while (!queue.empty() && queue.top().t != T) {
        QueueEntry top = queue.top();
        queue.pop();
        size_t k = key(top.x, top.y, top.t);
        if (processed[k] || top.reward < best[k]) continue;  // stale entry
        processed[k] = true;
        ++expanded;

        for (const GridVertex& s : neighbors({top.x, top.y, top.t}, m, h, T)) {
            if (omega_i.blocks_vertex(s.cell(), s.t)) continue;
            if (omega_i.blocks_edge({top.x, top.y}, s.cell(), top.t)) continue;
            size_t sk = key(s.x, s.y, s.t);
            if (processed[sk]) continue;
            double r = cached_gain(s);
            if (params.lambda_motion > 0.0)
                r = std::max(0.0, r - params.lambda_motion *
                                        step_length({top.x, top.y}, s.cell()));
            double cum = top.reward + std::pow(params.gamma, s.t) * r;
            auto it = best.find(sk);
            if (it != best.end() && cum <= it->second) continue;
            best[sk] = cum;
            parent[sk] = {top.x, top.y};
            queue.push({s.t, cum, s.y, s.x});
        }
    }
    if (queue.empty()) return std::nullopt;

    // Queue head is the best horizon state; recover the path by walking
    // parents back to the start.
    QueueEntry goal = queue.top();
    SolveResult result;
    result.discounted_reward = goal.reward;
    result.states_expanded = expanded;
    Trajectory reversed;
    Cell c{goal.x, goal.y};
    for (int t = T; t > 0; --t) {
        reversed.push_back(c);
        c = parent.at(key(c.x, c.y, t));
    }
    reversed.push_back(c);
    result.path.assign(reversed.rbegin(), reversed.rend());
    return result;
}

std::optional<SolveResult> solve(SolverKind kind, int robot,
                                 const std::vector<Constraint>& omega,
                                 const CoverageLedger& frozen,
                                 const Scenario& scenario,
                                 const SolverParams& params) {
    return kind == SolverKind::ValueIteration
               ? value_iteration(robot, omega, frozen, scenario, params)
               : view_search(robot, omega, frozen, scenario, params);
}

}  // namespace viewplan
