#include "viewplan/coordination.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <future>
#include <queue>
#include <stdexcept>

#include <json.hpp>

#include "viewplan/coverage.hpp"

namespace viewplan {

using nlohmann::json;

std::optional<Conflict> detect_first_conflict(
    const std::vector<Trajectory>& joint_path) {
    if (joint_path.empty()) return std::nullopt;
    const size_t len = joint_path[0].size();
    for (const Trajectory& p : joint_path)
        if (p.size() != len)
            throw std::invalid_argument("joint path trajectories are ragged");

    const int n = static_cast<int>(joint_path.size());
    for (int t = 0; t < static_cast<int>(len); ++t) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (joint_path[i][t] == joint_path[j][t])
                    return Conflict{ConflictKind::Vertex, i, j, joint_path[i][t],
                                    joint_path[j][t], t};
            }
        }
        if (t + 1 >= static_cast<int>(len)) continue;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (joint_path[i][t] == joint_path[j][t + 1] &&
                    joint_path[j][t] == joint_path[i][t + 1])
                    return Conflict{ConflictKind::EdgeSwap, i, j,
                                    joint_path[i][t], joint_path[j][t], t};
            }
        }
    }
    return std::nullopt;
}

std::pair<Constraint, Constraint> split(const Conflict& c) {
    if (c.kind == ConflictKind::Vertex)
        return {Constraint{c.robot_i, c.v_i, std::nullopt, c.t},
                Constraint{c.robot_j, c.v_j, std::nullopt, c.t}};
    // Swap: forbid each robot's traversal into the other's cell.
    return {Constraint{c.robot_i, c.v_i, c.v_j, c.t},
            Constraint{c.robot_j, c.v_j, c.v_i, c.t}};
}

std::string planner_name(PlannerKind kind) {
    switch (kind) {
        case PlannerKind::Unconstrained: return "unconstrained";
        case PlannerKind::Sequential: return "sequential";
        case PlannerKind::CoCap: return "cocap";
    }
    return "unknown";
}

PlannerKind planner_from_name(const std::string& name) {
    if (name == "unconstrained") return PlannerKind::Unconstrained;
    if (name == "sequential") return PlannerKind::Sequential;
    if (name == "cocap") return PlannerKind::CoCap;
    throw std::invalid_argument("unknown planner: " + name);
}

namespace {

double ledger_g(const CoverageLedger& ledger, const Scenario& scenario) {
    double g = 0.0;
    for (const ActorTrack& a : scenario.actors)
        for (int f = 0; f < 4; ++f) g += std::sqrt(ledger.covp(a.id(), f));
    return g;
}

bool path_satisfies(const Trajectory& path, int robot,
                    const std::vector<Constraint>& constraints) {
    ConstraintIndex idx(robot, constraints);
    for (int t = 0; t < static_cast<int>(path.size()); ++t) {
        if (idx.blocks_vertex(path[t], t)) return false;
        if (t + 1 < static_cast<int>(path.size()) &&
            idx.blocks_edge(path[t], path[t + 1], t))
            return false;
    }
    return true;
}

struct TreeNode {
    std::vector<Trajectory> paths;
    std::vector<Constraint> constraints;
    CoverageLedger ledger;
    double g = 0.0;
    std::uint64_t id = 0;
};

struct NodeOrder {
    // Max g; ties prefer fewer constraints, then insertion order.
    bool operator()(const TreeNode* a, const TreeNode* b) const {
        if (a->g != b->g) return a->g < b->g;
        if (a->constraints.size() != b->constraints.size())
            return a->constraints.size() > b->constraints.size();
        return a->id > b->id;
    }
};

// Greedy initialization shared by all planners: robots in index order,
// each planned against the pixel context of lower-index robots, then
// committed. `constraint_source` supplies per-robot constraints (empty
// for greedy/root planning).
struct GreedyOutcome {
    std::vector<Trajectory> paths;
    CoverageLedger ledger;
    int failed_robot = -1;
};

GreedyOutcome plan_greedy_sequence(
    const Scenario& scenario, SolverKind solver, const SolverParams& params,
    const std::vector<Constraint>& constraints) {
    GreedyOutcome out;
    for (int i = 0; i < scenario.num_robots(); ++i) {
        auto result = solve(solver, i, constraints, out.ledger, scenario, params);
        if (!result) {
            out.failed_robot = i;
            return out;
        }
        commit_path(out.ledger, i, result->path, scenario);
        out.paths.push_back(std::move(result->path));
    }
    return out;
}

PlanResult make_base(const Scenario& scenario, PlannerKind planner,
                     SolverKind solver, const PlannerOptions& options) {
    PlanResult r;
    r.planner = planner_name(planner);
    r.solver = solver_name(solver);
    r.gamma = options.params.gamma;
    r.lambda_motion = options.params.lambda_motion;
    return r;
}

void finalize_success(PlanResult& r, std::vector<Trajectory> paths,
                      const Scenario& scenario) {
    r.paths = std::move(paths);
    r.marginals = joint_marginals(r.paths, scenario);
    r.total_reward = objective(r.paths, scenario);
}

}  // namespace

PlanResult plan_unconstrained(const Scenario& scenario, SolverKind solver,
                              const PlannerOptions& options) {
    auto t0 = std::chrono::steady_clock::now();
    PlanResult r = make_base(scenario, PlannerKind::Unconstrained, solver,
                             options);
    GreedyOutcome greedy =
        plan_greedy_sequence(scenario, solver, options.params, {});
    if (greedy.failed_robot >= 0) {
        r.status = "failed: no feasible path for robot " +
                   std::to_string(greedy.failed_robot);
    } else {
        finalize_success(r, std::move(greedy.paths), scenario);
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    return r;
}

PlanResult plan_sequential(const Scenario& scenario, SolverKind solver,
                           const PlannerOptions& options) {
    auto t0 = std::chrono::steady_clock::now();
    PlanResult r = make_base(scenario, PlannerKind::Sequential, solver, options);
    CoverageLedger ledger;
    std::vector<Trajectory> paths;
    std::vector<Constraint> constraints;
    const int T = scenario.horizon;
    bool failed = false;
    for (int i = 0; i < scenario.num_robots() && !failed; ++i) {
        auto result = solve(solver, i, constraints, ledger, scenario,
                            options.params);
        if (!result) {
            r.status = "failed: no feasible path for robot " + std::to_string(i);
            failed = true;
            break;
        }
        commit_path(ledger, i, result->path, scenario);
        // Later robots may not collide with this committed trajectory.
        for (int later = i + 1; later < scenario.num_robots(); ++later) {
            for (int t = 0; t <= T; ++t)
                constraints.push_back(
                    {later, result->path[t], std::nullopt, t});
            for (int t = 0; t < T; ++t)
                constraints.push_back(
                    {later, result->path[t + 1], result->path[t], t});
        }
        paths.push_back(std::move(result->path));
    }
    if (!failed) {
        finalize_success(r, std::move(paths), scenario);
        r.constraints = std::move(constraints);
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    return r;
}

PlanResult plan_cocap(const Scenario& scenario, SolverKind solver,
                      const PlannerOptions& options) {
    auto t0 = std::chrono::steady_clock::now();
    PlanResult r = make_base(scenario, PlannerKind::CoCap, solver, options);
    auto finish = [&](PlanResult& out) {
        out.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        return out;
    };

    GreedyOutcome greedy =
        plan_greedy_sequence(scenario, solver, options.params, {});
    if (greedy.failed_robot >= 0) {
        r.status = "failed: no feasible greedy path for robot " +
                   std::to_string(greedy.failed_robot);
        return finish(r);
    }

    std::deque<TreeNode> nodes;
    std::priority_queue<TreeNode*, std::vector<TreeNode*>, NodeOrder> open;
    auto push_node = [&](TreeNode&& node) {
        for (int i = 0; i < scenario.num_robots(); ++i)
            if (!path_satisfies(node.paths[i], i, node.constraints))
                throw std::logic_error("tree node inconsistent with constraints");
        node.id = r.nodes_generated++;
        nodes.push_back(std::move(node));
        open.push(&nodes.back());
    };

    TreeNode root;
    root.paths = std::move(greedy.paths);
    root.ledger = std::move(greedy.ledger);
    root.g = ledger_g(root.ledger, scenario);
    push_node(std::move(root));

    const TreeNode* best_examined = nullptr;
    while (!open.empty()) {
        const TreeNode* node = open.top();
        open.pop();
        ++r.nodes_expanded;
        if (!best_examined || node->g > best_examined->g) best_examined = node;

        std::optional<Conflict> conflict = detect_first_conflict(node->paths);
        if (!conflict) {
            finalize_success(r, node->paths, scenario);
            r.constraints = node->constraints;
            return finish(r);
        }
        if (r.nodes_generated >= options.max_nodes) {
            r.status = "failed: node budget exhausted";
            break;
        }
        ++r.conflicts_resolved;
        auto [omega_i, omega_j] = split(*conflict);

        // The two replans are independent of each other.
        auto replan = [&](const Constraint& omega) -> std::optional<TreeNode> {
            TreeNode child;
            child.constraints = node->constraints;
            child.constraints.push_back(omega);
            child.ledger = node->ledger;
            child.ledger.remove_robot(omega.robot);
            auto result = solve(solver, omega.robot, child.constraints,
                                child.ledger, scenario, options.params);
            if (!result) return std::nullopt;
            commit_path(child.ledger, omega.robot, result->path, scenario);
            child.paths = node->paths;
            child.paths[omega.robot] = std::move(result->path);
            child.g = ledger_g(child.ledger, scenario);
            return child;
        };
        auto right = std::async(std::launch::async, replan, omega_j);
        std::optional<TreeNode> left = replan(omega_i);
        std::optional<TreeNode> right_node = right.get();
        if (left) push_node(std::move(*left));
        if (right_node) push_node(std::move(*right_node));
    }

    if (r.status == "ok") r.status = "failed: constraint tree exhausted";
    if (best_examined) {
        // Best-effort diagnostics from the highest-g node examined.
        r.paths = best_examined->paths;
        r.constraints = best_examined->constraints;
        r.total_reward = best_examined->g;
    }
    return finish(r);
}

PlanResult plan(PlannerKind planner, const Scenario& scenario,
                SolverKind solver, const PlannerOptions& options) {
    switch (planner) {
        case PlannerKind::Unconstrained:
            return plan_unconstrained(scenario, solver, options);
        case PlannerKind::Sequential:
            return plan_sequential(scenario, solver, options);
        case PlannerKind::CoCap:
            return plan_cocap(scenario, solver, options);
    }
    throw std::invalid_argument("unknown planner kind");
}

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
}

ValidationReport validate(const PlanResult& result, const Scenario& scenario) {
    ValidationReport report;
    auto add = [&](const std::string& name, bool passed,
                   const std::string& detail = "") {
        report.checks.push_back({name, passed, detail});
    };

    if (!result.ok()) {
        add("status", false, result.status);
        return report;
    }
    add("status", true);

    const int T = scenario.horizon;
    bool shape = static_cast<int>(result.paths.size()) == scenario.num_robots();
    for (const Trajectory& p : result.paths)
        shape = shape && static_cast<int>(p.size()) == T + 1;
    add("shape", shape,
        shape ? "" : "expected one length-(T+1) path per robot");
    if (!shape) return report;

    bool starts = true, traverse = true, continuous = true;
    for (int i = 0; i < scenario.num_robots(); ++i) {
        const Trajectory& p = result.paths[i];
        starts = starts && p[0] == scenario.robot_starts[i];
        for (int t = 0; t <= T; ++t) {
            if (!scenario.heightmap.in_bounds(p[t].x, p[t].y) ||
                !traversable(p[t], scenario.heightmap, scenario.motion)) {
                traverse = false;
                continue;
            }
            if (t < T) {
                int dx = std::abs(p[t + 1].x - p[t].x);
                int dy = std::abs(p[t + 1].y - p[t].y);
                int dist = scenario.motion.connectivity == Connectivity::Eight
                               ? std::max(dx, dy)
                               : dx + dy;
                continuous = continuous && dist <= scenario.motion.max_step;
            }
        }
    }
    add("starts", starts);
    add("traversable", traverse);
    add("continuity", continuous);

    bool compliant = true;
    for (int i = 0; i < scenario.num_robots(); ++i)
        compliant =
            compliant && path_satisfies(result.paths[i], i, result.constraints);
    add("constraint_compliance", compliant);

    if (result.planner != "unconstrained") {
        auto conflict = detect_first_conflict(result.paths);
        add("conflict_free", !conflict.has_value(),
            conflict ? "conflict at t=" + std::to_string(conflict->t) : "");
    }

    double g = objective(result.paths, scenario);
    bool g_ok = std::abs(g - result.total_reward) <= 1e-9;
    add("objective_match", g_ok,
        g_ok ? "" : "recomputed g=" + std::to_string(g));
    return report;
}

namespace {

json constraint_to_json(const Constraint& c) {
    json j{{"robot", c.robot}, {"t", c.t}, {"from", {c.from.x, c.from.y}}};
    j["to"] = c.to ? json{c.to->x, c.to->y} : json(nullptr);
    return j;
}

Constraint constraint_from_json(const json& j) {
    Constraint c;
    c.robot = j.at("robot").get<int>();
    c.t = j.at("t").get<int>();
    c.from = {j.at("from")[0].get<int>(), j.at("from")[1].get<int>()};
    if (!j.at("to").is_null())
        c.to = Cell{j.at("to")[0].get<int>(), j.at("to")[1].get<int>()};
    return c;
}

}  // namespace

std::string plan_result_to_json_text(const PlanResult& r) {
    json doc;
    doc["planner"] = r.planner;
    doc["solver"] = r.solver;
    doc["status"] = r.status;
    doc["gamma"] = r.gamma;
    doc["lambda_motion"] = r.lambda_motion;
    json paths = json::array();
    for (const Trajectory& p : r.paths) {
        json path = json::array();
        for (const Cell& c : p) path.push_back({c.x, c.y});
        paths.push_back(path);
    }
    doc["paths"] = paths;
    doc["marginals"] = r.marginals;
    doc["total_reward"] = r.total_reward;
    doc["nodes_generated"] = r.nodes_generated;
    doc["nodes_expanded"] = r.nodes_expanded;
    doc["conflicts_resolved"] = r.conflicts_resolved;
    doc["wall_ms"] = r.wall_ms;
    json constraints = json::array();
    for (const Constraint& c : r.constraints)
        constraints.push_back(constraint_to_json(c));
    doc["constraints"] = constraints;
    return doc.dump(2) + "\n";
}

PlanResult plan_result_from_json_text(const std::string& text) {
    json doc = json::parse(text);
    PlanResult r;
    r.planner = doc.at("planner").get<std::string>();
    r.solver = doc.at("solver").get<std::string>();
    r.status = doc.at("status").get<std::string>();
    r.gamma = doc.at("gamma").get<double>();
    r.lambda_motion = doc.at("lambda_motion").get<double>();
    for (const json& path : doc.at("paths")) {
        Trajectory p;
        for (const json& c : path)
            p.push_back({c[0].get<int>(), c[1].get<int>()});
        r.paths.push_back(std::move(p));
    }
    r.marginals = doc.at("marginals").get<std::vector<double>>();
    r.total_reward = doc.at("total_reward").get<double>();
    r.nodes_generated = doc.at("nodes_generated").get<std::uint64_t>();
    r.nodes_expanded = doc.at("nodes_expanded").get<std::uint64_t>();
    r.conflicts_resolved = doc.at("conflicts_resolved").get<std::uint64_t>();
    r.wall_ms = doc.at("wall_ms").get<double>();
    for (const json& c : doc.at("constraints"))
        r.constraints.push_back(constraint_from_json(c));
    return r;
}

PlanResult load_plan_result(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plan file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return plan_result_from_json_text(text);
}

void save_plan_result(const PlanResult& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write plan file: " + path);
    out << plan_result_to_json_text(r);
}

}  // namespace viewplan
