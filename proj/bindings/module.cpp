#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "viewplan/coordination.hpp"
#include "viewplan/coverage.hpp"
#include "viewplan/harness.hpp"
#include "viewplan/world.hpp"

namespace py = pybind11;
using namespace viewplan;

namespace {

std::vector<Trajectory> to_trajectories(
    const std::vector<std::vector<std::pair<int, int>>>& paths) {
    std::vector<Trajectory> out;
    for (const auto& p : paths) {
        Trajectory traj;
        for (const auto& [x, y] : p) traj.push_back({x, y});
        out.push_back(std::move(traj));
    }
    return out;
}

std::vector<std::vector<std::pair<int, int>>> from_trajectories(
    const std::vector<Trajectory>& paths) {
    std::vector<std::vector<std::pair<int, int>>> out;
    for (const auto& p : paths) {
        std::vector<std::pair<int, int>> path;
        for (const Cell& c : p) path.emplace_back(c.x, c.y);
        out.push_back(std::move(path));
    }
    return out;
}

PlanResult run_plan(const Scenario& scenario, const std::string& planner,
                    const std::string& solver, double gamma,
                    double lambda_motion) {
    PlannerOptions options;
    options.params.gamma = gamma;
    options.params.lambda_motion = lambda_motion;
    return plan(planner_from_name(planner), scenario, solver_from_name(solver),
                options);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "multi-robot coordinated view planning core";

    py::class_<Scenario>(m, "Scenario")
        .def_property_readonly("horizon",
                               [](const Scenario& s) { return s.horizon; })
        .def_property_readonly("num_robots", &Scenario::num_robots)
        .def_property_readonly("num_actors", &Scenario::num_actors)
        .def_property_readonly("robot_starts",
                               [](const Scenario& s) {
                                   std::vector<std::pair<int, int>> out;
                                   for (const Cell& c : s.robot_starts)
                                       out.emplace_back(c.x, c.y);
                                   return out;
                               })
        .def("to_json", &scenario_to_json_text);

    py::class_<PlanResult>(m, "PlanResult")
        .def_readonly("planner", &PlanResult::planner)
        .def_readonly("solver", &PlanResult::solver)
        .def_readonly("status", &PlanResult::status)
        .def_readonly("total_reward", &PlanResult::total_reward)
        .def_readonly("marginals", &PlanResult::marginals)
        .def_readonly("nodes_generated", &PlanResult::nodes_generated)
        .def_readonly("nodes_expanded", &PlanResult::nodes_expanded)
        .def_readonly("conflicts_resolved", &PlanResult::conflicts_resolved)
        .def_readonly("wall_ms", &PlanResult::wall_ms)
        .def_property_readonly("ok", &PlanResult::ok)
        .def_property_readonly("paths",
                               [](const PlanResult& r) {
                                   return from_trajectories(r.paths);
                               })
        .def("to_json", &plan_result_to_json_text);

    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("scenario_from_json", &scenario_from_json_text, py::arg("text"));
    m.def("save_scenario", &save_scenario, py::arg("scenario"), py::arg("path"));

    m.def(
        "generate_corridor",
        [](int map_width, int map_height, int corridor_width,
           int corridor_length, int horizon, int robots, int actors,
           std::uint64_t seed) {
            return generate_corridor({map_width, map_height, corridor_width,
                                      corridor_length, 2, horizon, robots,
                                      actors, seed});
        },
        py::arg("map_width") = 72, py::arg("map_height") = 44,
        py::arg("corridor_width") = 1, py::arg("corridor_length") = 20,
        py::arg("horizon") = 8, py::arg("robots") = 2, py::arg("actors") = 2,
        py::arg("seed") = 0);
    m.def(
        "generate_bottleneck",
        [](int map_width, int map_height, int neck_width, int horizon,
           int robots, int actors, std::uint64_t seed) {
            return generate_bottleneck({map_width, map_height, neck_width, 3,
                                        horizon, robots, actors, seed});
        },
        py::arg("map_width") = 48, py::arg("map_height") = 32,
        py::arg("neck_width") = 1, py::arg("horizon") = 11,
        py::arg("robots") = 4, py::arg("actors") = 4, py::arg("seed") = 0);
    m.def(
        "generate_clutter",
        [](int map_width, int map_height, int obstacles, int horizon,
           int robots, int actors, std::uint64_t seed) {
            return generate_clutter({map_width, map_height, obstacles, horizon,
                                     robots, actors, seed});
        },
        py::arg("map_width") = 24, py::arg("map_height") = 18,
        py::arg("obstacles") = 10, py::arg("horizon") = 8, py::arg("robots") = 2,
        py::arg("actors") = 2, py::arg("seed") = 0);

    m.def("plan", &run_plan, py::arg("scenario"), py::arg("planner") = "cocap",
          py::arg("solver") = "view-search", py::arg("gamma") = 0.95,
          py::arg("lambda_motion") = 0.0,
          py::call_guard<py::gil_scoped_release>());

    m.def(
        "validate",
        [](const PlanResult& result, const Scenario& scenario) {
            std::vector<std::tuple<std::string, bool, std::string>> out;
            for (const CheckResult& c : validate(result, scenario).checks)
                out.emplace_back(c.name, c.passed, c.detail);
            return out;
        },
        py::arg("result"), py::arg("scenario"));

    m.def(
        "objective",
        [](const std::vector<std::vector<std::pair<int, int>>>& paths,
           const Scenario& scenario) {
            return objective(to_trajectories(paths), scenario);
        },
        py::arg("paths"), py::arg("scenario"));

    m.def(
        "detect_first_conflict",
        [](const std::vector<std::vector<std::pair<int, int>>>& paths)
            -> py::object {
            auto conflict = detect_first_conflict(to_trajectories(paths));
            if (!conflict) return py::none();
            py::dict d;
            d["kind"] =
                conflict->kind == ConflictKind::Vertex ? "vertex" : "edge-swap";
            d["robot_i"] = conflict->robot_i;
            d["robot_j"] = conflict->robot_j;
            d["v_i"] = std::make_pair(conflict->v_i.x, conflict->v_i.y);
            d["v_j"] = std::make_pair(conflict->v_j.x, conflict->v_j.y);
            d["t"] = conflict->t;
            return d;
        },
        py::arg("paths"));
}
