#include "viewplan/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <stdexcept>

#include "viewplan/coverage.hpp"

namespace viewplan {

namespace {

constexpr double kWallElevation = 100.0;

// Low flight altitude keeps the density peaks sharp, so view positions
// are genuinely contested.
MotionModel default_motion() {
    return {1, 4.0, 1.0, Connectivity::Eight};
}

CameraIntrinsics default_camera() { return {400.0, 640, 480}; }

struct GridBuilder {
    int width, height;
    std::vector<double> elevation;

    GridBuilder(int w, int h) : width(w), height(h), elevation(w * h, 0.0) {}

    void wall(int x, int y) {
        if (x >= 0 && x < width && y >= 0 && y < height)
            elevation[static_cast<size_t>(y) * width + x] = kWallElevation;
    }
    void wall_rect(int x0, int y0, int x1, int y1) {
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) wall(x, y);
    }
    void carve(int x, int y) {
        if (x >= 0 && x < width && y >= 0 && y < height)
            elevation[static_cast<size_t>(y) * width + x] = 0.0;
    }
    void carve_rect(int x0, int y0, int x1, int y1) {
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) carve(x, y);
    }
    bool open(int x, int y) const {
        return elevation[static_cast<size_t>(y) * width + x] == 0.0;
    }
};

// Seeded placement of distinct robot cells drawn from a candidate box.
std::vector<Cell> place_robots(const GridBuilder& grid, int count,
                               int x0, int y0, int x1, int y1,
                               std::mt19937_64& rng) {
    std::vector<Cell> candidates;
    for (int y = std::max(0, y0); y <= std::min(grid.height - 1, y1); ++y)
        for (int x = std::max(0, x0); x <= std::min(grid.width - 1, x1); ++x)
            if (grid.open(x, y)) candidates.push_back({x, y});
    if (static_cast<int>(candidates.size()) < count)
        throw std::invalid_argument("not enough open cells to place robots");
    std::vector<Cell> out;
    while (static_cast<int>(out.size()) < count) {
        Cell c = candidates[rng() % candidates.size()];
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
}

ActorTrack make_actor(int id, const std::vector<Pose2>& poses) {
    return ActorTrack(id, 0.8, 0.8, 1.8, poses);
}

// Straight-line pose interpolation through cell-center waypoints at one
// cell per timestep, holding the final pose.
std::vector<Pose2> walk_through(const std::vector<Vec2>& points, int horizon) {
    std::vector<Pose2> poses;
    Vec2 cur = points.front();
    poses.push_back({cur.x, cur.y, 0.0});
    size_t leg = 1;
    while (static_cast<int>(poses.size()) <= horizon) {
        if (leg >= points.size()) {
            poses.push_back(poses.back());
            continue;
        }
        Vec2 target = points[leg];
        Vec2 d = target - cur;
        double dist = d.norm();
        if (dist < 1e-9) {
            ++leg;
            continue;
        }
        double step = std::min(1.0, dist);
        Vec2 dir{d.x / dist, d.y / dist};
        cur = cur + dir * step;
        poses.push_back({cur.x, cur.y, std::atan2(dir.y, dir.x)});
        if (step == dist) ++leg;
    }
    // First pose faces the initial direction of travel.
    if (poses.size() > 1) poses[0].yaw = poses[1].yaw;
    return poses;
}

}  // namespace

Scenario generate_corridor(const CorridorParams& p) {
    if (p.corridor_width < 1)
        throw std::invalid_argument("corridor width must be >= 1");
    if (p.corridor_length > p.map_width || p.corridor_length < 12)
        throw std::invalid_argument("corridor length must fit the map and be >= 12");
    if (p.actors < 1 || p.robots < 1)
        throw std::invalid_argument("need at least one actor and robot");

    GridBuilder grid(p.map_width, p.map_height);
    const int y0 = (p.map_height - p.corridor_width) / 2;  // first open row
    const int x0 = (p.map_width - p.corridor_length) / 2;
    const int x1 = x0 + p.corridor_length - 1;
    grid.wall_rect(x0, y0 - p.wall_thickness, x1, y0 - 1);
    grid.wall_rect(x0, y0 + p.corridor_width, x1,
                   y0 + p.corridor_width + p.wall_thickness - 1);

    std::mt19937_64 rng(p.seed);
    std::vector<ActorTrack> actors;
    for (int k = 0; k < p.actors; ++k) {
        int row = y0 + k % p.corridor_width;
        // March toward the west entrance so both leading and trailing
        // view slots are reachable from the robots' side.
        double xs = x0 + 9.5 + 2.0 * k;
        double ys = row + 0.5;
        actors.push_back(make_actor(
            k, walk_through({{xs, ys}, {xs - p.horizon, ys}}, p.horizon)));
    }

    std::vector<Cell> robots =
        place_robots(grid, p.robots, x0 - 5, y0 - 4, x0 - 1,
                     y0 + p.corridor_width + 3, rng);

    Scenario s{HeightMap(p.map_width, p.map_height, 1.0,
                         std::move(grid.elevation)),
               default_motion(),
               p.horizon,
               std::move(robots),
               std::move(actors),
               default_camera(),
               0.95,
               p.seed};
    s.validate();
    return s;
}

Scenario generate_bottleneck(const BottleneckParams& p) {
    if (p.neck_width < 1)
        throw std::invalid_argument("neck width must be >= 1");
    const int wt = 2;
    const int xm = p.map_width / 2;
    const int x0 = xm - 8, x1 = xm + 6;
    const int yc = p.map_height / 2;
    const int ya = yc - p.feeder_separation;
    const int yb = yc + p.feeder_separation;
    if (x0 < 2 || x1 > p.map_width - 2 || ya - wt < 1 ||
        yb + p.neck_width + wt > p.map_height - 1)
        throw std::invalid_argument("map too small for bottleneck layout");

    GridBuilder grid(p.map_width, p.map_height);
    grid.wall_rect(x0, ya - wt, x1, yb + p.neck_width - 1 + wt);
    const int jx1 = xm + p.neck_width - 1;
    grid.carve_rect(x0, ya, jx1, ya + p.neck_width - 1);           // feeder A
    grid.carve_rect(x0, yb, jx1, yb + p.neck_width - 1);           // feeder B
    grid.carve_rect(xm, ya, jx1, yb + p.neck_width - 1);           // junction
    grid.carve_rect(xm, yc, x1, yc + p.neck_width - 1);            // neck

    std::mt19937_64 rng(p.seed);
    std::vector<ActorTrack> actors;
    for (int k = 0; k < p.actors; ++k) {
        bool top = k % 2 == 0;
        int yf = top ? ya : yb;
        double ys = yf + 0.5;
        double yn = yc + 0.5;
        double jx = xm + 0.5;
        // Staggered starts so the merged tracks queue through the neck.
        double xs = jx - 4.0 - 2.0 * (k / 2) - (k % 2);
        actors.push_back(make_actor(
            k, walk_through({{xs, ys}, {jx, ys}, {jx, yn}, {x1 - 0.5, yn}},
                            p.horizon)));
    }

    std::vector<Cell> robots =
        place_robots(grid, p.robots, x0 - 5, ya - 4, x0 - 1,
                     yb + p.neck_width + 3, rng);

    Scenario s{HeightMap(p.map_width, p.map_height, 1.0,
                         std::move(grid.elevation)),
               default_motion(),
               p.horizon,
               std::move(robots),
               std::move(actors),
               default_camera(),
               0.95,
               p.seed};
    s.validate();
    return s;
}

Scenario generate_clutter(const ClutterParams& p) {
    GridBuilder grid(p.map_width, p.map_height);
    std::mt19937_64 rng(p.seed);
    for (int k = 0; k < p.obstacle_count; ++k) {
        int w = 1 + static_cast<int>(rng() % 3);
        int h = 1 + static_cast<int>(rng() % 3);
        int x = 1 + static_cast<int>(rng() % std::max(1, p.map_width - w - 2));
        int y = 1 + static_cast<int>(rng() % std::max(1, p.map_height - h - 2));
        grid.wall_rect(x, y, x + w - 1, y + h - 1);
    }

    auto random_open = [&]() {
        for (int tries = 0; tries < 10000; ++tries) {
            int x = static_cast<int>(rng() % p.map_width);
            int y = static_cast<int>(rng() % p.map_height);
            if (grid.open(x, y)) return Cell{x, y};
        }
        throw std::invalid_argument("clutter map has no open cells");
    };

    std::vector<ActorTrack> actors;
    for (int k = 0; k < p.actors; ++k) {
        Cell c = random_open();
        std::vector<Pose2> poses;
        poses.push_back({c.x + 0.5, c.y + 0.5, 0.0});
        for (int t = 1; t <= p.horizon; ++t) {
            std::vector<Cell> moves;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    int nx = c.x + dx, ny = c.y + dy;
                    if (nx < 0 || nx >= p.map_width || ny < 0 ||
                        ny >= p.map_height)
                        continue;
                    if (grid.open(nx, ny)) moves.push_back({nx, ny});
                }
            Cell next = moves[rng() % moves.size()];
            double yaw = next == c ? poses.back().yaw
                                   : std::atan2(next.y - c.y, next.x - c.x);
            c = next;
            poses.push_back({c.x + 0.5, c.y + 0.5, yaw});
        }
        actors.push_back(make_actor(k, poses));
    }

    std::vector<Cell> robots;
    while (static_cast<int>(robots.size()) < p.robots) {
        Cell c = random_open();
        if (std::find(robots.begin(), robots.end(), c) == robots.end())
            robots.push_back(c);
    }

    Scenario s{HeightMap(p.map_width, p.map_height, 1.0,
                         std::move(grid.elevation)),
               default_motion(),
               p.horizon,
               std::move(robots),
               std::move(actors),
               default_camera(),
               0.95,
               p.seed};
    s.validate();
    return s;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_ms(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

Scenario resolve_scenario(const ExperimentConfig& cfg, int repetition) {
    std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(repetition);
    if (cfg.generator.empty()) {
        if (cfg.scenario_path.empty())
            throw std::invalid_argument("config needs a scenario or generator");
        return load_scenario(cfg.scenario_path);
    }
    if (cfg.generator == "corridor") {
        CorridorParams p = cfg.corridor;
        p.seed = seed;
        return generate_corridor(p);
    }
    if (cfg.generator == "bottleneck") {
        BottleneckParams p = cfg.bottleneck;
        p.seed = seed;
        return generate_bottleneck(p);
    }
    if (cfg.generator == "random-clutter" || cfg.generator == "clutter") {
        ClutterParams p = cfg.clutter;
        p.seed = seed;
        return generate_clutter(p);
    }
    throw std::invalid_argument("unknown generator: " + cfg.generator);
}

void write_trace_csv(const std::string& path,
                     const std::vector<MetricsRecord>& rep_records,
                     int horizon) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace file: " + path);
    out << "t";
    for (const MetricsRecord& r : rep_records) out << "," << r.planner;
    out << "\n";
    for (int t = 0; t < horizon; ++t) {
        out << (t + 1);
        for (const MetricsRecord& r : rep_records) {
            out << ",";
            if (r.status == "ok" && t < static_cast<int>(r.scaled_trace.size()))
                out << fmt_double(r.scaled_trace[t]);
        }
        out << "\n";
    }
}

}  // namespace

bool all_cells_ok(const std::vector<MetricsRecord>& records) {
    return std::all_of(records.begin(), records.end(),
                       [](const MetricsRecord& r) { return r.status == "ok"; });
}

std::vector<MetricsRecord> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.planners.empty())
        throw std::invalid_argument("config needs at least one planner");
    if (cfg.repetitions < 1)
        throw std::invalid_argument("repetitions must be >= 1");

    std::filesystem::create_directories(cfg.out_dir);
    PlannerOptions options;
    options.params.gamma = cfg.gamma;
    options.params.lambda_motion = cfg.lambda_motion;

    std::vector<MetricsRecord> records;
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        Scenario scenario = resolve_scenario(cfg, rep);

        // One cell per planner; cells are pure and may run concurrently.
        std::vector<PlanResult> results(cfg.planners.size());
        if (cfg.timing_strict) {
            for (size_t k = 0; k < cfg.planners.size(); ++k)
                results[k] = plan(cfg.planners[k], scenario, cfg.solver, options);
        } else {
            std::vector<std::future<PlanResult>> futures;
            for (PlannerKind planner : cfg.planners)
                futures.push_back(std::async(std::launch::async, [&, planner] {
                    return plan(planner, scenario, cfg.solver, options);
                }));
            for (size_t k = 0; k < futures.size(); ++k)
                results[k] = futures[k].get();
        }

        double unconstrained_total = 0.0;
        for (size_t k = 0; k < cfg.planners.size(); ++k)
            if (cfg.planners[k] == PlannerKind::Unconstrained &&
                results[k].ok())
                unconstrained_total = results[k].total_reward;
        double scale =
            unconstrained_total > 0.0 ? unconstrained_total : 1.0;

        std::vector<MetricsRecord> rep_records;
        for (size_t k = 0; k < cfg.planners.size(); ++k) {
            const PlanResult& res = results[k];
            MetricsRecord rec;
            rec.planner = res.planner;
            rec.solver = res.solver;
            rec.status = res.status;
            rec.repetition = rep;
            if (res.ok()) {
                ValidationReport report = validate(res, scenario);
                if (!report.all_passed()) {
                    for (const CheckResult& c : report.checks)
                        if (!c.passed) rec.status = "invalid: " + c.name;
                }
            }
            rec.total_reward = res.total_reward;
            rec.compute_ms = cfg.emit_timing ? res.wall_ms : 0.0;
            rec.nodes_generated = res.nodes_generated;
            rec.nodes_expanded = res.nodes_expanded;
            rec.conflicts_resolved = res.conflicts_resolved;
            for (double m : res.marginals) rec.scaled_trace.push_back(m / scale);
            rep_records.push_back(rec);

            std::string plan_path = cfg.out_dir + "/plan_" + res.planner + "_" +
                                    res.solver + "_rep" + std::to_string(rep) +
                                    ".json";
            save_plan_result(res, plan_path);
        }

        std::string trace_path =
            rep == 0 ? cfg.out_dir + "/trace.csv"
                     : cfg.out_dir + "/trace_rep" + std::to_string(rep) + ".csv";
        write_trace_csv(trace_path, rep_records, scenario.horizon);
        records.insert(records.end(), rep_records.begin(), rep_records.end());
    }

    std::ofstream metrics(cfg.out_dir + "/metrics.csv", std::ios::binary);
    if (!metrics)
        throw std::runtime_error("cannot write metrics.csv in " + cfg.out_dir);
    metrics << "planner,solver,total_reward,compute_ms,nodes_generated,"
               "nodes_expanded,conflicts_resolved,status\n";
    for (const MetricsRecord& r : records) {
        metrics << r.planner << "," << r.solver << ","
                << (r.status == "ok" ? fmt_double(r.total_reward) : "nan") << ","
                << fmt_ms(r.compute_ms) << "," << r.nodes_generated << ","
                << r.nodes_expanded << "," << r.conflicts_resolved << ","
                << r.status << "\n";
    }
    metrics.close();

    if (cfg.repetitions > 1) {
        std::ofstream summary(cfg.out_dir + "/summary.csv", std::ios::binary);
        summary << "planner,solver,metric,mean,min,max\n";
        for (PlannerKind planner : cfg.planners) {
            std::vector<double> rewards, times;
            for (const MetricsRecord& r : records)
                if (r.planner == planner_name(planner) && r.status == "ok") {
                    rewards.push_back(r.total_reward);
                    times.push_back(r.compute_ms);
                }
            auto emit = [&](const char* metric, const std::vector<double>& v) {
                if (v.empty()) return;
                double mean = 0.0;
                for (double x : v) mean += x;
                mean /= v.size();
                summary << planner_name(planner) << ","
                        << solver_name(cfg.solver) << "," << metric << ","
                        << fmt_double(mean) << ","
                        << fmt_double(*std::min_element(v.begin(), v.end()))
                        << ","
                        << fmt_double(*std::max_element(v.begin(), v.end()))
                        << "\n";
            };
            emit("total_reward", rewards);
            emit("compute_ms", times);
        }
    }
    return records;
}

}  // namespace viewplan
