#include "viewplan/coverage.hpp"

#include <cmath>
#include <stdexcept>

#include "viewplan/camera.hpp"

namespace viewplan {

void CoverageLedger::insert(const LedgerKey& key, double density) {
    if (density < 0.0)
        throw std::invalid_argument("ledger densities must be >= 0");
    auto& face_entries = entries_[{key.actor, key.face}];
    auto [it, inserted] = face_entries.insert({{key.robot, key.t}, density});
    (void)it;
    if (!inserted)
        throw std::invalid_argument("double commit for (robot, actor, face, t)");
    double total = 0.0;
    for (const auto& [obs, d] : face_entries) total += d;
    totals_[{key.actor, key.face}] = total;
}

void CoverageLedger::remove_robot(int robot) {
    for (auto it = entries_.begin(); it != entries_.end();) {
        auto& face_entries = it->second;
        for (auto e = face_entries.begin(); e != face_entries.end();)
            e = e->first.first == robot ? face_entries.erase(e) : std::next(e);
        if (face_entries.empty()) {
            totals_.erase(it->first);
            it = entries_.erase(it);
        } else {
            double total = 0.0;
            for (const auto& [obs, d] : face_entries) total += d;
            totals_[it->first] = total;
            ++it;
        }
    }
}

double CoverageLedger::covp(int actor, int face) const {
    auto it = totals_.find({actor, face});
    return it == totals_.end() ? 0.0 : it->second;
}

std::size_t CoverageLedger::size() const {
    std::size_t n = 0;
    for (const auto& [fk, m] : entries_) n += m.size();
    return n;
}

std::vector<std::pair<LedgerKey, double>> CoverageLedger::entries() const {
    std::vector<std::pair<LedgerKey, double>> out;
    out.reserve(size());
    for (const auto& [fk, m] : entries_)
        for (const auto& [obs, d] : m)
            out.push_back({{obs.first, fk.first, fk.second, obs.second}, d});
    return out;
}

double CoverageLedger::recompute_covp(int actor, int face) const {
    auto it = entries_.find({actor, face});
    if (it == entries_.end()) return 0.0;
    double total = 0.0;
    for (const auto& [obs, d] : it->second) total += d;
    return total;
}

double cov(const GridVertex& x, int actor, int face, const Scenario& scenario) {
    CameraPose pose = aim_at(x, scenario, x.t);
    auto faces = scenario.actors.at(actor).faces_at(x.t);
    return face_pixel_density(pose, scenario.camera, faces.at(face), scenario,
                              x.t);
}

double covm(const GridVertex& x, const CoverageLedger& ledger,
            const Scenario& scenario) {
    double gain = 0.0;
    for (const ActorTrack& a : scenario.actors) {
        for (int f = 0; f < 4; ++f) {
            double prior = ledger.covp(a.id(), f);
            double fresh = cov(x, a.id(), f, scenario);
            gain += std::sqrt(fresh + prior) - std::sqrt(prior);
        }
    }
    return gain;
}

void commit(CoverageLedger& ledger, int robot, const GridVertex& x,
            const Scenario& scenario) {
    for (const ActorTrack& a : scenario.actors) {
        for (int f = 0; f < 4; ++f) {
            double fresh = cov(x, a.id(), f, scenario);
            if (fresh > 0.0)
                ledger.insert({robot, a.id(), f, x.t}, fresh);
        }
    }
}

void commit_path(CoverageLedger& ledger, int robot, const Trajectory& path,
                 const Scenario& scenario) {
    for (int t = 1; t < static_cast<int>(path.size()); ++t)
        commit(ledger, robot, {path[t].x, path[t].y, t}, scenario);
}

namespace {

void check_shape(const std::vector<Trajectory>& joint_path,
                 const Scenario& scenario) {
    for (const Trajectory& p : joint_path)
        if (static_cast<int>(p.size()) != scenario.horizon + 1)
            throw std::invalid_argument("trajectory length must be T+1");
}

double ledger_objective(const CoverageLedger& ledger,
                        const Scenario& scenario) {
    double g = 0.0;
    for (const ActorTrack& a : scenario.actors)
        for (int f = 0; f < 4; ++f) g += std::sqrt(ledger.covp(a.id(), f));
    return g;
}

}  // namespace

double objective(const std::vector<Trajectory>& joint_path,
                 const Scenario& scenario) {
    check_shape(joint_path, scenario);
    CoverageLedger ledger;
    for (int t = 1; t <= scenario.horizon; ++t)
        for (int i = 0; i < static_cast<int>(joint_path.size()); ++i)
            commit(ledger, i, {joint_path[i][t].x, joint_path[i][t].y, t},
                   scenario);
    return ledger_objective(ledger, scenario);
}

std::vector<double> joint_marginals(const std::vector<Trajectory>& joint_path,
                                    const Scenario& scenario) {
    check_shape(joint_path, scenario);
    CoverageLedger ledger;
    std::vector<double> marginals(scenario.horizon, 0.0);
    for (int t = 1; t <= scenario.horizon; ++t) {
        for (int i = 0; i < static_cast<int>(joint_path.size()); ++i) {
            GridVertex x{joint_path[i][t].x, joint_path[i][t].y, t};
            marginals[t - 1] += covm(x, ledger, scenario);
            commit(ledger, i, x, scenario);
        }
    }
    return marginals;
}

}  // namespace viewplan
