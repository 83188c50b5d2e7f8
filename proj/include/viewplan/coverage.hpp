#pragma once

#include <map>
#include <vector>

#include "viewplan/world.hpp"

namespace viewplan {

struct LedgerKey {
    int robot = 0;
    int actor = 0;
    int face = 0;
    int t = 0;
};

// Pixel bookkeeping: density contributed per (robot, actor, face, t),
// grouped per face. Face totals are recomputed in key order after every
// mutation so identical entry sets always yield identical doubles.
class CoverageLedger {
public:
    // Throws std::invalid_argument on a duplicate (robot, actor, face, t).
    void insert(const LedgerKey& key, double density);
    void remove_robot(int robot);

    double covp(int actor, int face) const;
    bool empty() const { return entries_.empty(); }
    std::size_t size() const;

    // All entries in (actor, face, robot, t) order.
    std::vector<std::pair<LedgerKey, double>> entries() const;
    // Face totals recomputed from scratch, for consistency checks.
    double recompute_covp(int actor, int face) const;

private:
    using FaceKey = std::pair<int, int>;  // (actor, face)
    using ObsKey = std::pair<int, int>;   // (robot, t)
    std::map<FaceKey, std::map<ObsKey, double>> entries_;
    std::map<FaceKey, double> totals_;
};

// Raw pixel density deposited by a robot at x on face f of actor j.
double cov(const GridVertex& x, int actor, int face, const Scenario& scenario);

// Incremental coverage gain of observing from x given the ledger:
// sum over faces of sqrt(cov + covp) - sqrt(covp).
double covm(const GridVertex& x, const CoverageLedger& ledger,
            const Scenario& scenario);

// Records the observation of robot `robot` at x: one entry per face with
// cov > 0.
void commit(CoverageLedger& ledger, int robot, const GridVertex& x,
            const Scenario& scenario);

// Commits one robot's whole trajectory (arrival timesteps 1..T).
void commit_path(CoverageLedger& ledger, int robot, const Trajectory& path,
                 const Scenario& scenario);

// Joint objective g: fresh ledger built in canonical order (t ascending,
// then robot index), then sum of sqrt(covp) over faces.
double objective(const std::vector<Trajectory>& joint_path,
                 const Scenario& scenario);

// Per-timestep joint marginals (t = 1..T) streamed in canonical order;
// they telescope to objective().
std::vector<double> joint_marginals(const std::vector<Trajectory>& joint_path,
                                    const Scenario& scenario);

}  // namespace viewplan
