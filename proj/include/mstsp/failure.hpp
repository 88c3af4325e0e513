#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mstsp/grasp.hpp"
#include "mstsp/model.hpp"
#include "mstsp/rng.hpp"
#include "mstsp/timeline.hpp"

namespace mstsp {

struct FailureScenario {
    int failed_vehicle = 0;
    double t_fail = 0.0;
};

/// A surviving vehicle's re-planning start state: where it becomes
/// available (its commit point) and how much battery it has left.
struct SurvivorState {
    int vehicle_id = 0;
    Point position;
    double commit_time = 0.0;
    double remaining_budget = 0.0;
};

struct ResidualInstance {
    Point depot;
    std::vector<Segment> uninspected;
    std::vector<SurvivorState> survivors;
    // True when the failed vehicle was still flying at t_fail. With zero
    // survivors this distinguishes a mid-air loss from a failure after the
    // vehicle already completed its tour.
    bool failed_mid_flight = false;
    double v_max = 5.0;
    double v_insp = 1.0;
    EnergyModel energy;
};

/// Removes the failed vehicle at t_fail and derives the residual problem.
/// The failed vehicle's in-progress segment counts as un-inspected; each
/// survivor commits at the end of its current inspection (or immediately
/// if in transit or idle) and keeps C_max minus what it has consumed.
inline ResidualInstance inject_failure(const Instance& inst, const Plan& plan,
                                       const MissionTimeline& timeline,
                                       const FailureScenario& scenario) {
    if (scenario.t_fail < 0.0 || scenario.t_fail > timeline.t_max)
        throw std::invalid_argument("inject_failure: t_fail outside [0, t_max]");
    const VehicleTimeline* failed = nullptr;
    for (const auto& vt : timeline.vehicles)
        if (vt.vehicle_id == scenario.failed_vehicle) failed = &vt;
    if (!failed)
        throw std::invalid_argument("inject_failure: unknown vehicle id");

    ResidualInstance res;
    res.depot = inst.depot;
    res.v_max = inst.v_max;
    res.v_insp = inst.v_insp;
    res.energy = inst.energy;

    const double t = scenario.t_fail;
    res.failed_mid_flight = t < failed->finish_time();
    std::set<int> inspected;
    // A segment is inspected once its inspection leg has completed.
    for (const auto& vt : timeline.vehicles)
        for (const auto& ev : vt.events)
            if (ev.kind == EventKind::InspectEnd && ev.t <= t)
                inspected.insert(ev.segment_id);

    for (const auto& vt : timeline.vehicles) {
        if (vt.vehicle_id == scenario.failed_vehicle) continue;
        const VehicleState st = vt.state_at(t);
        SurvivorState sv;
        sv.vehicle_id = vt.vehicle_id;
        if (st.phase == Phase::Inspecting) {
            // Survivor finishes its current target before re-routing.
            inspected.insert(st.segment_id);
            sv.position = st.inspect_end_pos;
            sv.commit_time = st.inspect_end_t;
            sv.remaining_budget = inst.budget_percent - st.inspect_end_battery;
        } else {
            sv.position = st.pos;
            sv.commit_time = t;
            sv.remaining_budget = inst.budget_percent - st.battery;
        }
        sv.remaining_budget = std::max(0.0, sv.remaining_budget);
        res.survivors.push_back(sv);
    }

    for (const Segment& s : inst.segments)
        if (!inspected.contains(s.id)) res.uninspected.push_back(s);
    return res;
}

inline Problem as_problem(const ResidualInstance& res) {
    Problem p;
    p.depot = res.depot;
    p.segments = res.uninspected;
    for (const auto& sv : res.survivors)
        p.vehicles.push_back({sv.vehicle_id, sv.position, sv.remaining_budget});
    p.v_max = res.v_max;
    p.v_insp = res.v_insp;
    p.energy = res.energy;
    return p;
}

struct ReplanResult {
    bool success = false;
    Plan plan;
    double cost = 0.0;
    std::vector<double> tour_costs;
};

/// Re-solves the residual problem: survivor tours start at their commit
/// positions, end at the depot, and must fit each survivor's remaining
/// budget. An infeasible outcome is reported, not thrown.
inline ReplanResult replan(const ResidualInstance& res,
                           const SolverConfig& cfg) {
    ReplanResult out;
    if (res.survivors.empty()) {
        // No vehicle left to re-plan with; recoverable only if the mission
        // was already over (all segments inspected and the failed vehicle
        // back at the depot). A single-vehicle fleet therefore has no
        // recovery window at all.
        out.success = res.uninspected.empty() && !res.failed_mid_flight;
        return out;
    }
    const Problem prob = as_problem(res);
    if (res.uninspected.empty()) {
        // Only the mandatory returns to the depot remain.
        out.success = true;
        for (std::size_t v = 0; v < prob.vehicles.size(); ++v) {
            Tour tour;
            tour.vehicle_id = prob.vehicles[v].vehicle_id;
            tour.start = prob.vehicles[v].start;
            const TourCost tc = tour_cost(prob, tour);
            out.tour_costs.push_back(tc.battery);
            if (tc.battery > prob.vehicles[v].budget) out.success = false;
            out.plan.tours.push_back(std::move(tour));
        }
        out.cost = evaluate(cfg.cost_kind, out.tour_costs,
                            [&] {
                                std::vector<double> b;
                                for (const auto& v : prob.vehicles)
                                    b.push_back(v.budget);
                                return b;
                            }(),
                            cfg.k_c);
        return out;
    }
    const SolveResult sr = solve(prob, cfg);
    out.success = sr.feasible;
    out.plan = sr.best_plan;
    out.cost = sr.best_cost;
    for (std::size_t v = 0; v < prob.vehicles.size(); ++v)
        out.tour_costs.push_back(tour_cost(prob, out.plan.tours[v]).battery);
    return out;
}

struct WindowSample {
    double t = 0.0;
    int vehicle = 0;
    bool success = false;
    double replan_cost = 0.0;
};

/// Robustness statistic of a plan: the fraction of the mission, measured
/// backward from t_max, during which any single-vehicle failure still
/// admits a feasible re-plan.
struct WindowReport {
    double t_star = 0.0;
    double t_max = 0.0;
    double window_percent = 0.0;
    std::vector<WindowSample> samples;
};

namespace detail {

inline void parallel_samples(std::size_t count, int threads,
                             const std::function<void(std::size_t)>& fn) {
    unsigned n = threads > 0 ? static_cast<unsigned>(threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(count, 1)));
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += n) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

/// Sweeps failure times over all timeline event times plus a dt grid,
/// testing every (time, vehicle) failure scenario, then refines the window
/// boundary by bisection down to 0.1 s.
inline WindowReport compute_window(const Instance& inst, const Plan& plan,
                                   const SolverConfig& cfg, double dt,
                                   int threads = 0) {
    if (!(dt > 0.0))
        throw std::invalid_argument("compute_window: dt must be positive");
    const MissionTimeline timeline = build_timeline(inst, plan);

    WindowReport report;
    report.t_max = timeline.t_max;
    if (timeline.t_max <= 0.0) {
        // Degenerate empty plan; nothing can ever be lost.
        report.window_percent = 100.0;
        return report;
    }

    std::set<double> grid_set{0.0, timeline.t_max};
    for (const auto& vt : timeline.vehicles)
        for (const auto& ev : vt.events)
            if (ev.t >= 0.0 && ev.t <= timeline.t_max) grid_set.insert(ev.t);
    for (double t = dt; t < timeline.t_max; t += dt) grid_set.insert(t);
    const std::vector<double> grid(grid_set.begin(), grid_set.end());

    const auto sample_one = [&](double t, int vehicle_id,
                                std::uint64_t seed) -> WindowSample {
        SolverConfig scfg = cfg;
        scfg.seed = seed;
        const ResidualInstance res =
            inject_failure(inst, plan, timeline, {vehicle_id, t});
        const ReplanResult rr = replan(res, scfg);
        return {t, vehicle_id, rr.success, rr.cost};
    };

    const std::size_t nveh = timeline.vehicles.size();
    report.samples.resize(grid.size() * nveh);
    detail::parallel_samples(
        report.samples.size(), threads, [&](std::size_t i) {
            const std::size_t ti = i / nveh;
            const std::size_t vi = i % nveh;
            const int vid = timeline.vehicles[vi].vehicle_id;
            report.samples[i] =
                sample_one(grid[ti], vid,
                           derive_seed(cfg.seed, ti, static_cast<std::uint64_t>(vid)));
        });

    // t_star = start of the maximal all-success suffix of the grid.
    std::vector<bool> all_ok(grid.size(), true);
    for (std::size_t i = 0; i < report.samples.size(); ++i)
        if (!report.samples[i].success) all_ok[i / nveh] = false;
    std::size_t k = grid.size();
    while (k > 0 && all_ok[k - 1]) --k;
    if (k == grid.size()) {
        // Even a failure at t_max is unrecoverable; no window.
        report.t_star = timeline.t_max;
        report.window_percent = 0.0;
        return report;
    }
    if (k == 0) {
        report.t_star = 0.0;
        report.window_percent = 100.0;
        return report;
    }

    // Bisection refinement inside the event-free bracket (grid[k-1], grid[k]).
    double lo = grid[k - 1];
    double hi = grid[k];
    const auto all_succeed_at = [&](double t) {
        for (const auto& vt : timeline.vehicles) {
            const auto s = sample_one(
                t, vt.vehicle_id,
                derive_seed(cfg.seed, static_cast<std::uint64_t>(t * 1024.0),
                            static_cast<std::uint64_t>(vt.vehicle_id)));
            if (!s.success) return false;
        }
        return true;
    };
    while (hi - lo > 0.1) {
        const double mid = 0.5 * (lo + hi);
        if (all_succeed_at(mid))
            hi = mid;
        else
            lo = mid;
    }
    report.t_star = hi;
    report.window_percent =
        100.0 * (timeline.t_max - report.t_star) / timeline.t_max;
    return report;
}

}  // namespace mstsp
