#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mstsp/costs.hpp"
#include "mstsp/model.hpp"
#include "mstsp/rng.hpp"

namespace mstsp {

struct SolverConfig {
    int restarts = 50;
    double rcl_alpha = 0.3;
    std::uint64_t seed = 0;
    int max_local_search_passes = 1000;
    CostKind cost_kind = CostKind::Combined;
    double k_c = 1000.0;
    int threads = 0;  // 0 = hardware concurrency
};

struct SolveResult {
    Plan best_plan;
    double best_cost = 0.0;
    std::vector<double> per_restart_costs;
    double wall_time_s = 0.0;
    bool feasible = false;
};

namespace detail {

/// Working view of a problem with per-segment geometry precomputed.
class Workspace {
  public:
    explicit Workspace(const Problem& prob) : prob_(prob) {
        const std::size_t n = prob.segments.size();
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), 0);
        std::sort(order_.begin(), order_.end(), [&](std::size_t u, std::size_t v) {
            return prob.segments[u].id < prob.segments[v].id;
        });
        insp_cost_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            insp_cost_[i] = prob.segments[i].length() / prob.v_insp *
                            prob.energy.rate_insp;
            index_[prob.segments[i].id] = i;
        }
        budgets_.reserve(prob.vehicles.size());
        for (const auto& v : prob.vehicles) budgets_.push_back(v.budget);
    }

    const Problem& prob() const { return prob_; }
    std::span<const double> budgets() const { return budgets_; }
    std::span<const std::size_t> id_order() const { return order_; }

    double transit_cost(const Point& p, const Point& q) const {
        return distance(p, q) / prob_.v_max * prob_.energy.rate_transit;
    }

    double inspection_cost(std::size_t seg_idx) const {
        return insp_cost_[seg_idx];
    }

    const Point& entry(std::size_t seg_idx, Direction d) const {
        return entry_point(prob_.segments[seg_idx], d);
    }
    const Point& exit(std::size_t seg_idx, Direction d) const {
        return exit_point(prob_.segments[seg_idx], d);
    }

    std::size_t index_of(int segment_id) const {
        const auto it = index_.find(segment_id);
        if (it == index_.end())
            throw std::invalid_argument("unknown segment id");
        return it->second;
    }

    /// Battery cost of one vehicle's visit sequence, start to depot.
    double seq_cost(std::size_t vehicle, std::span<const Visit> visits) const {
        const Point* at = &prob_.vehicles[vehicle].start;
        double cost = 0.0;
        for (const Visit& v : visits) {
            const std::size_t si = index_of(v.segment_id);
            cost += transit_cost(*at, entry(si, v.direction));
            cost += insp_cost_[si];
            at = &exit(si, v.direction);
        }
        cost += transit_cost(*at, prob_.depot);
        return cost;
    }

  private:
    const Problem& prob_;
    std::vector<std::size_t> order_;  // segment indices sorted by id
    std::vector<double> insp_cost_;
    std::vector<double> budgets_;
    std::unordered_map<int, std::size_t> index_;
};

struct Insertion {
    std::size_t seg_idx;
    Direction dir;
    std::size_t tour;
    std::size_t pos;
    double increase;
};

}  // namespace detail

/// GRASP construction phase: repeated cheapest-insertion with a restricted
/// candidate list. Every unvisited segment is tried in both directions at
/// every position of every tour; candidates whose cost-function increase is
/// within rcl_alpha of the best are eligible and one is drawn at random.
/// With rcl_alpha = 0 the construction is fully greedy and deterministic,
/// breaking ties by lowest (segment id, tour, position).
inline Plan construct(const Problem& prob, CostKind kind, double k_c,
                      double rcl_alpha, Rng& rng) {
    const detail::Workspace ws(prob);
    const std::size_t n = prob.segments.size();
    const std::size_t nv = prob.vehicles.size();
    if (nv == 0) throw std::invalid_argument("construct: no vehicles");

    std::vector<std::vector<Visit>> tours(nv);
    std::vector<double> tour_costs(nv);
    for (std::size_t v = 0; v < nv; ++v) tour_costs[v] = ws.seq_cost(v, {});
    std::vector<bool> placed(n, false);

    std::vector<detail::Insertion> candidates;
    std::vector<double> scratch_costs(nv);
    for (std::size_t step = 0; step < n; ++step) {
        const double cur = evaluate(kind, tour_costs, ws.budgets(), k_c);
        candidates.clear();
        double best_inc = std::numeric_limits<double>::infinity();
        double worst_inc = -std::numeric_limits<double>::infinity();

        for (std::size_t si : ws.id_order()) {
            if (placed[si]) continue;
            for (Direction d : {Direction::Forward, Direction::Reverse}) {
                for (std::size_t t = 0; t < nv; ++t) {
                    const auto& visits = tours[t];
                    for (std::size_t p = 0; p <= visits.size(); ++p) {
                        const Point& prev =
                            p == 0 ? prob.vehicles[t].start
                                   : ws.exit(ws.index_of(visits[p - 1].segment_id),
                                             visits[p - 1].direction);
                        const Point& next =
                            p == visits.size()
                                ? prob.depot
                                : ws.entry(ws.index_of(visits[p].segment_id),
                                           visits[p].direction);
                        const double delta = ws.transit_cost(prev, ws.entry(si, d)) +
                                             ws.inspection_cost(si) +
                                             ws.transit_cost(ws.exit(si, d), next) -
                                             ws.transit_cost(prev, next);
                        scratch_costs = tour_costs;
                        scratch_costs[t] += delta;
                        const double inc =
                            evaluate(kind, scratch_costs, ws.budgets(), k_c) - cur;
                        candidates.push_back({si, d, t, p, inc});
                        best_inc = std::min(best_inc, inc);
                        worst_inc = std::max(worst_inc, inc);
                    }
                }
            }
        }

        const detail::Insertion* chosen = nullptr;
        if (rcl_alpha <= 0.0) {
            for (const auto& c : candidates)
                if (c.increase == best_inc) { chosen = &c; break; }
        } else {
            const double threshold =
                best_inc + rcl_alpha * (worst_inc - best_inc);
            std::size_t n_rcl = 0;
            for (const auto& c : candidates)
                if (c.increase <= threshold) ++n_rcl;
            std::uint64_t pick = rng.bounded(n_rcl);
            for (const auto& c : candidates) {
                if (c.increase <= threshold && pick-- == 0) { chosen = &c; break; }
            }
        }
        assert(chosen != nullptr);

        auto& visits = tours[chosen->tour];
        visits.insert(visits.begin() + static_cast<std::ptrdiff_t>(chosen->pos),
                      {prob.segments[chosen->seg_idx].id, chosen->dir});
        placed[chosen->seg_idx] = true;
        tour_costs[chosen->tour] = ws.seq_cost(chosen->tour, tours[chosen->tour]);
#ifndef NDEBUG
        // Audit: the incremental delta must agree with full recomputation.
        {
            std::vector<double> audit(nv);
            for (std::size_t v = 0; v < nv; ++v)
                audit[v] = ws.seq_cost(v, tours[v]);
            for (std::size_t v = 0; v < nv; ++v)
                assert(std::abs(audit[v] - tour_costs[v]) < 1e-6);
        }
#endif
    }

    Plan plan;
    plan.tours.resize(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        plan.tours[v].vehicle_id = prob.vehicles[v].vehicle_id;
        plan.tours[v].start = prob.vehicles[v].start;
        plan.tours[v].visits = std::move(tours[v]);
    }
    return plan;
}

/// Best-improvement descent over four neighborhoods: direction flip,
/// relocate, inter-tour swap, and intra-tour 2-opt (sub-sequence reversal
/// with direction flips). Coverage is preserved by every move; the
/// returned plan never costs more than the input.
inline Plan local_search(const Problem& prob, Plan plan, CostKind kind,
                         double k_c, int max_passes = 1000) {
    const detail::Workspace ws(prob);
    const std::size_t nv = plan.tours.size();
    if (nv != prob.vehicles.size())
        throw std::invalid_argument("local_search: tour count mismatch");

    std::vector<std::vector<Visit>> tours(nv);
    for (std::size_t v = 0; v < nv; ++v) tours[v] = plan.tours[v].visits;
    std::vector<double> tour_costs(nv);
    for (std::size_t v = 0; v < nv; ++v)
        tour_costs[v] = ws.seq_cost(v, tours[v]);

    std::vector<Visit> scratch_a, scratch_b;
    std::vector<double> cand_costs(nv);

    const auto plan_cost = [&](std::span<const double> costs) {
        return evaluate(kind, costs, ws.budgets(), k_c);
    };

    double cur = plan_cost(tour_costs);
    for (int pass = 0; pass < max_passes; ++pass) {
        double best_cost = cur;
        // best move: kind 0 flip, 1 relocate, 2 swap, 3 two-opt
        int bm = -1;
        std::size_t bt1 = 0, bi = 0, bt2 = 0, bj = 0;

        const auto try_move = [&](int mk, std::size_t t1, std::size_t i,
                                  std::size_t t2, std::size_t j,
                                  std::span<const double> costs) {
            const double c = plan_cost(costs);
            if (c < best_cost) {
                best_cost = c;
                bm = mk;
                bt1 = t1; bi = i; bt2 = t2; bj = j;
            }
        };

        for (std::size_t t = 0; t < nv; ++t) {
            const auto& vis = tours[t];
            // (a) direction flips
            for (std::size_t i = 0; i < vis.size(); ++i) {
                scratch_a = vis;
                scratch_a[i].direction = scratch_a[i].direction == Direction::Forward
                                             ? Direction::Reverse
                                             : Direction::Forward;
                cand_costs = tour_costs;
                cand_costs[t] = ws.seq_cost(t, scratch_a);
                try_move(0, t, i, t, i, cand_costs);
            }
            // (d) intra-tour 2-opt
            for (std::size_t i = 0; i + 1 < vis.size(); ++i) {
                for (std::size_t j = i + 1; j < vis.size(); ++j) {
                    scratch_a = vis;
                    std::reverse(scratch_a.begin() + static_cast<std::ptrdiff_t>(i),
                                 scratch_a.begin() + static_cast<std::ptrdiff_t>(j + 1));
                    for (std::size_t k = i; k <= j; ++k)
                        scratch_a[k].direction =
                            scratch_a[k].direction == Direction::Forward
                                ? Direction::Reverse
                                : Direction::Forward;
                    cand_costs = tour_costs;
                    cand_costs[t] = ws.seq_cost(t, scratch_a);
                    try_move(3, t, i, t, j, cand_costs);
                }
            }
        }
        // (b) relocate
        for (std::size_t t1 = 0; t1 < nv; ++t1) {
            for (std::size_t i = 0; i < tours[t1].size(); ++i) {
                for (std::size_t t2 = 0; t2 < nv; ++t2) {
                    const std::size_t len2 =
                        t2 == t1 ? tours[t2].size() - 1 : tours[t2].size();
                    for (std::size_t j = 0; j <= len2; ++j) {
                        if (t1 == t2 && j == i) continue;
                        scratch_a = tours[t1];
                        const Visit moved = scratch_a[i];
                        scratch_a.erase(scratch_a.begin() +
                                        static_cast<std::ptrdiff_t>(i));
                        cand_costs = tour_costs;
                        if (t1 == t2) {
                            scratch_a.insert(scratch_a.begin() +
                                                 static_cast<std::ptrdiff_t>(j),
                                             moved);
                            cand_costs[t1] = ws.seq_cost(t1, scratch_a);
                        } else {
                            scratch_b = tours[t2];
                            scratch_b.insert(scratch_b.begin() +
                                                 static_cast<std::ptrdiff_t>(j),
                                             moved);
                            cand_costs[t1] = ws.seq_cost(t1, scratch_a);
                            cand_costs[t2] = ws.seq_cost(t2, scratch_b);
                        }
                        try_move(1, t1, i, t2, j, cand_costs);
                    }
                }
            }
        }
        // (c) inter-tour swap
        for (std::size_t t1 = 0; t1 < nv; ++t1) {
            for (std::size_t t2 = t1 + 1; t2 < nv; ++t2) {
                for (std::size_t i = 0; i < tours[t1].size(); ++i) {
                    for (std::size_t j = 0; j < tours[t2].size(); ++j) {
                        scratch_a = tours[t1];
                        scratch_b = tours[t2];
                        std::swap(scratch_a[i], scratch_b[j]);
                        cand_costs = tour_costs;
                        cand_costs[t1] = ws.seq_cost(t1, scratch_a);
                        cand_costs[t2] = ws.seq_cost(t2, scratch_b);
                        try_move(2, t1, i, t2, j, cand_costs);
                    }
                }
            }
        }

        if (bm < 0) break;  // local optimum

        // Apply the best move.
        switch (bm) {
            case 0: {
                auto& v = tours[bt1][bi];
                v.direction = v.direction == Direction::Forward
                                  ? Direction::Reverse
                                  : Direction::Forward;
                break;
            }
            case 1: {
                const Visit moved = tours[bt1][bi];
                tours[bt1].erase(tours[bt1].begin() +
                                 static_cast<std::ptrdiff_t>(bi));
                tours[bt2].insert(tours[bt2].begin() +
                                      static_cast<std::ptrdiff_t>(bj),
                                  moved);
                break;
            }
            case 2:
                std::swap(tours[bt1][bi], tours[bt2][bj]);
                break;
            case 3: {
                auto& vis = tours[bt1];
                std::reverse(vis.begin() + static_cast<std::ptrdiff_t>(bi),
                             vis.begin() + static_cast<std::ptrdiff_t>(bj + 1));
                for (std::size_t k = bi; k <= bj; ++k)
                    vis[k].direction = vis[k].direction == Direction::Forward
                                           ? Direction::Reverse
                                           : Direction::Forward;
                break;
            }
        }
        tour_costs[bt1] = ws.seq_cost(bt1, tours[bt1]);
        tour_costs[bt2] = ws.seq_cost(bt2, tours[bt2]);
        cur = best_cost;
#ifndef NDEBUG
        {
            std::size_t total = 0;
            for (const auto& t : tours) total += t.size();
            assert(total == prob.segments.size());
        }
#endif
    }

    for (std::size_t v = 0; v < nv; ++v) plan.tours[v].visits = tours[v];
    return plan;
}

/// Multi-restart GRASP. Restarts run on independent RNG streams derived
/// from (seed, restart index), so the result is identical regardless of
/// thread count or scheduling.
inline SolveResult solve(const Problem& prob, const SolverConfig& cfg) {
    if (cfg.restarts < 1)
        throw std::invalid_argument("solve: restarts must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    const detail::Workspace ws(prob);
    SolveResult result;
    result.per_restart_costs.assign(cfg.restarts, 0.0);

    struct ThreadBest {
        double cost = std::numeric_limits<double>::infinity();
        int restart = -1;
        Plan plan;
    };

    unsigned n_threads = cfg.threads > 0
                             ? static_cast<unsigned>(cfg.threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads,
                                   static_cast<unsigned>(cfg.restarts));

    std::vector<ThreadBest> bests(n_threads);
    const auto worker = [&](unsigned w) {
        for (int r = static_cast<int>(w); r < cfg.restarts;
             r += static_cast<int>(n_threads)) {
            Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            Plan plan = construct(prob, cfg.cost_kind, cfg.k_c, cfg.rcl_alpha, rng);
            plan = local_search(prob, std::move(plan), cfg.cost_kind, cfg.k_c,
                                cfg.max_local_search_passes);
            std::vector<double> costs(prob.vehicles.size());
            for (std::size_t v = 0; v < costs.size(); ++v)
                costs[v] = ws.seq_cost(v, plan.tours[v].visits);
            const double cost = evaluate(cfg.cost_kind, costs, ws.budgets(), cfg.k_c);
            result.per_restart_costs[static_cast<std::size_t>(r)] = cost;
            auto& tb = bests[w];
            if (cost < tb.cost || (cost == tb.cost && r < tb.restart)) {
                tb.cost = cost;
                tb.restart = r;
                tb.plan = std::move(plan);
            }
        }
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }

    const ThreadBest* best = &bests[0];
    for (const auto& tb : bests) {
        if (tb.restart < 0) continue;
        if (best->restart < 0 || tb.cost < best->cost ||
            (tb.cost == best->cost && tb.restart < best->restart))
            best = &tb;
    }
    result.best_plan = best->plan;
    result.best_cost = best->cost;

    result.feasible = true;
    for (std::size_t v = 0; v < prob.vehicles.size(); ++v) {
        const double c = ws.seq_cost(v, result.best_plan.tours[v].visits);
        if (c > prob.vehicles[v].budget) result.feasible = false;
    }

    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return result;
}

inline SolveResult solve(const Instance& inst, const SolverConfig& cfg) {
    return solve(as_problem(inst), cfg);
}

}  // namespace mstsp
