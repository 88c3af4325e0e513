#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mstsp/costs.hpp"
#include "mstsp/model.hpp"

namespace mstsp {

struct OracleResult {
    Plan optimal_plan;
    double optimal_cost = 0.0;
    std::uint64_t enumerated_count = 0;
};

namespace detail {

/// Lexicographic plan encoding used for deterministic tie-breaking.
inline std::vector<int> encode_plan(const Plan& plan) {
    std::vector<int> code;
    for (const auto& tour : plan.tours) {
        code.push_back(static_cast<int>(tour.visits.size()));
        for (const auto& v : tour.visits) {
            code.push_back(v.segment_id);
            code.push_back(v.direction == Direction::Forward ? 0 : 1);
        }
    }
    return code;
}

}  // namespace detail

/// Exhaustive MS-TSP solver for tiny instances: every assignment of
/// segments to vehicles, every visit order, every direction choice.
/// Serves as ground truth for the heuristic solver.
inline OracleResult exact_solve(const Problem& prob, CostKind kind,
                                double k_c = 1000.0) {
    const int n = static_cast<int>(prob.segments.size());
    const int nv = static_cast<int>(prob.vehicles.size());
    if (n > 8 || nv > 3)
        throw std::invalid_argument(
            "exact_solve: instance above size guard (n_seg <= 8, "
            "n_vehicles <= 3)");
    if (nv < 1) throw std::invalid_argument("exact_solve: no vehicles");

    std::vector<double> budgets;
    for (const auto& v : prob.vehicles) budgets.push_back(v.budget);

    // Permutation of all segments + cut points splitting it into one
    // consecutive block per vehicle + a direction bit per visit. Each
    // plan is enumerated exactly once this way.
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    OracleResult best;
    bool have_best = false;
    std::vector<int> best_code;
    std::vector<double> tour_costs(nv);
    Plan plan;
    plan.tours.resize(nv);
    for (int v = 0; v < nv; ++v) {
        plan.tours[v].vehicle_id = prob.vehicles[v].vehicle_id;
        plan.tours[v].start = prob.vehicles[v].start;
    }

    std::vector<int> cuts(nv + 1);  // cuts[v]..cuts[v+1] is vehicle v's block
    const auto consider = [&]() {
        ++best.enumerated_count;
        for (int v = 0; v < nv; ++v)
            tour_costs[v] = tour_cost(prob, plan.tours[v]).battery;
        const double cost = evaluate(kind, tour_costs, budgets, k_c);
        if (!have_best || cost < best.optimal_cost) {
            have_best = true;
            best.optimal_cost = cost;
            best.optimal_plan = plan;
            best_code = detail::encode_plan(plan);
        } else if (cost == best.optimal_cost) {
            auto code = detail::encode_plan(plan);
            if (code < best_code) {
                best.optimal_plan = plan;
                best_code = std::move(code);
            }
        }
    };

    // Enumerate compositions of n into nv parts recursively.
    const auto for_each_cut = [&](auto&& self, int v, int from) -> void {
        if (v == nv - 1) {
            cuts[v] = from;
            cuts[nv] = n;
            for (int u = 0; u < nv; ++u) {
                auto& visits = plan.tours[u].visits;
                visits.clear();
                for (int i = cuts[u]; i < cuts[u + 1]; ++i)
                    visits.push_back({prob.segments[perm[i]].id,
                                      Direction::Forward});
            }
            for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
                for (int u = 0; u < nv; ++u) {
                    auto& visits = plan.tours[u].visits;
                    for (int i = cuts[u]; i < cuts[u + 1]; ++i)
                        visits[i - cuts[u]].direction =
                            (mask >> i) & 1 ? Direction::Reverse
                                            : Direction::Forward;
                }
                consider();
            }
            return;
        }
        cuts[v] = from;
        for (int to = from; to <= n; ++to) self(self, v + 1, to);
    };

    do {
        for_each_cut(for_each_cut, 0, 0);
    } while (std::next_permutation(perm.begin(), perm.end()));

    return best;
}

inline OracleResult exact_solve(const Instance& inst,
                                const CostFunction& cost) {
    Problem prob = as_problem(inst);
    for (auto& v : prob.vehicles) v.budget = cost.c_max;
    return exact_solve(prob, cost.kind, cost.k_c);
}

}  // namespace mstsp
