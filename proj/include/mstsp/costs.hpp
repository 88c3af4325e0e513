#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>

namespace mstsp {

enum class CostKind { MinMax, CMinSum, Combined };

inline std::string to_string(CostKind k) {
    switch (k) {
        case CostKind::MinMax: return "minmax";
        case CostKind::CMinSum: return "cminsum";
        case CostKind::Combined: return "combined";
    }
    return "?";
}

inline CostKind parse_cost_kind(const std::string& s) {
    if (s == "minmax") return CostKind::MinMax;
    if (s == "cminsum") return CostKind::CMinSum;
    if (s == "combined") return CostKind::Combined;
    throw std::invalid_argument("unknown cost function: " + s);
}

struct CostFunction {
    CostKind kind = CostKind::Combined;
    double k_c = 1000.0;
    double c_max = 100.0;
};

/// Maximum tour cost over the plan.
inline double cost_minmax(std::span<const double> tour_costs) {
    if (tour_costs.empty())
        throw std::invalid_argument("cost_minmax: empty tour-cost list");
    return *std::max_element(tour_costs.begin(), tour_costs.end());
}

/// Soft-constrained tour cost: identity while c <= c_max, else the
/// overshoot is amplified by k_c.
inline double cost_constrained(double c, double c_max, double k_c) {
    return c <= c_max ? c : c + (c - c_max) * k_c;
}

inline double cost_cminsum(std::span<const double> tour_costs, double c_max,
                           double k_c) {
    if (tour_costs.empty())
        throw std::invalid_argument("cost_cminsum: empty tour-cost list");
    double sum = 0.0;
    for (double c : tour_costs) sum += cost_constrained(c, c_max, k_c);
    return sum;
}

/// Per-tour budget variant, used by re-plans where survivors carry
/// different residual budgets.
inline double cost_cminsum(std::span<const double> tour_costs,
                           std::span<const double> budgets, double k_c) {
    if (tour_costs.empty())
        throw std::invalid_argument("cost_cminsum: empty tour-cost list");
    if (budgets.size() != tour_costs.size())
        throw std::invalid_argument("cost_cminsum: budget list size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < tour_costs.size(); ++i)
        sum += cost_constrained(tour_costs[i], budgets[i], k_c);
    return sum;
}

inline double cost_combined(std::span<const double> tour_costs, double c_max,
                            double k_c, int n_t) {
    if (n_t != static_cast<int>(tour_costs.size()))
        throw std::invalid_argument("cost_combined: n_t mismatch");
    return cost_cminsum(tour_costs, c_max, k_c) +
           cost_minmax(tour_costs) / static_cast<double>(n_t);
}

inline double evaluate(const CostFunction& f,
                       std::span<const double> tour_costs) {
    switch (f.kind) {
        case CostKind::MinMax:
            return cost_minmax(tour_costs);
        case CostKind::CMinSum:
            return cost_cminsum(tour_costs, f.c_max, f.k_c);
        case CostKind::Combined:
            return cost_combined(tour_costs, f.c_max, f.k_c,
                                 static_cast<int>(tour_costs.size()));
    }
    throw std::logic_error("evaluate: bad cost kind");
}

/// Per-tour budget evaluation used inside the solver.
inline double evaluate(CostKind kind, std::span<const double> tour_costs,
                       std::span<const double> budgets, double k_c) {
    switch (kind) {
        case CostKind::MinMax:
            return cost_minmax(tour_costs);
        case CostKind::CMinSum:
            return cost_cminsum(tour_costs, budgets, k_c);
        case CostKind::Combined:
            return cost_cminsum(tour_costs, budgets, k_c) +
                   cost_minmax(tour_costs) /
                       static_cast<double>(tour_costs.size());
    }
    throw std::logic_error("evaluate: bad cost kind");
}

}  // namespace mstsp
