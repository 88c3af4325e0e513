#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mstsp {

struct Point {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline bool operator==(const Point& p, const Point& q) {
    return p.x == q.x && p.y == q.y && p.z == q.z;
}

inline double distance(const Point& p, const Point& q) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double dz = p.z - q.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Straight-line flight time between two points at constant speed.
inline double leg_time(const Point& from, const Point& to, double speed) {
    if (!(speed > 0.0))
        throw std::invalid_argument("leg_time: speed must be positive");
    return distance(from, to) / speed;
}

/// Power line span between two pylons; traversable in either direction.
struct Segment {
    int id = 0;
    Point a;
    Point b;

    double length() const { return distance(a, b); }
};

/// Two-rate battery consumption model: one rate while transiting at v_max,
/// one while inspecting at v_insp. Units are battery-percent per second.
struct EnergyModel {
    // Defaults calibrated so one full battery sustains ~420 s of mixed
    // flight, roughly 700 m split between transit and inspection legs.
    double rate_transit = 100.0 / 420.0;
    double rate_insp = 100.0 / 420.0;
};

struct Instance {
    Point depot;
    std::vector<Segment> segments;
    int n_vehicles = 1;
    double budget_percent = 100.0;  // C_max per vehicle
    double v_max = 5.0;
    double v_insp = 1.0;
    EnergyModel energy;

    const Segment* find_segment(int id) const {
        for (const auto& s : segments)
            if (s.id == id) return &s;
        return nullptr;
    }
};

enum class Direction { Forward, Reverse };  // Forward = a->b

struct Visit {
    int segment_id = 0;
    Direction direction = Direction::Forward;
};

inline bool operator==(const Visit& u, const Visit& v) {
    return u.segment_id == v.segment_id && u.direction == v.direction;
}

/// Ordered directed segment visits for one vehicle. The tour starts at
/// `start` (the depot for initial plans, the vehicle's commit position for
/// re-plans) and always ends at the depot.
struct Tour {
    int vehicle_id = 0;
    Point start;
    std::vector<Visit> visits;
};

struct Plan {
    std::vector<Tour> tours;
};

struct TourCost {
    double battery = 0.0;   // percent
    double duration = 0.0;  // seconds
};

/// One vehicle's start state in a routing problem: where its tour begins
/// and how much battery it may spend.
struct VehicleStart {
    int vehicle_id = 0;
    Point start;
    double budget = 0.0;
};

/// Self-contained routing problem: cover `segments` with one tour per
/// vehicle, each tour from its vehicle's start point to the depot within
/// that vehicle's budget. Initial plans and re-plans both take this form.
struct Problem {
    Point depot;
    std::vector<Segment> segments;
    std::vector<VehicleStart> vehicles;
    double v_max = 5.0;
    double v_insp = 1.0;
    EnergyModel energy;

    const Segment* find_segment(int id) const {
        for (const auto& s : segments)
            if (s.id == id) return &s;
        return nullptr;
    }
};

inline Problem as_problem(const Instance& inst) {
    Problem p;
    p.depot = inst.depot;
    p.segments = inst.segments;
    p.vehicles.reserve(inst.n_vehicles);
    for (int v = 0; v < inst.n_vehicles; ++v)
        p.vehicles.push_back({v, inst.depot, inst.budget_percent});
    p.v_max = inst.v_max;
    p.v_insp = inst.v_insp;
    p.energy = inst.energy;
    return p;
}

namespace detail {

inline const Point& entry_point(const Segment& s, Direction d) {
    return d == Direction::Forward ? s.a : s.b;
}

inline const Point& exit_point(const Segment& s, Direction d) {
    return d == Direction::Forward ? s.b : s.a;
}

template <typename FindSeg>
TourCost tour_cost_impl(const Tour& tour, const Point& depot, double v_max,
                        double v_insp, const EnergyModel& energy,
                        FindSeg&& find) {
    TourCost out;
    Point at = tour.start;
    for (const Visit& v : tour.visits) {
        const Segment* seg = find(v.segment_id);
        if (!seg)
            throw std::invalid_argument("tour_cost: unknown segment id " +
                                        std::to_string(v.segment_id));
        const Point& in = entry_point(*seg, v.direction);
        const Point& out_pt = exit_point(*seg, v.direction);
        const double t_transit = leg_time(at, in, v_max);
        const double t_insp = leg_time(in, out_pt, v_insp);
        out.duration += t_transit + t_insp;
        out.battery += t_transit * energy.rate_transit + t_insp * energy.rate_insp;
        at = out_pt;
    }
    const double t_back = leg_time(at, depot, v_max);
    out.duration += t_back;
    out.battery += t_back * energy.rate_transit;
    return out;
}

}  // namespace detail

inline TourCost tour_cost(const Instance& inst, const Tour& tour) {
    return detail::tour_cost_impl(tour, inst.depot, inst.v_max, inst.v_insp,
                                  inst.energy,
                                  [&](int id) { return inst.find_segment(id); });
}

inline TourCost tour_cost(const Problem& prob, const Tour& tour) {
    return detail::tour_cost_impl(tour, prob.depot, prob.v_max, prob.v_insp,
                                  prob.energy,
                                  [&](int id) { return prob.find_segment(id); });
}

enum class ViolationKind {
    MissingSegment,
    DuplicateSegment,
    UnknownSegment,
    BudgetExceeded,
    BadStart,
    TourCountMismatch,
};

struct Violation {
    ViolationKind kind;
    int id = -1;           // segment or vehicle id, depending on kind
    double overshoot = 0;  // budget violations only
    std::string message;
};

struct FeasibilityReport {
    std::vector<Violation> violations;
    bool feasible() const { return violations.empty(); }
};

/// Checks coverage-exactly-once, per-tour budgets, and tour endpoints.
/// Violations are data, not errors; an empty list means feasible.
inline FeasibilityReport validate_plan(const Problem& prob, const Plan& plan,
                                       bool check_starts = true) {
    FeasibilityReport rep;
    if (plan.tours.size() != prob.vehicles.size()) {
        rep.violations.push_back({ViolationKind::TourCountMismatch,
                                  static_cast<int>(plan.tours.size()), 0.0,
                                  "plan has " + std::to_string(plan.tours.size()) +
                                      " tours for " +
                                      std::to_string(prob.vehicles.size()) +
                                      " vehicles"});
    }
    std::unordered_map<int, int> visit_count;
    for (const auto& tour : plan.tours) {
        for (const auto& v : tour.visits) {
            if (!prob.find_segment(v.segment_id)) {
                rep.violations.push_back({ViolationKind::UnknownSegment,
                                          v.segment_id, 0.0,
                                          "visit references unknown segment " +
                                              std::to_string(v.segment_id)});
            } else {
                ++visit_count[v.segment_id];
            }
        }
    }
    for (const auto& s : prob.segments) {
        const auto it = visit_count.find(s.id);
        const int n = it == visit_count.end() ? 0 : it->second;
        if (n == 0)
            rep.violations.push_back({ViolationKind::MissingSegment, s.id, 0.0,
                                      "segment " + std::to_string(s.id) +
                                          " not visited"});
        else if (n > 1)
            rep.violations.push_back({ViolationKind::DuplicateSegment, s.id, 0.0,
                                      "segment " + std::to_string(s.id) +
                                          " visited " + std::to_string(n) +
                                          " times"});
    }
    const std::size_t n_tours =
        std::min(plan.tours.size(), prob.vehicles.size());
    for (std::size_t i = 0; i < n_tours; ++i) {
        const auto& tour = plan.tours[i];
        const auto& veh = prob.vehicles[i];
        if (check_starts && !(tour.start == veh.start)) {
            rep.violations.push_back({ViolationKind::BadStart, veh.vehicle_id,
                                      0.0,
                                      "tour for vehicle " +
                                          std::to_string(veh.vehicle_id) +
                                          " starts away from its start point"});
            continue;
        }
        bool ids_ok = true;
        for (const auto& v : tour.visits)
            if (!prob.find_segment(v.segment_id)) ids_ok = false;
        if (!ids_ok) continue;
        const TourCost tc = tour_cost(prob, tour);
        if (tc.battery > veh.budget) {
            rep.violations.push_back({ViolationKind::BudgetExceeded,
                                      veh.vehicle_id, tc.battery - veh.budget,
                                      "vehicle " + std::to_string(veh.vehicle_id) +
                                          " exceeds budget by " +
                                          std::to_string(tc.battery - veh.budget) +
                                          " %"});
        }
    }
    return rep;
}

inline FeasibilityReport validate_plan(const Instance& inst, const Plan& plan) {
    return validate_plan(as_problem(inst), plan);
}

}  // namespace mstsp
