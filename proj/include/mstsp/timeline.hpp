#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "mstsp/model.hpp"

namespace mstsp {

enum class EventKind { Launch, InspectStart, InspectEnd, DepotArrival };

struct TimedEvent {
    EventKind kind;
    double t = 0.0;
    Point pos;
    double battery = 0.0;  // cumulative consumption, percent
    int segment_id = -1;   // inspect events only
};

enum class Phase { Transit, Inspecting, Idle };

/// Vehicle state sampled at one instant of the mission.
struct VehicleState {
    Phase phase = Phase::Idle;
    Point pos;
    double battery = 0.0;
    int segment_id = -1;          // segment being inspected, if any
    double inspect_end_t = 0.0;   // when the current inspection finishes
    Point inspect_end_pos;
    double inspect_end_battery = 0.0;
};

struct VehicleTimeline {
    int vehicle_id = 0;
    std::vector<TimedEvent> events;

    double finish_time() const { return events.back().t; }
    double final_battery() const { return events.back().battery; }

    /// Piecewise-linear interpolation of position and consumption.
    VehicleState state_at(double t) const {
        VehicleState st;
        const auto& ev = events;
        if (t >= ev.back().t) {
            st.phase = Phase::Idle;
            st.pos = ev.back().pos;
            st.battery = ev.back().battery;
            return st;
        }
        std::size_t k = 0;
        while (k + 1 < ev.size() && ev[k + 1].t <= t) ++k;
        // t in [ev[k].t, ev[k+1].t)
        const TimedEvent& lo = ev[k];
        const TimedEvent& hi = ev[k + 1];
        const double span = hi.t - lo.t;
        const double f = span > 0.0 ? (t - lo.t) / span : 0.0;
        st.pos = {lo.pos.x + f * (hi.pos.x - lo.pos.x),
                  lo.pos.y + f * (hi.pos.y - lo.pos.y),
                  lo.pos.z + f * (hi.pos.z - lo.pos.z)};
        st.battery = lo.battery + f * (hi.battery - lo.battery);
        if (hi.kind == EventKind::InspectEnd) {
            st.phase = Phase::Inspecting;
            st.segment_id = hi.segment_id;
            st.inspect_end_t = hi.t;
            st.inspect_end_pos = hi.pos;
            st.inspect_end_battery = hi.battery;
        } else {
            st.phase = Phase::Transit;
        }
        return st;
    }
};

struct MissionTimeline {
    std::vector<VehicleTimeline> vehicles;
    double t_max = 0.0;  // maximal route duration across vehicles
};

/// Expands a plan into per-vehicle timed event trajectories. All vehicles
/// launch at t = 0; battery drains at the transit rate between segments and
/// at the inspection rate along them; finished vehicles idle at the depot.
inline MissionTimeline build_timeline(const Instance& inst, const Plan& plan) {
    const auto rep = validate_plan(inst, plan);
    if (!rep.feasible())
        throw std::invalid_argument("build_timeline: plan is infeasible: " +
                                    (rep.violations.empty()
                                         ? std::string()
                                         : rep.violations.front().message));
    MissionTimeline tl;
    for (const Tour& tour : plan.tours) {
        VehicleTimeline vt;
        vt.vehicle_id = tour.vehicle_id;
        double t = 0.0;
        double battery = 0.0;
        Point at = tour.start;
        vt.events.push_back({EventKind::Launch, 0.0, at, 0.0, -1});
        for (const Visit& v : tour.visits) {
            const Segment* seg = inst.find_segment(v.segment_id);
            const Point& in = detail::entry_point(*seg, v.direction);
            const Point& out = detail::exit_point(*seg, v.direction);
            const double t_tr = leg_time(at, in, inst.v_max);
            t += t_tr;
            battery += t_tr * inst.energy.rate_transit;
            vt.events.push_back(
                {EventKind::InspectStart, t, in, battery, seg->id});
            const double t_in = leg_time(in, out, inst.v_insp);
            t += t_in;
            battery += t_in * inst.energy.rate_insp;
            vt.events.push_back(
                {EventKind::InspectEnd, t, out, battery, seg->id});
            at = out;
        }
        const double t_back = leg_time(at, inst.depot, inst.v_max);
        t += t_back;
        battery += t_back * inst.energy.rate_transit;
        vt.events.push_back(
            {EventKind::DepotArrival, t, inst.depot, battery, -1});
        tl.t_max = std::max(tl.t_max, t);
        tl.vehicles.push_back(std::move(vt));
    }
    return tl;
}

}  // namespace mstsp
