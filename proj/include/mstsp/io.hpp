#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mstsp/costs.hpp"
#include "mstsp/failure.hpp"
#include "mstsp/grasp.hpp"
#include "mstsp/model.hpp"
#include "mstsp/timeline.hpp"

namespace mstsp {

inline constexpr int kInstanceFormatVersion = 1;
inline constexpr int kPlanFormatVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

using json = nlohmann::json;

inline std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

inline json to_json(const Point& p) { return json::array({p.x, p.y, p.z}); }

inline Point point_from_json(const json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

inline json to_json(const Instance& inst) {
    json j;
    j["format_version"] = kInstanceFormatVersion;
    j["depot"] = to_json(inst.depot);
    json segs = json::array();
    for (const auto& s : inst.segments)
        segs.push_back({{"id", s.id}, {"a", to_json(s.a)}, {"b", to_json(s.b)}});
    j["segments"] = segs;
    j["n_vehicles"] = inst.n_vehicles;
    j["budget_percent"] = inst.budget_percent;
    j["v_max"] = inst.v_max;
    j["v_insp"] = inst.v_insp;
    j["energy"] = {{"rate_transit", inst.energy.rate_transit},
                   {"rate_insp", inst.energy.rate_insp}};
    return j;
}

inline Instance instance_from_json(const json& j) {
    if (j.at("format_version").get<int>() != kInstanceFormatVersion)
        throw std::runtime_error("unsupported instance format_version");
    Instance inst;
    inst.depot = point_from_json(j.at("depot"));
    for (const auto& js : j.at("segments"))
        inst.segments.push_back({js.at("id").get<int>(),
                                 point_from_json(js.at("a")),
                                 point_from_json(js.at("b"))});
    inst.n_vehicles = j.at("n_vehicles").get<int>();
    inst.budget_percent = j.at("budget_percent").get<double>();
    inst.v_max = j.at("v_max").get<double>();
    inst.v_insp = j.at("v_insp").get<double>();
    inst.energy.rate_transit = j.at("energy").at("rate_transit").get<double>();
    inst.energy.rate_insp = j.at("energy").at("rate_insp").get<double>();
    return inst;
}

inline std::string instance_hash(const Instance& inst) {
    return fnv1a64_hex(to_json(inst).dump());
}

inline json to_json(const Plan& plan, const Instance& inst,
                    const std::string& inst_hash, bool feasible,
                    double plan_cost_value, const std::string& cost_kind) {
    json j;
    j["format_version"] = kPlanFormatVersion;
    j["instance_hash"] = inst_hash;
    j["cost_function"] = cost_kind;
    j["cost"] = plan_cost_value;
    j["feasible"] = feasible;
    json tours = json::array();
    for (const auto& tour : plan.tours) {
        const TourCost tc = tour_cost(inst, tour);
        json jt;
        jt["vehicle_id"] = tour.vehicle_id;
        jt["start"] = to_json(tour.start);
        json visits = json::array();
        for (const auto& v : tour.visits)
            visits.push_back(json::array(
                {v.segment_id,
                 v.direction == Direction::Forward ? "forward" : "reverse"}));
        jt["visits"] = visits;
        jt["battery_percent"] = tc.battery;
        jt["duration_s"] = tc.duration;
        tours.push_back(jt);
    }
    j["tours"] = tours;
    return j;
}

inline Plan plan_from_json(const json& j) {
    if (j.at("format_version").get<int>() != kPlanFormatVersion)
        throw std::runtime_error("unsupported plan format_version");
    Plan plan;
    for (const auto& jt : j.at("tours")) {
        Tour tour;
        tour.vehicle_id = jt.at("vehicle_id").get<int>();
        tour.start = point_from_json(jt.at("start"));
        for (const auto& jv : jt.at("visits")) {
            const std::string dir = jv.at(1).get<std::string>();
            if (dir != "forward" && dir != "reverse")
                throw std::runtime_error("bad visit direction: " + dir);
            tour.visits.push_back({jv.at(0).get<int>(),
                                   dir == "forward" ? Direction::Forward
                                                    : Direction::Reverse});
        }
        plan.tours.push_back(std::move(tour));
    }
    return plan;
}

inline json to_json(const WindowReport& rep) {
    json j;
    j["format_version"] = 1;
    j["t_star_s"] = rep.t_star;
    j["t_max_s"] = rep.t_max;
    j["window_percent"] = rep.window_percent;
    return j;
}

inline std::string window_samples_csv(const WindowReport& rep) {
    std::ostringstream os;
    os << "t,vehicle,success,replan_cost\n";
    for (const auto& s : rep.samples)
        os << s.t << ',' << s.vehicle << ',' << (s.success ? 1 : 0) << ','
           << s.replan_cost << '\n';
    return os.str();
}

/// Timeline samples for Fig.-style battery/position plots.
inline std::string timeline_csv(const MissionTimeline& tl) {
    std::ostringstream os;
    os << "t,vehicle,battery_percent,x,y,z\n";
    for (const auto& vt : tl.vehicles)
        for (const auto& ev : vt.events)
            os << ev.t << ',' << vt.vehicle_id << ',' << ev.battery << ','
               << ev.pos.x << ',' << ev.pos.y << ',' << ev.pos.z << '\n';
    return os.str();
}

inline std::string restart_trace_csv(const SolveResult& result) {
    std::ostringstream os;
    os << "restart,cost\n";
    for (std::size_t i = 0; i < result.per_restart_costs.size(); ++i)
        os << i << ',' << result.per_restart_costs[i] << '\n';
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace mstsp
