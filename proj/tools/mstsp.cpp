// Command-line front end: instance generation, planning, failure
// simulation, re-plan window computation, and the exact oracle.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mstsp/costs.hpp"
#include "mstsp/failure.hpp"
#include "mstsp/generate.hpp"
#include "mstsp/grasp.hpp"
#include "mstsp/io.hpp"
#include "mstsp/model.hpp"
#include "mstsp/oracle.hpp"
#include "mstsp/timeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;

struct CommonOpts {
    std::uint64_t seed = 0;
    std::string config_path;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--seed", c.seed, "base RNG seed");
    cmd->add_option("--config", c.config_path, "JSON config file");
    cmd->add_option("--out-dir", c.out_dir, "output directory");
}

struct SolverOpts {
    int restarts = 50;
    double rcl_alpha = 0.3;
    double k_c = 1000.0;
    std::string cost = "combined";
    int threads = 0;
};

void add_solver(CLI::App* cmd, SolverOpts& s) {
    cmd->add_option("--restarts", s.restarts, "GRASP restarts");
    cmd->add_option("--rcl-alpha", s.rcl_alpha, "RCL greediness in [0,1]");
    cmd->add_option("--k-c", s.k_c, "soft-constraint penalty multiplier");
    cmd->add_option("--cost", s.cost, "cost function: minmax|cminsum|combined");
    cmd->add_option("--threads", s.threads, "worker threads (0 = auto)");
}

/// Optional JSON config file; flags win over config values.
void apply_config(const CommonOpts& c, SolverOpts& s, const CLI::App* cmd) {
    if (c.config_path.empty()) return;
    const auto j = mstsp::json::parse(mstsp::read_file(c.config_path));
    const auto take = [&](const char* flag, const char* key, auto& out) {
        if (j.contains(key) && cmd->count(flag) == 0)
            out = j.at(key).get<std::decay_t<decltype(out)>>();
    };
    take("--restarts", "restarts", s.restarts);
    take("--rcl-alpha", "rcl_alpha", s.rcl_alpha);
    take("--k-c", "k_c", s.k_c);
    take("--cost", "cost_function", s.cost);
}

mstsp::SolverConfig make_config(const CommonOpts& c, const SolverOpts& s) {
    mstsp::SolverConfig cfg;
    cfg.restarts = s.restarts;
    cfg.rcl_alpha = s.rcl_alpha;
    cfg.seed = c.seed;
    cfg.cost_kind = mstsp::parse_cost_kind(s.cost);
    cfg.k_c = s.k_c;
    cfg.threads = s.threads;
    return cfg;
}

std::string out_path(const CommonOpts& c, const std::string& name) {
    std::filesystem::create_directories(c.out_dir);
    return (std::filesystem::path(c.out_dir) / name).string();
}

void write_manifest(const CommonOpts& c, const std::string& command,
                    const mstsp::json& config_snapshot,
                    const std::string& inst_hash, double wall_s) {
    mstsp::json m;
    m["tool_version"] = mstsp::kToolVersion;
    m["command"] = command;
    m["seed"] = c.seed;
    m["config"] = config_snapshot;
    m["instance_hash"] = inst_hash;
    m["wall_time_s"] = wall_s;
    mstsp::write_file(out_path(c, "run_manifest.json"), m.dump(2) + "\n");
}

mstsp::json solver_snapshot(const SolverOpts& s) {
    return {{"restarts", s.restarts},
            {"rcl_alpha", s.rcl_alpha},
            {"k_c", s.k_c},
            {"cost_function", s.cost},
            {"threads", s.threads}};
}

/// "70%" of t_max, or plain seconds.
double parse_fail_time(const std::string& s, double t_max) {
    if (!s.empty() && s.back() == '%') {
        const double pct = std::stod(s.substr(0, s.size() - 1));
        if (pct < 0.0 || pct > 100.0)
            throw std::invalid_argument("--fail-time percentage outside [0,100]");
        return pct / 100.0 * t_max;
    }
    return std::stod(s);
}

int run(int argc, char** argv) {
    CLI::App app{"Fault-tolerant multi-vehicle power-line inspection planner"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a synthetic instance");
    CommonOpts gen_c;
    add_common(gen, gen_c);
    double d_max = 0.0;
    mstsp::GenParams gp;
    gen->add_option("--d-max", d_max, "segment inclusion radius, meters")
        ->required();
    gen->add_option("--n-vehicles", gp.n_vehicles, "fleet size");
    gen->add_option("--budget", gp.budget_percent, "per-vehicle budget, percent");
    gen->add_option("--v-max", gp.v_max, "transit velocity, m/s");
    gen->add_option("--v-insp", gp.v_insp, "inspection velocity, m/s");
    gen->add_option("--rate-transit", gp.energy.rate_transit,
                    "battery %/s while transiting");
    gen->add_option("--rate-insp", gp.energy.rate_insp,
                    "battery %/s while inspecting");
    gen->add_option("--corridors", gp.n_corridors, "corridor count");
    gen->add_option("--branch-prob", gp.branch_prob, "branch probability");
    std::string gen_out = "instance.json";
    gen->add_option("--out", gen_out, "instance file name");

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "solve the initial plan");
    CommonOpts plan_c;
    SolverOpts plan_s;
    add_common(plan_cmd, plan_c);
    add_solver(plan_cmd, plan_s);
    std::string plan_inst_path;
    plan_cmd->add_option("--instance", plan_inst_path, "instance JSON file")
        ->required();
    int repeat = 1;
    plan_cmd->add_option("--repeat", repeat,
                         "independent solver repetitions; best kept");
    bool trace = false;
    plan_cmd->add_flag("--trace", trace, "emit per-restart cost CSV");
    std::string plan_out = "plan.json";
    plan_cmd->add_option("--out", plan_out, "plan file name");

    // window
    auto* win = app.add_subcommand("window", "compute the re-plan window");
    CommonOpts win_c;
    SolverOpts win_s;
    add_common(win, win_c);
    add_solver(win, win_s);
    std::string win_inst_path, win_plan_path;
    win->add_option("--instance", win_inst_path, "instance JSON file")->required();
    win->add_option("--plan", win_plan_path, "plan JSON file")->required();
    double dt = 0.0;
    win->add_option("--dt", dt, "failure-time grid step, seconds (default 1% of t_max)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate one failure scenario");
    CommonOpts sim_c;
    SolverOpts sim_s;
    add_common(sim, sim_c);
    add_solver(sim, sim_s);
    std::string sim_inst_path, sim_plan_path, fail_time_str;
    int fail_vehicle = 0;
    sim->add_option("--instance", sim_inst_path, "instance JSON file")->required();
    sim->add_option("--plan", sim_plan_path, "plan JSON file")->required();
    sim->add_option("--fail-vehicle", fail_vehicle, "failing vehicle id")
        ->required();
    sim->add_option("--fail-time", fail_time_str,
                    "failure time: seconds or percentage like 70%")
        ->required();

    // oracle
    auto* orc = app.add_subcommand("oracle", "exact solver for tiny instances");
    CommonOpts orc_c;
    add_common(orc, orc_c);
    std::string orc_inst_path, orc_cost = "combined";
    double orc_kc = 1000.0;
    orc->add_option("--instance", orc_inst_path, "instance JSON file")->required();
    orc->add_option("--cost", orc_cost, "cost function");
    orc->add_option("--k-c", orc_kc, "penalty multiplier");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const auto wall = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    };

    if (gen->parsed()) {
        const mstsp::Instance inst =
            mstsp::generate_instance(gen_c.seed, d_max, gp);
        const auto j = mstsp::to_json(inst);
        mstsp::write_file(out_path(gen_c, gen_out), j.dump(2) + "\n");
        std::cout << "n_seg=" << inst.segments.size() << "\n";
        write_manifest(gen_c, "generate",
                       {{"d_max", d_max}, {"n_vehicles", gp.n_vehicles}},
                       mstsp::instance_hash(inst), wall());
        return kExitOk;
    }

    if (plan_cmd->parsed()) {
        apply_config(plan_c, plan_s, plan_cmd);
        const mstsp::Instance inst =
            mstsp::instance_from_json(mstsp::json::parse(mstsp::read_file(plan_inst_path)));
        mstsp::SolverConfig cfg = make_config(plan_c, plan_s);
        mstsp::SolveResult best;
        bool have = false;
        for (int r = 0; r < repeat; ++r) {
            mstsp::SolverConfig rcfg = cfg;
            rcfg.seed = repeat == 1 ? cfg.seed
                                    : mstsp::derive_seed(cfg.seed, 0x726570,
                                                         static_cast<std::uint64_t>(r));
            mstsp::SolveResult sr = mstsp::solve(inst, rcfg);
            if (!have || sr.best_cost < best.best_cost) {
                best = std::move(sr);
                have = true;
            }
        }
        const std::string hash = mstsp::instance_hash(inst);
        const auto j = mstsp::to_json(best.best_plan, inst, hash, best.feasible,
                                      best.best_cost, plan_s.cost);
        mstsp::write_file(out_path(plan_c, plan_out), j.dump(2) + "\n");
        if (trace)
            mstsp::write_file(out_path(plan_c, "restart_trace.csv"),
                              mstsp::restart_trace_csv(best));

        std::printf("%-8s %14s %12s\n", "vehicle", "battery [%]", "time [s]");
        for (const auto& tour : best.best_plan.tours) {
            const auto tc = mstsp::tour_cost(inst, tour);
            std::printf("%-8d %14.3f %12.1f\n", tour.vehicle_id, tc.battery,
                        tc.duration);
        }
        std::printf("cost[%s]=%.6f feasible=%s wall=%.2fs\n", plan_s.cost.c_str(),
                    best.best_cost, best.feasible ? "true" : "false", wall());
        mstsp::json snap = solver_snapshot(plan_s);
        snap["repeat"] = repeat;
        write_manifest(plan_c, "plan", snap, hash, wall());
        return best.feasible ? kExitOk : kExitInfeasible;
    }

    if (win->parsed()) {
        apply_config(win_c, win_s, win);
        const mstsp::Instance inst =
            mstsp::instance_from_json(mstsp::json::parse(mstsp::read_file(win_inst_path)));
        const auto plan_json = mstsp::json::parse(mstsp::read_file(win_plan_path));
        const std::string hash = mstsp::instance_hash(inst);
        if (plan_json.at("instance_hash").get<std::string>() != hash)
            throw std::runtime_error("plan was built for a different instance");
        const mstsp::Plan plan = mstsp::plan_from_json(plan_json);
        const mstsp::SolverConfig cfg = make_config(win_c, win_s);
        const auto timeline = mstsp::build_timeline(inst, plan);
        const double step = dt > 0.0 ? dt : timeline.t_max / 100.0;
        const auto report =
            mstsp::compute_window(inst, plan, cfg, step, win_s.threads);
        mstsp::write_file(out_path(win_c, "window.json"),
                          mstsp::to_json(report).dump(2) + "\n");
        mstsp::write_file(out_path(win_c, "window_samples.csv"),
                          mstsp::window_samples_csv(report));
        mstsp::write_file(out_path(win_c, "timeline.csv"),
                          mstsp::timeline_csv(timeline));
        std::printf("window_percent=%.3f t_star=%.1fs t_max=%.1fs\n",
                    report.window_percent, report.t_star, report.t_max);
        mstsp::json snap = solver_snapshot(win_s);
        snap["dt"] = step;
        write_manifest(win_c, "window", snap, hash, wall());
        return kExitOk;
    }

    if (sim->parsed()) {
        apply_config(sim_c, sim_s, sim);
        const mstsp::Instance inst =
            mstsp::instance_from_json(mstsp::json::parse(mstsp::read_file(sim_inst_path)));
        const auto plan_json = mstsp::json::parse(mstsp::read_file(sim_plan_path));
        const std::string hash = mstsp::instance_hash(inst);
        if (plan_json.at("instance_hash").get<std::string>() != hash)
            throw std::runtime_error("plan was built for a different instance");
        const mstsp::Plan plan = mstsp::plan_from_json(plan_json);
        const auto timeline = mstsp::build_timeline(inst, plan);
        const double t_fail = parse_fail_time(fail_time_str, timeline.t_max);
        const auto residual = mstsp::inject_failure(inst, plan, timeline,
                                                    {fail_vehicle, t_fail});
        const mstsp::SolverConfig cfg = make_config(sim_c, sim_s);
        const auto rr = mstsp::replan(residual, cfg);

        mstsp::write_file(out_path(sim_c, "timeline_pre_failure.csv"),
                          mstsp::timeline_csv(timeline));
        mstsp::json out;
        out["format_version"] = mstsp::kPlanFormatVersion;
        out["instance_hash"] = hash;
        out["fail_vehicle"] = fail_vehicle;
        out["t_fail_s"] = t_fail;
        out["success"] = rr.success;
        out["cost"] = rr.cost;
        mstsp::json tours = mstsp::json::array();
        for (std::size_t v = 0; v < rr.plan.tours.size(); ++v) {
            const auto& tour = rr.plan.tours[v];
            mstsp::json jt;
            jt["vehicle_id"] = tour.vehicle_id;
            jt["start"] = mstsp::to_json(tour.start);
            mstsp::json visits = mstsp::json::array();
            for (const auto& vis : tour.visits)
                visits.push_back(mstsp::json::array(
                    {vis.segment_id, vis.direction == mstsp::Direction::Forward
                                         ? "forward"
                                         : "reverse"}));
            jt["visits"] = visits;
            if (v < rr.tour_costs.size())
                jt["battery_percent"] = rr.tour_costs[v];
            tours.push_back(jt);
        }
        out["tours"] = tours;
        mstsp::write_file(out_path(sim_c, "replan.json"), out.dump(2) + "\n");

        if (rr.success && !rr.plan.tours.empty()) {
            // Post-failure trajectories, time-shifted to the failure instant.
            mstsp::Instance rinst = inst;
            rinst.segments = residual.uninspected;
            mstsp::MissionTimeline post;
            for (std::size_t v = 0; v < rr.plan.tours.size(); ++v) {
                // Events built directly: the post-failure trajectory starts
                // at the survivor's commit time and carried-over consumption.
                mstsp::VehicleTimeline vt;
                vt.vehicle_id = rr.plan.tours[v].vehicle_id;
                double t = residual.survivors[v].commit_time;
                double battery =
                    inst.budget_percent - residual.survivors[v].remaining_budget;
                mstsp::Point at = rr.plan.tours[v].start;
                vt.events.push_back({mstsp::EventKind::Launch, t, at, battery, -1});
                for (const auto& vis : rr.plan.tours[v].visits) {
                    const auto* seg = rinst.find_segment(vis.segment_id);
                    const auto& in = vis.direction == mstsp::Direction::Forward
                                         ? seg->a
                                         : seg->b;
                    const auto& outp = vis.direction == mstsp::Direction::Forward
                                           ? seg->b
                                           : seg->a;
                    const double t_tr = mstsp::leg_time(at, in, inst.v_max);
                    t += t_tr;
                    battery += t_tr * inst.energy.rate_transit;
                    vt.events.push_back(
                        {mstsp::EventKind::InspectStart, t, in, battery, seg->id});
                    const double t_in = mstsp::leg_time(in, outp, inst.v_insp);
                    t += t_in;
                    battery += t_in * inst.energy.rate_insp;
                    vt.events.push_back(
                        {mstsp::EventKind::InspectEnd, t, outp, battery, seg->id});
                    at = outp;
                }
                const double t_back = mstsp::leg_time(at, inst.depot, inst.v_max);
                t += t_back;
                battery += t_back * inst.energy.rate_transit;
                vt.events.push_back({mstsp::EventKind::DepotArrival, t,
                                     inst.depot, battery, -1});
                post.t_max = std::max(post.t_max, t);
                post.vehicles.push_back(std::move(vt));
            }
            mstsp::write_file(out_path(sim_c, "timeline_post_failure.csv"),
                              mstsp::timeline_csv(post));
        }

        std::printf("t_fail=%.1fs success=%s cost=%.6f\n", t_fail,
                    rr.success ? "true" : "false", rr.cost);
        mstsp::json snap = solver_snapshot(sim_s);
        snap["fail_vehicle"] = fail_vehicle;
        snap["fail_time"] = fail_time_str;
        write_manifest(sim_c, "simulate", snap, hash, wall());
        return rr.success ? kExitOk : kExitInfeasible;
    }

    if (orc->parsed()) {
        const mstsp::Instance inst =
            mstsp::instance_from_json(mstsp::json::parse(mstsp::read_file(orc_inst_path)));
        mstsp::CostFunction cf;
        cf.kind = mstsp::parse_cost_kind(orc_cost);
        cf.k_c = orc_kc;
        cf.c_max = inst.budget_percent;
        const auto res = mstsp::exact_solve(inst, cf);
        const std::string hash = mstsp::instance_hash(inst);
        const bool feasible =
            mstsp::validate_plan(inst, res.optimal_plan).feasible();
        const auto j = mstsp::to_json(res.optimal_plan, inst, hash, feasible,
                                      res.optimal_cost, orc_cost);
        mstsp::write_file(out_path(orc_c, "oracle_plan.json"), j.dump(2) + "\n");
        std::printf("optimal_cost=%.6f enumerated=%llu\n", res.optimal_cost,
                    static_cast<unsigned long long>(res.enumerated_count));
        write_manifest(orc_c, "oracle", {{"cost_function", orc_cost}}, hash,
                       wall());
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
