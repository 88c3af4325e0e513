#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mstsp/model.hpp"
#include "mstsp/rng.hpp"

namespace mstsp {

/// Parameters of the synthetic power-line network generator. The network
/// is a set of pylon chains radiating from the substation, with occasional
/// branches, mimicking transmission corridors on a map.
struct GenParams {
    int n_corridors = 3;
    int pylons_per_corridor = 20;
    double spacing_min = 110.0;  // pylon spacing, meters
    double spacing_max = 160.0;
    double angle_jitter_deg = 8.0;
    double branch_prob = 0.15;   // per corridor pylon
    int branch_pylons = 3;

    int n_vehicles = 4;
    double budget_percent = 100.0;
    double v_max = 5.0;
    double v_insp = 1.0;
    EnergyModel energy;
};

namespace detail {

inline Point step_from(const Point& p, double angle, double dist) {
    return {p.x + dist * std::cos(angle), p.y + dist * std::sin(angle), p.z};
}

}  // namespace detail

/// Deterministically generates a pylon network from the seed, then keeps
/// only the segments whose both endpoints lie within d_max of the depot.
/// The network itself does not depend on d_max, so a larger radius always
/// yields a superset of segments.
inline Instance generate_instance(std::uint64_t seed, double d_max,
                                  const GenParams& params = {}) {
    if (!(d_max > 0.0))
        throw std::invalid_argument("generate_instance: d_max must be positive");
    Rng rng(derive_seed(seed, 0x67656e));  // generator stream

    Instance inst;
    inst.depot = {0.0, 0.0, 0.0};
    inst.n_vehicles = params.n_vehicles;
    inst.budget_percent = params.budget_percent;
    inst.v_max = params.v_max;
    inst.v_insp = params.v_insp;
    inst.energy = params.energy;

    std::vector<Segment> network;
    int next_id = 0;
    const double jitter = params.angle_jitter_deg * std::numbers::pi / 180.0;
    for (int c = 0; c < params.n_corridors; ++c) {
        double angle = 2.0 * std::numbers::pi * c / params.n_corridors +
                       (rng.uniform() - 0.5) * 2.0 * jitter;
        Point at = inst.depot;
        for (int i = 0; i < params.pylons_per_corridor; ++i) {
            const double spacing =
                params.spacing_min +
                rng.uniform() * (params.spacing_max - params.spacing_min);
            angle += (rng.uniform() - 0.5) * 2.0 * jitter;
            const Point nxt = detail::step_from(at, angle, spacing);
            network.push_back({next_id++, at, nxt});

            // Occasional branch line splitting off this pylon.
            if (rng.uniform() < params.branch_prob) {
                const double side = rng.uniform() < 0.5 ? 1.0 : -1.0;
                double bangle = angle + side * (std::numbers::pi / 4.0 +
                                                (rng.uniform() - 0.5) * jitter);
                Point bat = nxt;
                for (int j = 0; j < params.branch_pylons; ++j) {
                    const double bspacing =
                        params.spacing_min +
                        rng.uniform() * (params.spacing_max - params.spacing_min);
                    bangle += (rng.uniform() - 0.5) * 2.0 * jitter;
                    const Point bnxt = detail::step_from(bat, bangle, bspacing);
                    network.push_back({next_id++, bat, bnxt});
                    bat = bnxt;
                }
            }
            at = nxt;
        }
    }

    for (const Segment& s : network) {
        if (distance(inst.depot, s.a) <= d_max &&
            distance(inst.depot, s.b) <= d_max)
            inst.segments.push_back(s);
    }
    if (inst.segments.empty())
        throw std::runtime_error(
            "generate_instance: no segment fits within d_max");
    return inst;
}

}  // namespace mstsp
