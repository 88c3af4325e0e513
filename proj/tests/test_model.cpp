#include <doctest.h>

#include <algorithm>

#include "mstsp/model.hpp"
#include "mstsp/rng.hpp"
#include "test_util.hpp"

using namespace mstsp;
using mstsp_test::base_instance;
using mstsp_test::one_segment_instance;

TEST_CASE("leg_time basics") {
    CHECK(leg_time({0, 0, 0}, {100, 0, 0}, 5.0) == doctest::Approx(20.0));
    CHECK(leg_time({7, 8, 9}, {7, 8, 9}, 3.0) == 0.0);
    CHECK(leg_time({0, 0, 0}, {3, 4, 0}, 1.0) == doctest::Approx(5.0));
    CHECK_THROWS_AS(leg_time({0, 0, 0}, {1, 0, 0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(leg_time({0, 0, 0}, {1, 0, 0}, -1.0), std::invalid_argument);
}

TEST_CASE("tour_cost single segment, both directions") {
    const Instance inst = one_segment_instance();
    Tour tour;
    tour.start = inst.depot;
    tour.visits = {{0, Direction::Forward}};
    auto tc = tour_cost(inst, tour);
    // 20 s out at v_max, 100 s inspecting, 40 s back
    CHECK(tc.duration == doctest::Approx(160.0));
    CHECK(tc.battery == doctest::Approx(20 * 0.05 + 100 * 0.02 + 40 * 0.05));
    CHECK(tc.battery == doctest::Approx(5.0));

    tour.visits = {{0, Direction::Reverse}};
    tc = tour_cost(inst, tour);
    CHECK(tc.duration == doctest::Approx(160.0));
    CHECK(tc.battery == doctest::Approx(5.0));
}

TEST_CASE("tour_cost empty tour and unknown segment") {
    const Instance inst = one_segment_instance();
    Tour tour;
    tour.start = inst.depot;
    const auto tc = tour_cost(inst, tour);
    CHECK(tc.battery == 0.0);
    CHECK(tc.duration == 0.0);

    tour.visits = {{42, Direction::Forward}};
    CHECK_THROWS_AS(tour_cost(inst, tour), std::invalid_argument);
}

TEST_CASE("tour_cost invariant under instance segment reordering") {
    Instance inst = base_instance(1);
    inst.segments = {{0, {10, 0, 0}, {60, 0, 0}},
                     {1, {0, 40, 0}, {0, 90, 0}},
                     {2, {-30, -30, 0}, {-80, -30, 0}}};
    Tour tour;
    tour.start = inst.depot;
    tour.visits = {{2, Direction::Reverse},
                   {0, Direction::Forward},
                   {1, Direction::Forward}};
    const auto before = tour_cost(inst, tour);
    std::reverse(inst.segments.begin(), inst.segments.end());
    const auto after = tour_cost(inst, tour);
    CHECK(before.battery == after.battery);
    CHECK(before.duration == after.duration);
}

TEST_CASE("reversed depot-to-depot tour has identical cost") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        Instance inst = mstsp_test::random_tiny_instance(rng, 5, 1);
        Tour tour;
        tour.start = inst.depot;
        for (const auto& s : inst.segments)
            tour.visits.push_back({s.id, rng.bounded(2) == 0
                                             ? Direction::Forward
                                             : Direction::Reverse});
        Tour rev = tour;
        std::reverse(rev.visits.begin(), rev.visits.end());
        for (auto& v : rev.visits)
            v.direction = v.direction == Direction::Forward
                              ? Direction::Reverse
                              : Direction::Forward;
        CHECK(tour_cost(inst, tour).battery ==
              doctest::Approx(tour_cost(inst, rev).battery).epsilon(1e-12));
    }
}

TEST_CASE("validate_plan reports coverage and budget violations") {
    Instance inst = one_segment_instance();
    inst.budget_percent = 100.0;

    Plan good;
    good.tours.push_back({0, inst.depot, {{0, Direction::Forward}}});
    CHECK(validate_plan(inst, good).feasible());

    Plan missing;
    missing.tours.push_back({0, inst.depot, {}});
    auto rep = validate_plan(inst, missing);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].kind == ViolationKind::MissingSegment);
    CHECK(rep.violations[0].id == 0);

    // Budget set just below the known 5.0 % tour cost.
    inst.budget_percent = 4.0;
    rep = validate_plan(inst, good);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].kind == ViolationKind::BudgetExceeded);
    CHECK(rep.violations[0].overshoot == doctest::Approx(1.0));
}

TEST_CASE("validate_plan flags duplicates and unknown ids") {
    Instance inst = one_segment_instance();
    Plan dup;
    dup.tours.push_back(
        {0, inst.depot, {{0, Direction::Forward}, {0, Direction::Reverse}}});
    auto rep = validate_plan(inst, dup);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].kind == ViolationKind::DuplicateSegment);

    Plan unknown;
    unknown.tours.push_back({0, inst.depot, {{9, Direction::Forward}}});
    rep = validate_plan(inst, unknown);
    bool saw_unknown = false, saw_missing = false;
    for (const auto& v : rep.violations) {
        saw_unknown |= v.kind == ViolationKind::UnknownSegment;
        saw_missing |= v.kind == ViolationKind::MissingSegment;
    }
    CHECK(saw_unknown);
    CHECK(saw_missing);
}

TEST_CASE("validate_plan matches brute-force acceptance on random plans") {
    Rng rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        Instance inst = mstsp_test::random_tiny_instance(rng, 4, 2, 50.0);
        Plan plan;
        for (int v = 0; v < inst.n_vehicles; ++v)
            plan.tours.push_back({v, inst.depot, {}});
        // Randomly drop/duplicate segments to exercise both outcomes.
        for (const auto& s : inst.segments) {
            const int copies = static_cast<int>(rng.bounded(3));  // 0, 1 or 2
            for (int c = 0; c < copies; ++c)
                plan.tours[rng.bounded(plan.tours.size())].visits.push_back(
                    {s.id, Direction::Forward});
        }
        // Independent re-derivation of feasibility.
        bool expect = true;
        for (const auto& s : inst.segments) {
            int count = 0;
            for (const auto& t : plan.tours)
                for (const auto& v : t.visits)
                    if (v.segment_id == s.id) ++count;
            if (count != 1) expect = false;
        }
        for (const auto& t : plan.tours)
            if (tour_cost(inst, t).battery > inst.budget_percent) expect = false;
        CHECK(validate_plan(inst, plan).feasible() == expect);
    }
}
