#include <doctest.h>

#include "mstsp/generate.hpp"
#include "mstsp/io.hpp"
#include "test_util.hpp"

using namespace mstsp;

TEST_CASE("instance JSON round trip") {
    const Instance inst = generate_instance(4, 600.0);
    const json j = to_json(inst);
    CHECK(j.at("format_version") == kInstanceFormatVersion);
    const Instance back = instance_from_json(j);
    CHECK(to_json(back).dump() == j.dump());
    CHECK(instance_hash(back) == instance_hash(inst));
}

TEST_CASE("plan JSON round trip preserves visits and metadata") {
    const Instance inst = mstsp_test::one_segment_instance();
    Plan plan;
    plan.tours.push_back({0, inst.depot, {{0, Direction::Reverse}}});
    const std::string hash = instance_hash(inst);
    const json j = to_json(plan, inst, hash, true, 5.0, "minmax");
    CHECK(j.at("format_version") == kPlanFormatVersion);
    CHECK(j.at("instance_hash") == hash);
    CHECK(j.at("tours").at(0).at("battery_percent").get<double>() ==
          doctest::Approx(5.0));
    const Plan back = plan_from_json(j);
    REQUIRE(back.tours.size() == 1);
    CHECK(back.tours[0].visits == plan.tours[0].visits);
    CHECK(back.tours[0].start == plan.tours[0].start);
}

TEST_CASE("format_version mismatch is rejected") {
    json j = to_json(generate_instance(1, 500.0));
    j["format_version"] = 99;
    CHECK_THROWS(instance_from_json(j));
}

TEST_CASE("bad plan direction string is rejected") {
    const Instance inst = mstsp_test::one_segment_instance();
    json j = to_json(Plan{{{0, inst.depot, {{0, Direction::Forward}}}}}, inst,
                     "x", true, 0.0, "minmax");
    j["tours"][0]["visits"][0][1] = "sideways";
    CHECK_THROWS(plan_from_json(j));
}

TEST_CASE("hash is stable and content sensitive") {
    Instance inst = generate_instance(1, 500.0);
    const std::string h1 = instance_hash(inst);
    CHECK(h1 == instance_hash(inst));
    inst.budget_percent += 1.0;
    CHECK(h1 != instance_hash(inst));
}
