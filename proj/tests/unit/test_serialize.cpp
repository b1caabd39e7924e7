#include <doctest.h>

#include "ostop/serialize.hpp"

using namespace ostop;
using nlohmann::json;

TEST_CASE("serialize: threshold solution round trip") {
    const auto sol = solve_threshold(ExampleId::Reflected, DiscountRate(0.5));
    const json j = sol;
    const auto back = json::parse(j.dump()).get<ThresholdSolution>();
    CHECK(back.example == sol.example);
    CHECK(back.alpha == sol.alpha);
    CHECK(back.u == sol.u);
    CHECK(back.x0 == sol.x0);
    CHECK(back.status == sol.status);
    CHECK(back.residual == sol.residual);
    CHECK(back.note == sol.note);
    CHECK(json(back) == j);
}

TEST_CASE("serialize: absorbed solution keeps its note") {
    const auto sol = solve_threshold(ExampleId::Absorbed, DiscountRate(2.0));
    const json j = sol;
    CHECK(j.contains("note"));
    const auto back = json::parse(j.dump()).get<ThresholdSolution>();
    CHECK(back.note == sol.note);
}

TEST_CASE("serialize: verification report round trip") {
    const auto candidate =
        make_example_candidate(ExampleId::LinearStopped, DiscountRate(0.5));
    const auto grid = default_grid(ExampleId::LinearStopped, DiscountRate(0.5),
                                   solve_threshold(ExampleId::LinearStopped,
                                                   DiscountRate(0.5))
                                       .x0);
    const auto report = check_conditions(candidate, grid);
    const json j = report;
    const auto back = json::parse(j.dump()).get<VerificationReport>();
    CHECK(json(back) == j);
    CHECK(back.all_pass() == report.all_pass());
    CHECK(back.grid == report.grid);
    CHECK(back.region.intervals.size() == report.region.intervals.size());
}

TEST_CASE("serialize: sweep result round trip") {
    SweepResult sweep;
    sweep.points = {{0.5, {0.41, 0.002, 1000, 1e-9}},
                    {1.0, {0.37, 0.001, 1000, 1e-9}}};
    sweep.argmax_index = 0;
    sweep.argmax_gap_z = 17.9;
    const json j = sweep;
    const auto back = json::parse(j.dump()).get<SweepResult>();
    CHECK(json(back) == j);
}
