#include "regulator/deterministic.hpp"
#include "regulator/traffic.hpp"
#include "regulator/workload.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace regulator;

TEST_CASE("buffer_departure waits for the previous transmission") {
    CHECK(buffer_departure(3.0, 1.0) == 3.0);
    CHECK(buffer_departure(1.0, 3.0) == 3.0);
    CHECK(buffer_departure(2.0, 2.0) == 2.0);
}

TEST_CASE("departure_time holds until the burst budget is reached") {
    CHECK(departure_time(0.4, 0.25, 0.5, 1.2) == doctest::Approx(1.5));
    CHECK(departure_time(0.2, 0.25, 0.5, 1.2) == 1.2);
    CHECK(departure_time(5.0, 3.0, 0.5, 10.0) == doctest::Approx(14.0));
}

TEST_CASE("two-packet worked example") {
    const Trace trace{1.0, {{1, 0.0, 1.0}, {2, 1.2, 1.0}}};
    const RegulatorParams params{0.5, 1.0, 1.0};
    const DetRun run = shape_deterministic(trace, 0.25, params);
    REQUIRE(run.packets.size() == 2);
    CHECK(run.packets[0].departure_start == 0.0);
    CHECK(run.packets[0].departure_complete == doctest::Approx(1.0));
    // W(1.2; R_1) = 0.4 > sigma, so packet 2 waits until 1.5
    CHECK(run.packets[1].departure_start == doctest::Approx(1.5));
    CHECK(run.packets[1].departure_complete == doctest::Approx(2.5));
    CHECK(run.packets[1].delay == doctest::Approx(0.3));
    CHECK(run.states[1].internal_workload == doctest::Approx(0.4));
}

TEST_CASE("a conforming trace passes through untouched") {
    const Trace trace{1.0, {{1, 0.0, 5.0}, {2, 40.0, 5.0}, {3, 80.0, 5.0}}};
    const RegulatorParams params{0.65, 1.0, 10.0};
    const DetRun run = shape_deterministic(trace, 16.5, params);
    for (const ShapedPacket& p : run.packets) {
        CHECK(p.delay == 0.0);
        CHECK(p.departure_start == p.arrival_start);
    }
}

TEST_CASE("single packet departs immediately") {
    const Trace trace{1.0, {{1, 7.0, 4.0}}};
    const DetRun run = shape_deterministic(trace, 1.0, {0.5, 1.0, 4.0});
    CHECK(run.packets[0].departure_start == 7.0);
    CHECK(run.packets[0].departure_complete == 11.0);
}

TEST_CASE("invalid inputs are rejected") {
    const Trace trace{1.0, {{1, 0.0, 1.0}}};
    CHECK_THROWS_AS(shape_deterministic(trace, -1.0, {0.5, 1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(shape_deterministic(trace, 1.0, {1.5, 1.0, 1.0}),
                    std::invalid_argument);
    const Trace overlapping{1.0, {{1, 0.0, 2.0}, {2, 1.0, 2.0}}};
    CHECK_THROWS_AS(shape_deterministic(overlapping, 1.0, {0.5, 1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("shaped output satisfies the relaxed burst bound") {
    const RegulatorParams params{0.65, 1.0, 10.0};
    for (std::uint64_t seed : {1, 2, 3}) {
        const Trace trace = generate({seed, 300, 0.25, 5, 10, 1.0});
        for (double sigma : {5.0, 16.5, 60.0}) {
            const DetRun run = shape_deterministic(trace, sigma, params);
            Trace out{1.0, {}};
            for (std::size_t j = 0; j < run.packets.size(); ++j)
                out.packets.push_back({run.packets[j].index,
                                       run.packets[j].departure_start,
                                       trace.packets[j].length});
            const double relaxed = sigma + (1.0 - 0.65) * 10.0;
            CHECK(check_sigma_rho(out, relaxed, 0.65));
            for (const SamplePoint& p : run.output_path) {
                CHECK(std::abs(p.w - workload_at(out, 0.65, p.t)) <= 1e-9);
                CHECK(p.w <= relaxed + 1e-9);
            }
            // at every departure instant the output stays within sigma
            for (const ShapedPacket& p : run.packets)
                CHECK(workload_at(out, 0.65, p.departure_start) <=
                      sigma + 1e-9);
        }
    }
}

TEST_CASE("input-side recursion tracks the internal workload") {
    const Trace trace = generate({5, 200, 0.25, 5, 10, 1.0});
    const RegulatorParams params{0.65, 1.0, 10.0};
    const DetRun run = shape_deterministic(trace, 16.5, params);
    for (std::size_t j = 0; j < run.packets.size(); ++j) {
        const double s = run.packets[j].arrival_start;
        const double s_tilde = run.packets[j].buffer_departure;
        const double expect = run.states[j].input_workload_at_start -
                              0.65 * (s_tilde - s);
        CHECK(std::abs(run.states[j].internal_workload - expect) <= 1e-9);
    }
}

TEST_CASE("re-shaping the output with the relaxed budget is a no-op") {
    const Trace trace = generate({9, 250, 0.25, 5, 10, 1.0});
    const RegulatorParams params{0.65, 1.0, 10.0};
    const DetRun first = shape_deterministic(trace, 16.5, params);
    Trace out{1.0, {}};
    for (std::size_t j = 0; j < first.packets.size(); ++j)
        out.packets.push_back({first.packets[j].index,
                               first.packets[j].departure_start,
                               trace.packets[j].length});
    const double relaxed = 16.5 + 3.5;
    const DetRun second = shape_deterministic(out, relaxed, params);
    for (const ShapedPacket& p : second.packets) CHECK(p.delay <= 1e-9);
}
