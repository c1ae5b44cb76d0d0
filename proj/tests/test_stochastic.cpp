#include "regulator/stochastic.hpp"

#include "regulator/analysis.hpp"
#include "regulator/bound.hpp"
#include "regulator/traffic.hpp"
#include "regulator/workload.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace regulator;

namespace {

BoundFunction demo_bound() {
    return BoundFunction{{{0.0, 1.0}, {40.0, 0.9}, {200.0, 0.1}}, 200.0};
}

BoundGrid demo_grid(std::size_t m) {
    BoundGrid g = build_grid(200.0, m, 400.0, delta(0.65, 1.0, 10.0),
                             FbarVariant::full, GridSpacing::uniform);
    return build_fbar_full(demo_bound(), g);
}

OvershootLedger fresh_ledger(const BoundGrid& g) {
    return OvershootLedger{
        std::vector<double>(g.thresholds.begin(), g.thresholds.end() - 1),
        std::vector<double>(g.size() - 1, 0.0), 0.0, 0.0};
}

const RegulatorParams kParams{0.65, 1.0, 10.0};

}  // namespace

TEST_CASE("candidate_floor picks the smallest sufficient budget") {
    const BoundGrid g = demo_grid(20);
    CHECK(candidate_floor(0.0, g) == 1);
    CHECK(candidate_floor(16.5, g) == 1);
    CHECK(candidate_floor(30.0, g) == 2);
    CHECK(candidate_floor(36.6, g) == 3);
    CHECK(candidate_floor(396.5, g) == 20);
    // above the top budget but within the top threshold: clamps to the top
    CHECK(candidate_floor(397.5, g) == 20);
    CHECK(candidate_floor(400.0, g) == 20);
    CHECK_THROWS_AS(candidate_floor(400.5, g), config_error);
}

TEST_CASE("candidate_departure delays only past the budget") {
    const CandidateTimes zero =
        candidate_departure(100.0, 30.0, 36.5, 0.65, 1.0, 10.0);
    CHECK(zero.departure_start == 100.0);
    CHECK(zero.departure_complete == doctest::Approx(110.0));
    const CandidateTimes held =
        candidate_departure(100.0, 30.0, 16.5, 0.65, 1.0, 10.0);
    CHECK(held.departure_start == doctest::Approx(120.76923076923077));
    CHECK(held.departure_complete == doctest::Approx(130.76923076923077));
    // between two insufficient budgets the hold differs by the drain time
    const CandidateTimes lo =
        candidate_departure(100.0, 60.0, 16.5, 0.65, 1.0, 10.0);
    const CandidateTimes hi =
        candidate_departure(100.0, 60.0, 36.5, 0.65, 1.0, 10.0);
    CHECK(lo.departure_complete - hi.departure_complete ==
          doctest::Approx(20.0 / 0.65));
}

TEST_CASE("epsilon_margin") {
    const BoundGrid g = demo_grid(20);
    CHECK(epsilon_margin(4, 5, 110.0, 40.0, g, 0.65) ==
          doctest::Approx(0.1).epsilon(1e-12));
    CHECK(epsilon_margin(2, 5, 1000.0, 100.0, g, 0.65) ==
          doctest::Approx(6.0 / 650.0).epsilon(1e-12));
    // a workload below the threshold makes the margin negative
    CHECK(epsilon_margin(2, 5, 1000.0, 30.0, g, 0.65) < 0.0);
    CHECK_THROWS_AS(epsilon_margin(0, 5, 1000.0, 100.0, g, 0.65),
                    std::invalid_argument);
    CHECK_THROWS_AS(epsilon_margin(5, 5, 1000.0, 100.0, g, 0.65),
                    std::invalid_argument);
}

TEST_CASE("selectors agree on a clean ledger and accept the floor") {
    const BoundGrid g = demo_grid(20);
    OvershootLedger ledger = fresh_ledger(g);
    ledger.as_of = 10.0;
    ledger.workload = 30.0;
    const SelectInput in{12.0, 28.7, 10.0, 2};
    CHECK(select_basic(ledger, g, kParams, in) == 2);
    CHECK(select_checked(ledger, g, kParams, in) == 2);
    CHECK(select_fast(ledger, g, kParams, in) == 2);
}

TEST_CASE("a saturated first threshold forces the fallback budget") {
    const BoundGrid g = demo_grid(20);
    OvershootLedger ledger = fresh_ledger(g);
    ledger.durations[0] = 100.0;
    ledger.as_of = 110.0;
    ledger.workload = 30.0;
    const SelectInput in{112.0, 28.7, 10.0, 2};
    CHECK(select_basic(ledger, g, kParams, in) == 1);
    CHECK(select_checked(ledger, g, kParams, in) == 1);
    CHECK(select_fast(ledger, g, kParams, in) == 1);
}

TEST_CASE("the checked selector can reject a level the basic one accepts") {
    const BoundGrid g = demo_grid(20);
    OvershootLedger ledger = fresh_ledger(g);
    ledger.durations[0] = 16.0;
    ledger.durations[1] = 8.0;
    ledger.as_of = 20.0;
    ledger.workload = 63.0;
    const SelectInput in{40.0, 50.0, 10.0, 3};
    CHECK(select_basic(ledger, g, kParams, in) == 3);
    CHECK(select_checked(ledger, g, kParams, in) == 1);
    CHECK(select_fast(ledger, g, kParams, in) == 1);
}

TEST_CASE("a ratio exactly on the bound is accepted") {
    const BoundGrid g = demo_grid(20);
    OvershootLedger ledger = fresh_ledger(g);
    ledger.durations[0] = 79.0;
    ledger.as_of = 90.0;
    ledger.workload = 36.5;
    const SelectInput in{100.0, 30.0, 10.0, 2};
    // projected time over the first threshold is 99 and b_j is 110,
    // landing exactly on the 0.9 bound at the second threshold
    CHECK(select_basic(ledger, g, kParams, in) == 2);
}

TEST_CASE("a floor of one bypasses selection") {
    const BoundGrid g = demo_grid(20);
    const OvershootLedger ledger = fresh_ledger(g);
    const SelectInput in{5.0, 3.0, 10.0, 1};
    CHECK(select_basic(ledger, g, kParams, in) == 1);
    CHECK(select_checked(ledger, g, kParams, in) == 1);
    CHECK(select_fast(ledger, g, kParams, in) == 1);
}

TEST_CASE("fast agrees with checked on states reached by checked runs") {
    const BoundGrid g = demo_grid(20);
    int nontrivial = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const double lambda = seed % 2 == 0 ? 0.25 : 0.8;
        const Trace trace = generate({seed, 60, lambda, 5, 10, 1.0});
        Trace prefix = trace;
        const Packet next = prefix.packets.back();
        prefix.packets.pop_back();
        const StochRun run =
            shape_stochastic(prefix, g, kParams, Algorithm::checked);
        const OvershootLedger& ledger = run.ledger;
        SelectInput in{std::max(next.arrival_start, ledger.as_of), 0.0,
                       next.length, 0};
        in.w_internal =
            std::max(ledger.workload - 0.65 * (in.s_tilde - ledger.as_of),
                     0.0);
        in.floor_index = candidate_floor(in.w_internal, g);
        if (in.floor_index > 1) ++nontrivial;
        CHECK(select_fast(ledger, g, kParams, in) ==
              select_checked(ledger, g, kParams, in));
    }
    CHECK(nontrivial >= 5);
}

TEST_CASE("checked and fast runs produce identical departures") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        const Trace trace = generate({seed, 500, 0.25, 5, 10, 1.0});
        for (std::size_t m : {10, 20, 56}) {
            if (seed != 1 && m != 20) continue;
            const BoundGrid g = demo_grid(m);
            const StochRun a =
                shape_stochastic(trace, g, kParams, Algorithm::checked);
            const StochRun b =
                shape_stochastic(trace, g, kParams, Algorithm::fast);
            REQUIRE(a.packets.size() == b.packets.size());
            for (std::size_t j = 0; j < a.packets.size(); ++j) {
                CHECK(a.packets[j].departure_start ==
                      b.packets[j].departure_start);
                CHECK(a.packets[j].departure_complete ==
                      b.packets[j].departure_complete);
                CHECK(a.states[j].sigma_index == b.states[j].sigma_index);
            }
        }
    }
}

TEST_CASE("a conforming trace passes every algorithm with zero delay") {
    Trace trace{1.0, {}};
    for (int j = 1; j <= 5; ++j)
        trace.packets.push_back({j, 100.0 * (j - 1), 10.0});
    const BoundGrid g = demo_grid(20);
    for (Algorithm alg :
         {Algorithm::basic, Algorithm::checked, Algorithm::fast}) {
        const StochRun run = shape_stochastic(trace, g, kParams, alg);
        for (const ShapedPacket& p : run.packets) CHECK(p.delay == 0.0);
    }
}

TEST_CASE("a saturated backlog clamps to the top budget and stays bounded") {
    BoundGrid g = build_grid(20.0, 2, 40.0, 3.5, FbarVariant::full,
                             GridSpacing::uniform);
    g = build_fbar_full(BoundFunction{{{0.0, 1.0}, {20.0, 0.5}}, 20.0}, g);
    Trace trace{1.0, {}};
    for (int j = 1; j <= 14; ++j)
        trace.packets.push_back({j, 10.0 * (j - 1), 10.0});
    const StochRun run = shape_stochastic(trace, g, kParams, Algorithm::basic);
    REQUIRE(run.packets.size() == 14);
    double peak = 0.0;
    for (const SamplePoint& p : run.output_path) {
        CHECK(p.w <= 40.0 + 1e-9);
        peak = std::max(peak, p.w);
    }
    // the backlog outgrows the top budget (36.5) before selection reins it in
    CHECK(peak > 36.5);
    for (const StochPacketState& st : run.states) {
        CHECK(st.floor_index <= 2);
        CHECK(st.sigma_index <= st.floor_index);
    }
}

TEST_CASE("departures respect the selected burst budget") {
    const Trace trace = generate({4, 300, 0.25, 5, 10, 1.0});
    const BoundGrid g = demo_grid(20);
    const StochRun run = shape_stochastic(trace, g, kParams, Algorithm::fast);
    Trace out{1.0, {}};
    for (std::size_t j = 0; j < run.packets.size(); ++j)
        out.packets.push_back({run.packets[j].index,
                               run.packets[j].departure_start,
                               trace.packets[j].length});
    REQUIRE(validate_trace(out).empty());
    for (const ShapedPacket& p : run.packets)
        CHECK(workload_at(out, 0.65, p.departure_start) <=
              p.sigma_star + 1e-9);
}

TEST_CASE("ledger durations match a recomputation from the sample path") {
    const Trace trace = generate({6, 400, 0.25, 5, 10, 1.0});
    const BoundGrid g = demo_grid(20);
    const StochRun run =
        shape_stochastic(trace, g, kParams, Algorithm::checked);
    std::vector<SamplePoint> path = run.output_path;
    while (!path.empty() && path.back().t > run.ledger.as_of + 1e-12)
        path.pop_back();
    for (std::size_t i = 0; i < run.ledger.thresholds.size(); ++i) {
        const double oracle =
            recompute_overshoot_oracle(path, run.ledger.thresholds[i]);
        CHECK(std::abs(oracle - run.ledger.durations[i]) <=
              1e-7 * (1.0 + run.ledger.as_of));
    }
}

TEST_CASE("recorded overshoot ratios stay within the bound profile") {
    const Trace trace = generate({8, 400, 0.25, 5, 10, 1.0});
    const BoundGrid g = demo_grid(20);
    const BoundFunction f = demo_bound();
    for (Algorithm alg : {Algorithm::checked, Algorithm::fast}) {
        const StochRun run = shape_stochastic(trace, g, kParams, alg, true);
        REQUIRE(run.ledger_history.size() == run.packets.size());
        for (const LedgerSnapshot& snap : run.ledger_history)
            for (std::size_t i = 0; i < snap.ratios.size(); ++i) {
                if (run.ledger.thresholds[i] > f.horizon) continue;
                CHECK(snap.ratios[i] <=
                      f.value(run.ledger.thresholds[i]) + 1e-9);
            }
    }
}
