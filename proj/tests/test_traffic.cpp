#include "regulator/model.hpp"
#include "regulator/traffic.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace regulator;

TEST_CASE("generation is deterministic in the seed") {
    const Trace a = generate({42, 100, 0.25, 5, 10, 1.0});
    const Trace b = generate({42, 100, 0.25, 5, 10, 1.0});
    const Trace c = generate({43, 100, 0.25, 5, 10, 1.0});
    REQUIRE(a.packets.size() == 100);
    for (std::size_t j = 0; j < 100; ++j) {
        CHECK(a.packets[j].arrival_start == b.packets[j].arrival_start);
        CHECK(a.packets[j].length == b.packets[j].length);
    }
    bool differs = false;
    for (std::size_t j = 0; j < 100; ++j)
        differs = differs ||
                  a.packets[j].arrival_start != c.packets[j].arrival_start;
    CHECK(differs);
}

TEST_CASE("generated traces are physical") {
    const Trace t = generate({7, 500, 0.25, 5, 10, 1.0});
    CHECK(validate_trace(t).empty());
    CHECK(t.packets.front().arrival_start == 0.0);
    for (std::size_t j = 1; j < t.packets.size(); ++j)
        CHECK(t.packets[j].arrival_start >
              full_arrival_time(t.packets[j - 1], t.capacity));
    for (const Packet& p : t.packets) {
        CHECK(p.length >= 5.0);
        CHECK(p.length <= 10.0);
    }
}

TEST_CASE("a single packet transmits at line rate") {
    const Trace t = generate({1, 1, 0.25, 6, 6, 2.0});
    REQUIRE(t.packets.size() == 1);
    CHECK(empirical_rate(t) == doctest::Approx(2.0));
}

TEST_CASE("long-run moments match the configuration") {
    const Trace t = generate({2, 20000, 0.25, 5, 10, 1.0});
    double gaps = 0.0;
    for (std::size_t j = 1; j < t.packets.size(); ++j)
        gaps += t.packets[j].arrival_start - t.packets[j - 1].arrival_start;
    const double mean_gap = gaps / (t.packets.size() - 1);
    // idle 1/0.25 plus mean transmission 7.5
    CHECK(mean_gap == doctest::Approx(11.5).epsilon(0.02));
    CHECK(empirical_rate(t) == doctest::Approx(7.5 / 11.5).epsilon(0.02));
}

TEST_CASE("lengths are uniform over the configured set") {
    const Trace t = generate({3, 60000, 0.25, 5, 10, 1.0});
    std::array<int, 6> counts{};
    for (const Packet& p : t.packets) {
        const int bin = static_cast<int>(p.length) - 5;
        REQUIRE(bin >= 0);
        REQUIRE(bin < 6);
        CHECK(p.length == std::floor(p.length));
        ++counts[static_cast<std::size_t>(bin)];
    }
    const double expect = 60000.0 / 6.0;
    const double sd = std::sqrt(60000.0 * (1.0 / 6.0) * (5.0 / 6.0));
    for (int c : counts) CHECK(std::abs(c - expect) <= 3.0 * sd);
}

TEST_CASE("idle gaps pass a distribution check against the exponential") {
    const Trace t = generate({4, 4000, 0.25, 5, 10, 1.0});
    std::vector<double> idles;
    for (std::size_t j = 1; j < t.packets.size(); ++j)
        idles.push_back(t.packets[j].arrival_start -
                        full_arrival_time(t.packets[j - 1], t.capacity));
    std::sort(idles.begin(), idles.end());
    const double n = static_cast<double>(idles.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < idles.size(); ++i) {
        const double cdf = 1.0 - std::exp(-0.25 * idles[i]);
        ks = std::max(ks, std::abs(cdf - (i + 1) / n));
        ks = std::max(ks, std::abs(cdf - i / n));
    }
    CHECK(ks <= 1.628 / std::sqrt(n));
}

TEST_CASE("invalid configurations are rejected") {
    CHECK_THROWS_AS(generate({1, 10, 0.0, 5, 10, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(generate({1, 10, 0.25, 0, 10, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate({1, 10, 0.25, 8, 5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(generate({1, 10, 0.25, 5, 10, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(empirical_rate(Trace{}), std::invalid_argument);
    CHECK(generate({1, 0, 0.25, 5, 10, 1.0}).packets.empty());
}
