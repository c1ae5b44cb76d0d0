#pragma once

#include "regulator/model.hpp"

#include <cstdint>

namespace regulator {

// Synthetic source: integer packet lengths uniform on [min_length,max_length],
// inter-arrival gap = exponential idle time + previous transmission time.
struct SourceConfig {
    std::uint64_t seed = 1;
    int count = 0;
    double lambda = 0.25;  // rate of the exponential idle time
    int min_length = 5;
    int max_length = 10;
    double capacity = 1.0;
};

// Deterministic given the seed: draws come from std::mt19937_64 with fixed
// mappings (length = min + (draw mod range); idle = -log(u)/lambda with
// u = ((draw >> 11) + 1) * 2^-53), so traces are portable across platforms.
Trace generate(const SourceConfig& config);

// Total bits divided by the span from the first arrival to the end of the
// last packet's transmission.
double empirical_rate(const Trace& trace);

}  // namespace regulator
