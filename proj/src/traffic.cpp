#include "regulator/traffic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace regulator {

Trace generate(const SourceConfig& config) {
    if (config.count < 0)
        throw std::invalid_argument("count must be nonnegative");
    if (!(config.lambda > 0.0))
        throw std::invalid_argument("lambda must be positive");
    if (config.min_length < 1 || config.min_length > config.max_length)
        throw std::invalid_argument("need 1 <= min_length <= max_length");
    if (!(config.capacity > 0.0))
        throw std::invalid_argument("capacity must be positive");

    std::mt19937_64 rng(config.seed);
    const std::uint64_t range = static_cast<std::uint64_t>(
        config.max_length - config.min_length + 1);

    Trace trace;
    trace.capacity = config.capacity;
    trace.packets.reserve(static_cast<std::size_t>(config.count));
    double s = 0.0;
    for (int j = 1; j <= config.count; ++j) {
        const double length =
            static_cast<double>(config.min_length + rng() % range);
        trace.packets.push_back({j, s, length});
        if (j < config.count) {
            // midpoint mapping keeps u strictly inside (0,1), so idle > 0 and
            // traces never have touching transmissions
            const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
            const double idle = -std::log(u) / config.lambda;
            s += idle + length / config.capacity;
        }
    }
    return trace;
}

double empirical_rate(const Trace& trace) {
    if (trace.packets.empty())
        throw std::invalid_argument("empirical_rate: empty trace");
    double bits = 0.0;
    for (const Packet& p : trace.packets) bits += p.length;
    const double span =
        full_arrival_time(trace.packets.back(), trace.capacity) -
        trace.packets.front().arrival_start;
    return bits / span;
}

}  // namespace regulator
