#pragma once

#include "regulator/model.hpp"
#include "regulator/workload.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace regulator::detail {

inline void require_shapable(const Trace& trace,
                             const RegulatorParams& params) {
    if (!(params.rate > 0.0) || !(params.rate < params.capacity))
        throw std::invalid_argument("shaper needs 0 < rate < capacity");
    if (std::abs(params.capacity - trace.capacity) > eps)
        throw std::invalid_argument(
            "shaper and trace disagree on link capacity");
    const auto violations = validate_trace(trace);
    if (!violations.empty())
        throw std::invalid_argument("invalid trace: packet " +
                                    std::to_string(violations.front().index) +
                                    ": " + violations.front().reason);
    for (const Packet& p : trace.packets)
        if (p.length > params.max_length + eps)
            throw std::invalid_argument("packet " + std::to_string(p.index) +
                                        " exceeds max_length");
}

// Extend the output path across the silent stretch (b_prev, t_j]: one falling
// segment, split at the floor-hit instant when the workload reaches zero.
inline void append_inter_departure(std::vector<SamplePoint>& path,
                                   double b_prev, double w_prev, double t_j,
                                   double w_at_t, double rho) {
    if (t_j <= b_prev) return;
    if (w_prev > 0.0 && w_at_t <= 0.0) {
        const double hit = b_prev + w_prev / rho;
        if (hit < t_j) path.push_back({hit, 0.0});
    }
    path.push_back({t_j, w_at_t});
}

}  // namespace regulator::detail
