#include "regulator/model.hpp"

namespace regulator {

std::vector<TraceViolation> validate_trace(const Trace& trace) {
    std::vector<TraceViolation> out;
    if (trace.capacity <= 0.0) {
        out.push_back({0, "capacity must be positive"});
        return out;
    }
    const auto& ps = trace.packets;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const Packet& p = ps[k];
        if (p.length <= 0.0)
            out.push_back({p.index, "length must be positive"});
        if (p.arrival_start < 0.0)
            out.push_back({p.index, "arrival_start must be nonnegative"});
        if (k > 0) {
            const Packet& q = ps[k - 1];
            if (p.arrival_start <= q.arrival_start)
                out.push_back({p.index, "arrival_start must increase"});
            else if (full_arrival_time(q, trace.capacity) >
                     p.arrival_start + eps)
                out.push_back(
                    {p.index, "arrival overlaps previous transmission"});
        }
    }
    return out;
}

double full_arrival_time(const Packet& p, double capacity) {
    return p.arrival_start + p.length / capacity;
}

}  // namespace regulator
