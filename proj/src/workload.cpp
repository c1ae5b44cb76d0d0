#include "regulator/workload.hpp"

#include <algorithm>
#include <stdexcept>

namespace regulator {

double arrivals_in_interval(const Trace& trace, double s, double t) {
    if (s < 0.0 || s > t)
        throw std::invalid_argument("arrivals_in_interval: need 0 <= s <= t");
    double bits = 0.0;
    for (const Packet& p : trace.packets) {
        if (p.arrival_start >= t) break;
        const double lo = std::max(s, p.arrival_start);
        const double hi = std::min(t, full_arrival_time(p, trace.capacity));
        if (hi > lo) bits += trace.capacity * (hi - lo);
    }
    return bits;
}

double workload_at(const Trace& trace, double rho, double t) {
    if (t < 0.0)
        throw std::invalid_argument("workload_at: t must be nonnegative");
    const double total = arrivals_in_interval(trace, 0.0, t);
    double best = std::max(total - rho * t, 0.0);  // s = 0 and s = t
    double before = 0.0;  // bits fully transmitted before the next candidate
    for (const Packet& p : trace.packets) {
        if (p.arrival_start >= t) break;
        best = std::max(best,
                        total - before - rho * (t - p.arrival_start));
        const double a = full_arrival_time(p, trace.capacity);
        if (a > t) break;  // straddling packet: interior s never beats s_k, t
        before += p.length;
        best = std::max(best, total - before - rho * (t - a));
    }
    return best;
}

WorkloadState evolve(WorkloadState state, double to, bool transmitting) {
    if (to < state.last_time - eps)
        throw std::invalid_argument("evolve: time regression");
    const double dt = std::max(0.0, to - state.last_time);
    if (transmitting)
        state.last_value += (state.capacity - state.rate) * dt;
    else
        state.last_value = std::max(state.last_value - state.rate * dt, 0.0);
    state.last_time = std::max(to, state.last_time);
    return state;
}

bool check_sigma_rho(const Trace& trace, double sigma, double rho) {
    for (const Packet& p : trace.packets) {
        const double a = full_arrival_time(p, trace.capacity);
        if (workload_at(trace, rho, a) > sigma + eps) return false;
    }
    return true;
}

std::vector<SamplePoint> sample_path(const Trace& trace, double rho) {
    std::vector<SamplePoint> out;
    out.push_back({0.0, 0.0});
    double t = 0.0;
    double w = 0.0;
    const double c = trace.capacity;
    for (const Packet& p : trace.packets) {
        const double s = p.arrival_start;
        if (s > t) {
            const double hit = t + w / rho;
            if (w > 0.0 && hit < s) {
                out.push_back({hit, 0.0});
                w = 0.0;
            } else {
                w = std::max(w - rho * (s - t), 0.0);
            }
            out.push_back({s, w});
            t = s;
        }
        const double a = s + p.length / c;
        w += (c - rho) * (a - t);
        out.push_back({a, w});
        t = a;
    }
    if (w > 0.0) out.push_back({t + w / rho, 0.0});
    return out;
}

}  // namespace regulator
