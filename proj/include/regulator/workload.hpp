#pragma once

#include "regulator/model.hpp"

#include <vector>

namespace regulator {

// Virtual workload of a constant-rate queue, tracked event to event. Between
// events the value is linear: slope capacity-rate while a packet is being
// received, otherwise -rate clipped at zero.
struct WorkloadState {
    double rate = 0.0;
    double capacity = 1.0;
    double last_time = 0.0;
    double last_value = 0.0;
};

// Bits arriving in [s,t]: the trace transmits at link capacity while a packet
// is in transit and is silent otherwise. Requires s <= t.
double arrivals_in_interval(const Trace& trace, double s, double t);

// Brute-force workload oracle: max over s in [0,t] of
// arrivals_in_interval(s,t) - rho*(t-s). By piecewise linearity the maximum
// is attained at s in {0, packet starts, packet completions, t}.
double workload_at(const Trace& trace, double rho, double t);

// Advance the incremental state to time `to`.
WorkloadState evolve(WorkloadState state, double to, bool transmitting);

// True iff the workload under drain rate rho never exceeds sigma. The running
// maximum is attained at packet completion instants, so those are checked
// with the oracle.
bool check_sigma_rho(const Trace& trace, double sigma, double rho);

// Workload sample-path breakpoint.
struct SamplePoint {
    double t = 0.0;
    double w = 0.0;
};

// All breakpoints of the workload path of `trace` under drain rate rho:
// packet starts/completions plus drain-to-zero instants.
std::vector<SamplePoint> sample_path(const Trace& trace, double rho);

}  // namespace regulator
