#pragma once

#include "regulator/model.hpp"
#include "regulator/workload.hpp"

#include <vector>

namespace regulator {

// Instant the packet may enter the server: max of its own arrival and the
// previous packet's complete departure (FCFS, one packet in the server).
double buffer_departure(double s_j, double b_prev);

// Departure start given the server-side workload at buffer_departure:
// any excess over sigma is drained at rho before transmission begins.
double departure_time(double w_internal, double sigma, double rho,
                      double s_tilde);

// Workload samples retained per packet for invariant checks.
struct DetPacketState {
    double input_workload_at_start = 0.0;  // raw input stream, at arrival_start
    double internal_workload = 0.0;        // server side, at buffer_departure
    double output_at_complete = 0.0;       // output side, at departure_complete
};

struct DetRun {
    std::vector<ShapedPacket> packets;
    std::vector<DetPacketState> states;
    std::vector<SamplePoint> output_path;  // output-side workload breakpoints
};

// Fixed-budget shaper: delays packets so the output workload never exceeds
// sigma at any departure start (and sigma + delta overall). Rejects invalid
// traces and packets longer than params.max_length.
DetRun shape_deterministic(const Trace& trace, double sigma,
                           const RegulatorParams& params);

}  // namespace regulator
