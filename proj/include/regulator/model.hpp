#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace regulator {

// Absolute tolerance for time/bits comparisons. The workload dynamics are
// piecewise linear with exact slopes, so one tolerance is enough to keep
// branch decisions stable at breakpoints.
inline constexpr double eps = 1e-9;

// Raised when a requested configuration cannot work (infeasible grid,
// burst budget exhausted, ...). The CLI maps it to its own exit code.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One packet arrival. Indices are 1-based; arrival_start is the instant the
// first bit arrives; length is in bits.
struct Packet {
    int index = 0;
    double arrival_start = 0.0;
    double length = 0.0;
};

// Packet stream on a link of fixed capacity (bits per time unit). Packets
// must not overlap: each one is fully received before the next begins.
struct Trace {
    double capacity = 1.0;
    std::vector<Packet> packets;
};

struct RegulatorParams {
    double rate = 0.0;        // drain rate of the virtual workload queue
    double capacity = 1.0;    // link capacity, must exceed rate
    double max_length = 0.0;  // largest admissible packet, bits
};

// Per-packet shaping record. buffer_departure is when the packet leaves the
// FCFS buffer for the server; departure_start/complete bracket the output
// transmission; sigma_star is the burst budget applied to this packet.
struct ShapedPacket {
    int index = 0;
    double arrival_start = 0.0;
    double buffer_departure = 0.0;
    double departure_start = 0.0;
    double departure_complete = 0.0;
    double sigma_star = 0.0;
    double delay = 0.0;  // departure_start - arrival_start
};

struct TraceViolation {
    int index = 0;  // offending packet, 1-based
    std::string reason;
};

// Every packet violating arrival monotonicity, transmission non-overlap, or
// positive length. Empty result means the trace is admissible.
std::vector<TraceViolation> validate_trace(const Trace& trace);

// Instant the packet is completely received: arrival_start + length/capacity.
double full_arrival_time(const Packet& p, double capacity);

}  // namespace regulator
