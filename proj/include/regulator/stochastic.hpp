#pragma once

#include "regulator/bound.hpp"
#include "regulator/model.hpp"
#include "regulator/overshoot.hpp"
#include "regulator/workload.hpp"

#include <cstddef>
#include <vector>

namespace regulator {

// Per-packet budget selectors. `basic` checks each candidate against fbar at
// one threshold; `checked` adds margin-tightened checks at every lower
// threshold, which keeps the bound valid at all times; `fast` reproduces
// `checked` exactly with O(M) work per packet.
enum class Algorithm { basic, checked, fast };

struct StochPacketState {
    int floor_index = 0;  // smallest budget index admitting zero delay, 1-based
    int sigma_index = 0;  // chosen budget index, 1-based
};

struct LedgerSnapshot {
    double t = 0.0;               // complete departure
    std::vector<double> ratios;   // overshoot ratio per threshold
};

struct StochRun {
    std::vector<ShapedPacket> packets;
    std::vector<StochPacketState> states;
    std::vector<SamplePoint> output_path;
    OvershootLedger ledger;                      // state after the last packet
    std::vector<LedgerSnapshot> ledger_history;  // filled when keep_history
};

// Smallest index k with bursts[k-1] >= w_internal (1-based). Workloads
// above the top budget but within the top threshold clamp to the top index
// (the candidate then drains before releasing); beyond that throws
// config_error ("T_M too small").
int candidate_floor(double w_internal, const BoundGrid& grid);

struct CandidateTimes {
    double departure_start = 0.0;
    double departure_complete = 0.0;
};

// Departure times packet j would get under budget sigma_l.
CandidateTimes candidate_departure(double s_tilde, double w_internal,
                                   double sigma_l, double rho, double capacity,
                                   double length);

// Safety margin subtracted from fbar(T_i) when testing a candidate budget
// with index ell (both 1-based, i < ell): the worst-case ratio growth until
// the workload next falls to T_i; for i = ell-1, at least the fbar step to
// the next threshold. The growth term matters when fbar is flat across the
// step (a bare step margin of zero would let post-departure drains push the
// ratio over the bound between departures).
double epsilon_margin(std::size_t i, std::size_t ell, double b_j,
                      double w_out_at_b, const BoundGrid& grid, double rho);

// Everything a per-packet selection depends on besides the ledger/grid.
struct SelectInput {
    double s_tilde = 0.0;
    double w_internal = 0.0;  // server-side workload at s_tilde
    double length = 0.0;
    int floor_index = 0;      // candidate_floor(w_internal, grid)
};

int select_basic(const OvershootLedger& ledger, const BoundGrid& grid,
                 const RegulatorParams& params, const SelectInput& in);
int select_checked(const OvershootLedger& ledger, const BoundGrid& grid,
                   const RegulatorParams& params, const SelectInput& in);
int select_fast(const OvershootLedger& ledger, const BoundGrid& grid,
                const RegulatorParams& params, const SelectInput& in);

// Variable-budget shaper: per packet, pick the largest budget whose projected
// overshoot ratios stay under fbar, then delay as the fixed-budget shaper
// would with that budget. Throws config_error with the packet index when no
// budget is large enough.
StochRun shape_stochastic(const Trace& trace, const BoundGrid& grid,
                          const RegulatorParams& params, Algorithm alg,
                          bool keep_history = false);

}  // namespace regulator
