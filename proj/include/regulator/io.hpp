#pragma once

#include "regulator/analysis.hpp"
#include "regulator/bound.hpp"
#include "regulator/model.hpp"
#include "regulator/stochastic.hpp"
#include "regulator/traffic.hpp"
#include "regulator/workload.hpp"

#include <optional>
#include <string>
#include <vector>

namespace regulator {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest decimal string that round-trips the exact double.
std::string format_double(double v);

// Trace CSV: header "j,s,L", one row per packet. Capacity (and, when the
// trace came from `generate`, the source parameters) travel in a JSON sidecar
// at <path>.json.
void write_trace(const std::string& path, const Trace& trace,
                 const std::optional<SourceConfig>& source = std::nullopt);
Trace read_trace(const std::string& path);

// Shaped CSV: header "j,s,s_tilde,t,b,sigma_star,delay"; variable-budget runs
// append "k,sigma_star_index" columns.
void write_shaped(const std::string& path,
                  const std::vector<ShapedPacket>& packets);
void write_shaped(const std::string& path,
                  const std::vector<ShapedPacket>& packets,
                  const std::vector<StochPacketState>& states);
// Accepts either header; the selection columns are ignored when present.
std::vector<ShapedPacket> read_shaped(const std::string& path);

// Sample-path CSV: header "t,W", one row per breakpoint.
void write_sample_path(const std::string& path,
                       const std::vector<SamplePoint>& points);
std::vector<SamplePoint> read_sample_path(const std::string& path);

// Ledger-history CSV: header "t,T_index,o", one row per (departure,
// threshold); T_index is 1-based.
void write_ledger_history(const std::string& path,
                          const std::vector<LedgerSnapshot>& history);

// Bound spec JSON: {"f": [[gamma, value], ...], "T": .., "M": ..,
// "T_M": .., "spacing": "uniform", "variant": "full"|"modified"}.
struct BoundSpec {
    BoundFunction f;
    double horizon = 0.0;  // T
    int m = 0;             // number of grid thresholds
    double t_last = 0.0;   // T_M
    GridSpacing spacing = GridSpacing::uniform;
    FbarVariant variant = FbarVariant::full;
};
BoundSpec read_bound_spec(const std::string& path);

// Grid JSON carries thresholds, burst budgets, fbar breakpoints, and an echo
// of the bound spec it was built from, so downstream commands need only this
// one file.
void write_grid(const std::string& path, const BoundGrid& grid,
                const BoundSpec& spec);
struct GridFile {
    BoundGrid grid;
    BoundSpec spec;
};
GridFile read_grid(const std::string& path);

// Run-report JSON: delay stats, final per-threshold overshoot ratios,
// violation log, workload CCDF samples.
struct RunReport {
    DelayStats delays;
    std::vector<double> thresholds;
    std::vector<double> final_ratios;
    std::vector<BoundViolation> violations;
    std::vector<double> ccdf_gammas;
    std::vector<double> ccdf_values;
};
void write_report(const std::string& path, const RunReport& report);

}  // namespace regulator
