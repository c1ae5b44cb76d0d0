#pragma once

#include "regulator/bound.hpp"
#include "regulator/workload.hpp"

#include <cstddef>
#include <vector>

namespace regulator {

// Accumulated time the output workload has spent at or above each threshold
// T_1..T_{M-1}, advanced in closed form at every complete departure.
struct OvershootLedger {
    std::vector<double> thresholds;
    std::vector<double> durations;
    double as_of = 0.0;     // last complete departure
    double workload = 0.0;  // output workload at as_of
};

// Time spent at or above zeta along one rising linear segment [a,b] going
// from w1 to w2 = w1 + (capacity-rho)*(b-a).
double alpha_increment(double a, double b, double zeta, double w1, double w2,
                       double capacity, double rho);

// Time spent at or above zeta along one falling segment [a,b] going from w1
// down to w2 = max(w1 - rho*(b-a), 0).
double beta_increment(double a, double b, double zeta, double w1, double w2,
                      double rho);

// Advance through one departure: the workload falls from ledger.workload at
// ledger.as_of down to w_at_t at time t_j (clipped at zero), then rises to
// w_at_b at time b_j.
void ledger_advance(OvershootLedger& ledger, double t_j, double b_j,
                    double w_at_t, double w_at_b, double rho, double capacity);

// O_zeta(t)/t for the ledger's threshold at zeta_index (0-based); 0 at t = 0.
double overshoot_ratio(const OvershootLedger& ledger, std::size_t zeta_index,
                       double t);

// Time in [0,t] with zeta1 <= W < zeta2, measured on an exported sample path.
// Requires zeta1 < zeta2.
double limited_overshoot(const std::vector<SamplePoint>& path, double zeta1,
                         double zeta2, double t);

// Minimum additional time the workload would have to stay at or above zeta
// before the overshoot ratio reaches alpha_bound; 0 if the bound is already
// unreachable-or-broken at the earliest possible crossing.
double violation_distance(double t, double overshoot, double workload,
                          double zeta, double alpha_bound, double capacity,
                          double rho);

// Per-threshold violation distances after a complete departure. Thresholds
// above the packet's chosen budget are measured against fbar at the next grid
// point (the margin the selector itself relies on); the rest against fbar at
// the threshold. The last grid point T_M is excluded: the workload can never
// reach it.
struct DistProfile {
    std::vector<double> distance;      // index i -> threshold T_{i+1}
    std::vector<bool> above_budget;    // true when T_i > sigma_star
};
DistProfile dist_profile(const OvershootLedger& ledger, const BoundGrid& grid,
                         double b_j, double w_at_b, double sigma_star,
                         double capacity, double rho);

}  // namespace regulator
