#pragma once

#include "regulator/bound.hpp"
#include "regulator/model.hpp"
#include "regulator/workload.hpp"

#include <cstddef>
#include <vector>

namespace regulator {

struct DelayStats {
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
};

DelayStats delay_stats(const std::vector<ShapedPacket>& packets);

// Fraction of time in [0, path.back().t] the piecewise-linear workload path
// spends at or above each gamma.
std::vector<double> workload_ccdf(const std::vector<SamplePoint>& path,
                                  const std::vector<double>& gammas);

// Time spent at or above zeta integrated directly from the path; independent
// check for the incremental ledger.
double recompute_overshoot_oracle(const std::vector<SamplePoint>& path,
                                  double zeta);

struct BoundViolation {
    double t = 0.0;
    double gamma = 0.0;
    double ratio = 0.0;
    double bound = 0.0;
};

// Records every (t, gamma) with o_gamma(t) > f(gamma) + eps for t >= from_time.
// The ratio's local maxima sit where the path crosses gamma downward, so those
// instants are tested along with every path breakpoint.
std::vector<BoundViolation> verify_bound(const std::vector<SamplePoint>& path,
                                         const BoundFunction& f,
                                         const std::vector<double>& gammas,
                                         double from_time = 0.0);

std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace regulator
