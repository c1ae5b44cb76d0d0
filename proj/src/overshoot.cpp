#include "regulator/overshoot.hpp"

#include "regulator/model.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace regulator {

double alpha_increment(double a, double b, double zeta, double w1, double w2,
                       double capacity, double rho) {
    if (zeta <= w1) return b - a;
    if (zeta <= w2) return (w2 - zeta) / (capacity - rho);
    return 0.0;
}

double beta_increment(double a, double b, double zeta, double w1, double w2,
                      double rho) {
    if (zeta <= w2) return b - a;
    if (zeta <= w1) return (w1 - zeta) / rho;
    return 0.0;
}

void ledger_advance(OvershootLedger& ledger, double t_j, double b_j,
                    double w_at_t, double w_at_b, double rho,
                    double capacity) {
    if (t_j < ledger.as_of - eps || b_j < t_j - eps)
        throw std::invalid_argument("ledger_advance: time regression");
    for (std::size_t i = 0; i < ledger.thresholds.size(); ++i) {
        const double zeta = ledger.thresholds[i];
        ledger.durations[i] +=
            beta_increment(ledger.as_of, t_j, zeta, ledger.workload, w_at_t,
                           rho) +
            alpha_increment(t_j, b_j, zeta, w_at_t, w_at_b, capacity, rho);
    }
    ledger.as_of = b_j;
    ledger.workload = w_at_b;
}

double overshoot_ratio(const OvershootLedger& ledger, std::size_t zeta_index,
                       double t) {
    if (t <= 0.0) return 0.0;
    return ledger.durations.at(zeta_index) / t;
}

namespace {

// Time with w >= zeta along the linear segment (t0,w0) -> (t1,w1).
double segment_time_above(double t0, double w0, double t1, double w1,
                          double zeta) {
    if (w0 >= zeta && w1 >= zeta) return t1 - t0;
    if (w0 < zeta && w1 < zeta) return 0.0;
    const double cross = t0 + (zeta - w0) / (w1 - w0) * (t1 - t0);
    return w0 >= zeta ? cross - t0 : t1 - cross;
}

}  // namespace

double limited_overshoot(const std::vector<SamplePoint>& path, double zeta1,
                         double zeta2, double t) {
    if (!(zeta1 < zeta2))
        throw std::invalid_argument("limited_overshoot: need zeta1 < zeta2");
    double total = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) {
        double t0 = path[k - 1].t, w0 = path[k - 1].w;
        double t1 = path[k].t, w1 = path[k].w;
        if (t0 >= t) break;
        if (t1 > t) {  // clip the segment at t
            w1 = w0 + (w1 - w0) * (t - t0) / (t1 - t0);
            t1 = t;
        }
        total += segment_time_above(t0, w0, t1, w1, zeta1) -
                 segment_time_above(t0, w0, t1, w1, zeta2);
    }
    return total;
}

double violation_distance(double t, double overshoot, double workload,
                          double zeta, double alpha_bound, double capacity,
                          double rho) {
    if (alpha_bound >= 1.0) return std::numeric_limits<double>::infinity();
    const double t_hat =
        t + std::max(zeta - workload, 0.0) / (capacity - rho);
    const double ratio_at_hat = t_hat > 0.0 ? overshoot / t_hat : 0.0;
    if (ratio_at_hat > alpha_bound) return 0.0;
    return (t_hat - t) / (1.0 - alpha_bound) +
           (alpha_bound * t - overshoot) / (1.0 - alpha_bound);
}

DistProfile dist_profile(const OvershootLedger& ledger, const BoundGrid& grid,
                         double b_j, double w_at_b, double sigma_star,
                         double capacity, double rho) {
    const std::size_t m = grid.size();
    DistProfile out;
    out.distance.reserve(m - 1);
    out.above_budget.reserve(m - 1);
    for (std::size_t i = 1; i < m; ++i) {  // threshold T_i, 1-based
        const double threshold = grid.thresholds[i - 1];
        const bool above = threshold > sigma_star;
        const double bound = above ? grid.fbar_at_threshold[i]
                                   : grid.fbar_at_threshold[i - 1];
        out.distance.push_back(violation_distance(b_j,
                                                  ledger.durations[i - 1],
                                                  w_at_b, threshold, bound,
                                                  capacity, rho));
        out.above_budget.push_back(above);
    }
    return out;
}

}  // namespace regulator
