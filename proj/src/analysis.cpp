#include "regulator/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace regulator {

DelayStats delay_stats(const std::vector<ShapedPacket>& packets) {
    if (packets.empty())
        throw std::invalid_argument("delay_stats: empty run");
    double sum = 0.0;
    for (const ShapedPacket& p : packets) sum += p.delay;
    const double mean = sum / static_cast<double>(packets.size());
    double sq = 0.0;
    for (const ShapedPacket& p : packets)
        sq += (p.delay - mean) * (p.delay - mean);
    return {mean, std::sqrt(sq / static_cast<double>(packets.size()))};
}

namespace {

double time_at_or_above(const std::vector<SamplePoint>& path, double zeta) {
    double total = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double t0 = path[k - 1].t, w0 = path[k - 1].w;
        const double t1 = path[k].t, w1 = path[k].w;
        if (w0 >= zeta && w1 >= zeta) {
            total += t1 - t0;
        } else if (w0 >= zeta || w1 >= zeta) {
            const double cross = t0 + (zeta - w0) / (w1 - w0) * (t1 - t0);
            total += w0 >= zeta ? cross - t0 : t1 - cross;
        }
    }
    return total;
}

}  // namespace

std::vector<double> workload_ccdf(const std::vector<SamplePoint>& path,
                                  const std::vector<double>& gammas) {
    if (path.size() < 2 || path.back().t <= path.front().t)
        throw std::invalid_argument("workload_ccdf: path spans no time");
    const double span = path.back().t - path.front().t;
    std::vector<double> out;
    out.reserve(gammas.size());
    for (double g : gammas) out.push_back(time_at_or_above(path, g) / span);
    return out;
}

double recompute_overshoot_oracle(const std::vector<SamplePoint>& path,
                                  double zeta) {
    for (std::size_t k = 1; k < path.size(); ++k)
        if (path[k].t < path[k - 1].t)
            throw std::invalid_argument("overshoot oracle: unsorted path");
    return time_at_or_above(path, zeta);
}

std::vector<BoundViolation> verify_bound(const std::vector<SamplePoint>& path,
                                         const BoundFunction& f,
                                         const std::vector<double>& gammas,
                                         double from_time) {
    std::vector<BoundViolation> out;
    if (path.size() < 2) return out;
    for (double gamma : gammas) {
        const double bound = f.value(gamma);
        double above = 0.0;  // accumulated time with w >= gamma
        auto check = [&](double t) {
            if (t <= from_time || t <= 0.0) return;
            const double o = above / t;
            if (o > bound + eps) out.push_back({t, gamma, o, bound});
        };
        for (std::size_t k = 1; k < path.size(); ++k) {
            const double t0 = path[k - 1].t, w0 = path[k - 1].w;
            const double t1 = path[k].t, w1 = path[k].w;
            if (w0 >= gamma && w1 >= gamma) {
                above += t1 - t0;
            } else if (w0 >= gamma) {
                // falls through gamma inside the segment: o peaks there
                const double cross =
                    t0 + (gamma - w0) / (w1 - w0) * (t1 - t0);
                above += cross - t0;
                check(cross);
            } else if (w1 >= gamma) {
                const double up = t0 + (gamma - w0) / (w1 - w0) * (t1 - t0);
                above += t1 - up;
            }
            check(t1);
        }
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    for (std::size_t k = 0; k < n; ++k)
        out.push_back(lo + (hi - lo) * static_cast<double>(k) /
                               static_cast<double>(n - 1));
    return out;
}

}  // namespace regulator
