#include "regulator/deterministic.hpp"

#include "shaper_detail.hpp"

#include <algorithm>
#include <stdexcept>

namespace regulator {

double buffer_departure(double s_j, double b_prev) {
    return std::max(s_j, b_prev);
}

double departure_time(double w_internal, double sigma, double rho,
                      double s_tilde) {
    return s_tilde + std::max(w_internal - sigma, 0.0) / rho;
}

DetRun shape_deterministic(const Trace& trace, double sigma,
                           const RegulatorParams& params) {
    if (sigma < 0.0)
        throw std::invalid_argument("sigma must be nonnegative");
    detail::require_shapable(trace, params);

    const double rho = params.rate;
    const double c = params.capacity;
    DetRun run;
    run.packets.reserve(trace.packets.size());
    run.states.reserve(trace.packets.size());
    run.output_path.push_back({0.0, 0.0});

    double b_prev = 0.0;
    double w_out = 0.0;   // output workload at b_prev
    double w_in = 0.0;    // input workload at previous full arrival
    double a_prev = 0.0;  // previous full arrival
    for (const Packet& p : trace.packets) {
        const double s_tilde = buffer_departure(p.arrival_start, b_prev);
        const double w1 = std::max(w_out - rho * (s_tilde - b_prev), 0.0);
        const double t_j = departure_time(w1, sigma, rho, s_tilde);
        const double b_j = t_j + p.length / c;
        const double delta_j = (1.0 - rho / c) * p.length;
        const double w_at_t = std::min(w1, sigma);
        const double w_at_b = w_at_t + delta_j;

        w_in = std::max(w_in - rho * (p.arrival_start - a_prev), 0.0);
        run.states.push_back({w_in, w1, w_at_b});
        w_in += delta_j;
        a_prev = full_arrival_time(p, trace.capacity);

        run.packets.push_back({p.index, p.arrival_start, s_tilde, t_j, b_j,
                               sigma, t_j - p.arrival_start});
        detail::append_inter_departure(run.output_path, b_prev, w_out, t_j,
                                       w_at_t, rho);
        run.output_path.push_back({b_j, w_at_b});

        b_prev = b_j;
        w_out = w_at_b;
    }
    if (w_out > 0.0)
        run.output_path.push_back({b_prev + w_out / rho, 0.0});
    return run;
}

}  // namespace regulator
