#include "regulator/stochastic.hpp"

#include "regulator/deterministic.hpp"
#include "shaper_detail.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace regulator {

int candidate_floor(double w_internal, const BoundGrid& grid) {
    const auto it = std::lower_bound(grid.bursts.begin(), grid.bursts.end(),
                                     w_internal);
    if (it != grid.bursts.end())
        return static_cast<int>(it - grid.bursts.begin()) + 1;
    // The workload can exceed the top burst budget by up to one packet of
    // slack (the post-departure level never exceeds the top threshold); the
    // top candidate then starts with a positive drain.
    if (w_internal <= grid.thresholds.back() + eps)
        return static_cast<int>(grid.size());
    throw config_error("T_M too small: no burst budget covers workload " +
                       std::to_string(w_internal));
}

CandidateTimes candidate_departure(double s_tilde, double w_internal,
                                   double sigma_l, double rho, double capacity,
                                   double length) {
    CandidateTimes out;
    out.departure_start = departure_time(w_internal, sigma_l, rho, s_tilde);
    out.departure_complete = out.departure_start + length / capacity;
    return out;
}

namespace {

// Slack that keeps a threshold's ratio safe until the workload next falls to
// the threshold: the post-departure drain inflates the ratio's numerator and
// denominator by the same amount, so a ratio that clears fbar minus this
// margin at the departure still clears fbar at every instant after it. The
// same amount transfers between candidates: a lower budget adds equal drain
// to numerator and denominator, so clearing the margin-tightened bound at one
// candidate implies clearing it (recomputed) at all lower ones.
double workload_margin(std::size_t i, double b_j, double w_out_at_b,
                       const BoundGrid& grid, double rho) {
    return (w_out_at_b - grid.thresholds[i - 1]) *
           (1.0 - grid.fbar_at_threshold[i - 1]) / (rho * b_j);
}

}  // namespace

double epsilon_margin(std::size_t i, std::size_t ell, double b_j,
                      double w_out_at_b, const BoundGrid& grid, double rho) {
    if (i < 1 || i + 1 > ell)
        throw std::invalid_argument("epsilon_margin: need 1 <= i <= ell-1");
    const double drain = workload_margin(i, b_j, w_out_at_b, grid, rho);
    if (i == ell - 1) {
        const double step =
            grid.fbar_at_threshold[ell - 2] - grid.fbar_at_threshold[ell - 1];
        return std::max(step, drain);
    }
    return drain;
}

namespace {

// Ledger duration for one threshold, projected through the hypothetical
// events (t_j, b_j) without mutating the ledger.
double projected_duration(const OvershootLedger& ledger, std::size_t idx,
                          double t_j, double b_j, double w_at_t, double w_at_b,
                          double rho, double capacity) {
    const double zeta = ledger.thresholds[idx];
    return ledger.durations[idx] +
           beta_increment(ledger.as_of, t_j, zeta, ledger.workload, w_at_t,
                          rho) +
           alpha_increment(t_j, b_j, zeta, w_at_t, w_at_b, capacity, rho);
}

struct Candidate {
    CandidateTimes times;
    double w_at_t = 0.0;
    double w_at_b = 0.0;
};

Candidate make_candidate(const RegulatorParams& params, const SelectInput& in,
                         double sigma) {
    Candidate c;
    c.times = candidate_departure(in.s_tilde, in.w_internal, sigma,
                                  params.rate, params.capacity, in.length);
    c.w_at_t = std::min(in.w_internal, sigma);
    c.w_at_b = c.w_at_t + (1.0 - params.rate / params.capacity) * in.length;
    return c;
}

}  // namespace

int select_basic(const OvershootLedger& ledger, const BoundGrid& grid,
                 const RegulatorParams& params, const SelectInput& in) {
    for (int ell = in.floor_index; ell >= 2; --ell) {
        const Candidate c =
            make_candidate(params, in, grid.bursts[static_cast<std::size_t>(ell - 1)]);
        const double duration = projected_duration(
            ledger, static_cast<std::size_t>(ell - 2), c.times.departure_start,
            c.times.departure_complete, c.w_at_t, c.w_at_b, params.rate,
            params.capacity);
        const double ratio = duration / c.times.departure_complete;
        if (ratio <= grid.fbar_at_threshold[static_cast<std::size_t>(ell - 1)] + eps)
            return ell;
    }
    return 1;
}

int select_checked(const OvershootLedger& ledger, const BoundGrid& grid,
                   const RegulatorParams& params, const SelectInput& in) {
    for (int ell = in.floor_index; ell >= 2; --ell) {
        const Candidate c =
            make_candidate(params, in, grid.bursts[static_cast<std::size_t>(ell - 1)]);
        bool ok = true;
        for (int i = 1; i < ell; ++i) {
            const double duration = projected_duration(
                ledger, static_cast<std::size_t>(i - 1),
                c.times.departure_start, c.times.departure_complete, c.w_at_t,
                c.w_at_b, params.rate, params.capacity);
            const double ratio = duration / c.times.departure_complete;
            const double bound =
                grid.fbar_at_threshold[static_cast<std::size_t>(i - 1)] -
                epsilon_margin(static_cast<std::size_t>(i),
                               static_cast<std::size_t>(ell),
                               c.times.departure_complete, c.w_at_b, grid,
                               params.rate);
            if (ratio > bound + eps) {
                ok = false;
                break;
            }
        }
        if (ok) return ell;
    }
    return 1;
}

int select_fast(const OvershootLedger& ledger, const BoundGrid& grid,
                const RegulatorParams& params, const SelectInput& in) {
    const int k = in.floor_index;
    if (k < 2) return 1;
    const Candidate at_k =
        make_candidate(params, in, grid.bursts[static_cast<std::size_t>(k - 1)]);
    const double b_k = at_k.times.departure_complete;
    const double drain_k =
        std::max(in.w_internal - grid.bursts[static_cast<std::size_t>(k - 1)],
                 0.0) /
        params.rate;

    // Longest prefix of thresholds whose ratios, at the floor candidate,
    // clear fbar with the candidate-invariant workload margin.
    int m = 0;
    std::vector<double> duration_at_k(static_cast<std::size_t>(k - 1));
    for (int ell = 1; ell <= k - 1; ++ell) {
        const double duration = projected_duration(
            ledger, static_cast<std::size_t>(ell - 1),
            at_k.times.departure_start, b_k, at_k.w_at_t, at_k.w_at_b,
            params.rate, params.capacity);
        duration_at_k[static_cast<std::size_t>(ell - 1)] = duration;
        const double bound =
            grid.fbar_at_threshold[static_cast<std::size_t>(ell - 1)] -
            workload_margin(static_cast<std::size_t>(ell), b_k, at_k.w_at_b,
                            grid, params.rate);
        if (duration / b_k > bound + eps) break;
        ++m;
    }

    // A candidate needs the workload margin at every threshold below its
    // own, so only candidates up to one past the prefix stay in play; the
    // threshold right below additionally has to clear fbar outright.
    // Rescale the cached durations by the extra drain each lower budget adds.
    for (int ell = m + 1; ell >= 2; --ell) {
        const double sigma = grid.bursts[static_cast<std::size_t>(ell - 1)];
        const double shift =
            std::max(in.w_internal - sigma, 0.0) / params.rate - drain_k;
        const double b_ell = b_k + shift;
        const double ratio =
            (duration_at_k[static_cast<std::size_t>(ell - 2)] + shift) / b_ell;
        if (ratio <= grid.fbar_at_threshold[static_cast<std::size_t>(ell - 1)] + eps)
            return ell;
    }
    return 1;
}

StochRun shape_stochastic(const Trace& trace, const BoundGrid& grid,
                          const RegulatorParams& params, Algorithm alg,
                          bool keep_history) {
    detail::require_shapable(trace, params);
    if (grid.size() < 2 || grid.fbar_at_threshold.size() != grid.size())
        throw std::invalid_argument("grid has no fbar; build it first");

    const double rho = params.rate;
    const double c = params.capacity;
    const std::size_t m = grid.size();

    StochRun run;
    run.packets.reserve(trace.packets.size());
    run.states.reserve(trace.packets.size());
    run.output_path.push_back({0.0, 0.0});
    run.ledger.thresholds.assign(grid.thresholds.begin(),
                                 grid.thresholds.end() - 1);
    run.ledger.durations.assign(m - 1, 0.0);

    auto select = alg == Algorithm::basic     ? select_basic
                  : alg == Algorithm::checked ? select_checked
                                              : select_fast;

    double b_prev = 0.0;
    double w_out = 0.0;
    for (const Packet& p : trace.packets) {
        const double s_tilde = buffer_departure(p.arrival_start, b_prev);
        const double w1 = std::max(w_out - rho * (s_tilde - b_prev), 0.0);
        SelectInput in{s_tilde, w1, p.length, 0};
        try {
            in.floor_index = candidate_floor(w1, grid);
        } catch (const config_error& e) {
            throw config_error(std::string(e.what()) + " (packet " +
                               std::to_string(p.index) + ")");
        }
        const int chosen = select(run.ledger, grid, params, in);
        const double sigma =
            grid.bursts[static_cast<std::size_t>(chosen - 1)];
        const double t_j = departure_time(w1, sigma, rho, s_tilde);
        const double b_j = t_j + p.length / c;
        const double w_at_t = std::min(w1, sigma);
        const double w_at_b = w_at_t + (1.0 - rho / c) * p.length;

        ledger_advance(run.ledger, t_j, b_j, w_at_t, w_at_b, rho, c);
        run.packets.push_back({p.index, p.arrival_start, s_tilde, t_j, b_j,
                               sigma, t_j - p.arrival_start});
        run.states.push_back({in.floor_index, chosen});
        detail::append_inter_departure(run.output_path, b_prev, w_out, t_j,
                                       w_at_t, rho);
        run.output_path.push_back({b_j, w_at_b});
        if (keep_history) {
            LedgerSnapshot snap;
            snap.t = b_j;
            snap.ratios.resize(m - 1);
            for (std::size_t i = 0; i + 1 < m; ++i)
                snap.ratios[i] = overshoot_ratio(run.ledger, i, b_j);
            run.ledger_history.push_back(std::move(snap));
        }
        b_prev = b_j;
        w_out = w_at_b;
    }
    if (w_out > 0.0)
        run.output_path.push_back({b_prev + w_out / rho, 0.0});
    return run;
}

}  // namespace regulator
