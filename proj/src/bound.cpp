#include "regulator/bound.hpp"

#include "regulator/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace regulator {

double BoundFunction::value(double gamma) const {
    if (breakpoints.empty())
        throw std::invalid_argument("bound function has no breakpoints");
    if (gamma <= breakpoints.front().first) return breakpoints.front().second;
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
        if (gamma <= breakpoints[k].first) {
            const auto& [x0, y0] = breakpoints[k - 1];
            const auto& [x1, y1] = breakpoints[k];
            return y0 + (y1 - y0) * (gamma - x0) / (x1 - x0);
        }
    }
    return breakpoints.back().second;  // flat extension past the last point
}

double BoundFunction::left_slope(double gamma) const {
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
        if (gamma <= breakpoints[k].first) {
            const auto& [x0, y0] = breakpoints[k - 1];
            const auto& [x1, y1] = breakpoints[k];
            return (y1 - y0) / (x1 - x0);
        }
    }
    return 0.0;
}

void BoundFunction::validate() const {
    if (breakpoints.empty())
        throw std::invalid_argument("bound function has no breakpoints");
    if (breakpoints.front().first != 0.0 ||
        std::abs(breakpoints.front().second - 1.0) > 1e-12)
        throw std::invalid_argument("bound function must start at (0, 1)");
    for (std::size_t k = 0; k < breakpoints.size(); ++k) {
        if (breakpoints[k].second <= 0.0)
            throw std::invalid_argument("bound function values must be positive");
        if (k > 0) {
            if (breakpoints[k].first <= breakpoints[k - 1].first)
                throw std::invalid_argument(
                    "bound function breakpoints must strictly increase");
            if (breakpoints[k].second > breakpoints[k - 1].second + 1e-12)
                throw std::invalid_argument(
                    "bound function must be non-increasing");
        }
    }
    if (horizon <= 0.0)
        throw std::invalid_argument("bound function horizon must be positive");
}

double delta(double rho, double capacity, double max_length) {
    if (!(rho > 0.0) || !(rho < capacity))
        throw std::invalid_argument("need 0 < rho < capacity");
    return (1.0 - rho / capacity) * max_length;
}

int m_max(double horizon, double delta_value) {
    if (!(delta_value > 0.0))
        throw std::invalid_argument("delta must be positive");
    const int m = static_cast<int>(std::floor(horizon / delta_value + 1e-12)) - 1;
    if (m < 2)
        throw config_error("horizon admits no grid: floor(T/delta) - 1 = " +
                           std::to_string(m) + " < 2");
    return m;
}

BoundGrid build_grid(double horizon, int m, double t_last, double delta_value,
                     FbarVariant variant, GridSpacing spacing) {
    if (m < 2) throw config_error("grid needs M >= 2");
    if (!(delta_value > 0.0)) throw config_error("grid needs delta > 0");
    if (!(horizon > 0.0)) throw config_error("grid needs T > 0");
    (void)spacing;  // only uniform spacing is implemented

    BoundGrid grid;
    grid.delta = delta_value;
    grid.horizon = horizon;
    grid.variant = variant;
    grid.thresholds.resize(static_cast<std::size_t>(m));
    grid.bursts.resize(static_cast<std::size_t>(m));
    const double step = t_last / m;
    for (int i = 1; i <= m; ++i) {
        grid.thresholds[static_cast<std::size_t>(i - 1)] = i * step;
        grid.bursts[static_cast<std::size_t>(i - 1)] = i * step - delta_value;
    }

    if (grid.thresholds.front() + eps < delta_value)
        throw config_error("infeasible grid: T_1 >= delta violated (T_1 = " +
                           std::to_string(grid.thresholds.front()) + ")");
    for (int i = 1; i < m; ++i) {
        const double gap = grid.thresholds[static_cast<std::size_t>(i)] -
                           grid.thresholds[static_cast<std::size_t>(i - 1)];
        if (gap + eps < delta_value)
            throw config_error(
                "infeasible grid: T_{i+1} - T_i >= delta violated at i = " +
                std::to_string(i));
    }
    if (t_last + eps < horizon + delta_value)
        throw config_error("infeasible grid: T_M >> T violated (T_M = " +
                           std::to_string(t_last) + ", T = " +
                           std::to_string(horizon) + ")");
    const double t_penultimate = grid.thresholds[static_cast<std::size_t>(m - 2)];
    if (t_penultimate < horizon && horizon - t_penultimate + eps < delta_value)
        throw config_error(
            "infeasible grid: T - T_{M-1} >= delta violated (T_{M-1} = " +
            std::to_string(t_penultimate) + ")");
    return grid;
}

namespace {

// True when f lies on or above the line through (x1, y1) with slope `slope`
// over [lo, x1]: checked at lo, x1 and every f breakpoint strictly between.
bool line_below_f(const BoundFunction& f, double lo, double x1, double y1,
                  double slope) {
    auto ok = [&](double x) {
        return f.value(x) >= y1 + slope * (x - x1) - 1e-12;
    };
    if (!ok(lo) || !ok(x1)) return false;
    for (const auto& [x, y] : f.breakpoints) {
        (void)y;
        if (x > lo && x < x1 && !ok(x)) return false;
    }
    return true;
}

BoundGrid build_fbar(const BoundFunction& f, BoundGrid grid, bool modified) {
    f.validate();
    const std::size_t m = grid.size();
    grid.pieces.clear();
    grid.pieces.reserve(m >= 2 ? m - 2 : 0);
    for (std::size_t i = 0; i + 2 < m; ++i) {  // interval [T_i, T_{i+1}), 1-based i
        const double x0 = grid.thresholds[i];
        const double x1 = grid.thresholds[i + 1];
        const double y1 = f.value(x1);
        BoundGrid::Piece piece;
        piece.split = modified ? std::clamp(grid.bursts[i + 1], x0, x1) : x0;
        piece.flat_value = f.value(piece.split);
        piece.anchor = y1;
        const double chord = (y1 - piece.flat_value) / (x1 - piece.split);
        piece.slope = line_below_f(f, piece.split, x1, y1, chord)
                          ? chord
                          : f.left_slope(x1);
        grid.pieces.push_back(piece);
    }
    grid.tail_value = f.value(grid.horizon);
    grid.fbar_at_threshold.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        grid.fbar_at_threshold[i] = eval_fbar(grid, grid.thresholds[i]);
    return grid;
}

}  // namespace

BoundGrid build_fbar_full(const BoundFunction& f, BoundGrid grid) {
    grid.variant = FbarVariant::full;
    return build_fbar(f, std::move(grid), false);
}

BoundGrid build_fbar_modified(const BoundFunction& f, BoundGrid grid) {
    grid.variant = FbarVariant::modified;
    return build_fbar(f, std::move(grid), true);
}

double eval_fbar(const BoundGrid& grid, double gamma) {
    const std::size_t m = grid.size();
    if (m < 2) throw std::invalid_argument("grid needs at least two thresholds");
    if (gamma < grid.thresholds.front()) return 1.0;
    if (gamma > grid.thresholds.back()) return 0.0;
    if (gamma >= grid.thresholds[m - 2]) return grid.tail_value;
    const auto it = std::upper_bound(grid.thresholds.begin(),
                                     grid.thresholds.end(), gamma);
    const std::size_t i = static_cast<std::size_t>(it - grid.thresholds.begin());
    // thresholds[i-1] <= gamma < thresholds[i], piece index i-1
    const BoundGrid::Piece& piece = grid.pieces[i - 1];
    if (gamma < piece.split) return piece.flat_value;
    return piece.anchor + piece.slope * (gamma - grid.thresholds[i]);
}

std::vector<FbarSegment> fbar_segments(const BoundGrid& grid) {
    std::vector<FbarSegment> out;
    const std::size_t m = grid.size();
    out.push_back({0.0, grid.thresholds.front(), 1.0, 1.0});
    for (std::size_t i = 0; i + 2 < m; ++i) {
        const double x0 = grid.thresholds[i];
        const double x1 = grid.thresholds[i + 1];
        const BoundGrid::Piece& piece = grid.pieces[i];
        if (piece.split > x0)
            out.push_back({x0, piece.split, piece.flat_value, piece.flat_value});
        const double y0 = piece.anchor + piece.slope * (piece.split - x1);
        out.push_back({piece.split, x1, y0, piece.anchor});
    }
    out.push_back({grid.thresholds[m - 2], grid.thresholds.back(),
                   grid.tail_value, grid.tail_value});
    return out;
}

}  // namespace regulator
