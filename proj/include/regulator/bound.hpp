#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace regulator {

// Non-increasing tail-bound function on [0, horizon], stored as piecewise
// linear breakpoints with value(0) = 1. Evaluation is flat beyond the last
// breakpoint, so the function stays defined on threshold grids that extend
// past the horizon.
struct BoundFunction {
    std::vector<std::pair<double, double>> breakpoints;  // (gamma, value)
    double horizon = 0.0;

    double value(double gamma) const;
    // Slope of the segment ending at gamma; zero in the flat extension.
    double left_slope(double gamma) const;
    // Throws std::invalid_argument unless breakpoints are strictly increasing
    // in gamma, positive, non-increasing in value and start at (0, 1).
    void validate() const;
};

enum class FbarVariant { full, modified };
enum class GridSpacing { uniform };

// Threshold grid T_1 < ... < T_M with burst budgets sigma_i = T_i - delta and
// the piecewise-linear lower approximation of the bound function ("fbar").
//
// fbar layout: 1 on [0, T_1); per interval [T_i, T_{i+1}) for i = 1..M-2 a
// flat stretch on [T_i, split_i) followed by a linear piece anchored at
// (T_{i+1}, anchor_i); the full variant has no flat stretch (split_i = T_i);
// tail_value on [T_{M-1}, T_M]; 0 beyond T_M.
struct BoundGrid {
    double delta = 0.0;
    double horizon = 0.0;
    std::vector<double> thresholds;  // T_1..T_M
    std::vector<double> bursts;      // sigma_1..sigma_M
    FbarVariant variant = FbarVariant::full;

    struct Piece {
        double split = 0.0;
        double flat_value = 0.0;
        double anchor = 0.0;  // value at the right endpoint
        double slope = 0.0;
    };
    std::vector<Piece> pieces;       // one per interval, i = 1..M-2
    double tail_value = 0.0;
    std::vector<double> fbar_at_threshold;  // cached fbar(T_i)

    std::size_t size() const { return thresholds.size(); }
};

// (1 - rho/capacity) * max_length: the unavoidable output-bound slack from
// packetized transmission. Requires 0 < rho < capacity.
double delta(double rho, double capacity, double max_length);

// Largest grid size the horizon admits: floor(horizon/delta) - 1. Throws
// config_error when the result is not positive.
int m_max(double horizon, double delta_value);

// Uniform grid T_i = i * t_last / m for i = 1..m, feasibility-checked
// (T_1 >= delta, spacing >= delta, t_last >= horizon + delta; when the grid
// lies inside the horizon, also horizon - T_{M-1} >= delta). fbar is not yet
// built; pass the result through build_fbar_full or build_fbar_modified.
BoundGrid build_grid(double horizon, int m, double t_last, double delta_value,
                     FbarVariant variant = FbarVariant::full,
                     GridSpacing spacing = GridSpacing::uniform);

// Main fbar: on each [T_i, T_{i+1}) the chord of f over the interval if the
// chord stays below f, otherwise the tangent with f's left slope at T_{i+1}.
BoundGrid build_fbar_full(const BoundFunction& f, BoundGrid grid);

// Variant for coarse grids (sigma_{i+1} > T_i): flat f(sigma_{i+1}) on
// [T_i, sigma_{i+1}), then the chord from (sigma_{i+1}, f(sigma_{i+1})) to
// (T_{i+1}, f(T_{i+1})) or the tangent if the chord overshoots f.
BoundGrid build_fbar_modified(const BoundFunction& f, BoundGrid grid);

double eval_fbar(const BoundGrid& grid, double gamma);

// Linear segments [x0, x1, y(x0), y(x1)] of fbar, for export.
struct FbarSegment {
    double x0, x1, y0, y1;
};
std::vector<FbarSegment> fbar_segments(const BoundGrid& grid);

}  // namespace regulator
