#pragma once

#include <span>

#include "sigver/geometry.hpp"
#include "sigver/ucss.hpp"

namespace sigver {

struct WarpResult {
    double cost = 0.0;     // +inf when infeasible
    bool feasible = true;  // an admissible path existed under the active constraint

    bool infeasible() const { return !feasible; }
};

// Dynamic Time Warping with steps {(1,0),(0,1),(1,1)} and squared Euclidean local
// cost, restricted to the Itakura parallelogram: a cell (i, j) is admissible when
// the path slope through it can stay within [1/2, 2] from both endpoints. Returns
// an infeasible result (cost = +inf) when no admissible path reaches the corner,
// which happens in particular when the length ratio exceeds 2.
WarpResult dtw_itakura(std::span<const Point> a, std::span<const Point> b);

// Same recurrence without the mask; always feasible.
WarpResult dtw_unconstrained(std::span<const Point> a, std::span<const Point> b);

// min(DTW(a, b), DTW(a, reverse(b))) under the Itakura mask. When both
// orientations are infeasible, falls back to the unconstrained minimum and flags
// the result (feasible = false) so callers can report it.
WarpResult dtw_min_oriented(std::span<const Point> a, std::span<const Point> b);
WarpResult dtw_min_oriented(const Ucss& a, const Ucss& b);

// 1-D variant for projection profiles, local cost (p_i - q_j)^2.
WarpResult dtw_profile(std::span<const double> p, std::span<const double> q);
WarpResult dtw_profile_unconstrained(std::span<const double> p, std::span<const double> q);

}  // namespace sigver
