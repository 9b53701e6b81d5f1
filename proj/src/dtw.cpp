#include "sigver/dtw.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "sigver/errors.hpp"

namespace sigver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Admissible column range of row i (all 1-based) for lengths n, m:
//   j - 1 <= 2(i - 1),  i - 1 <= 2(j - 1)   (slope bound from the start corner)
//   m - j <= 2(n - i),  n - i <= 2(m - j)   (slope bound to the end corner)
void itakura_bounds(int i, int n, int m, int& jlo, int& jhi) {
    jlo = std::max((i + 2) / 2, m - 2 * (n - i));
    jhi = std::min(2 * i - 1, m - (n - i + 1) / 2);
    jlo = std::max(jlo, 1);
    jhi = std::min(jhi, m);
}

template <class Cost>
WarpResult dtw_run(int n, int m, bool masked, Cost d) {
    if (n < 2 || m < 2) throw InputError("dtw: sequences need at least 2 points");

    std::vector<double> prev(static_cast<std::size_t>(m), kInf);
    std::vector<double> cur(static_cast<std::size_t>(m), kInf);

    int jlo = 1, jhi = m;
    if (masked) itakura_bounds(1, n, m, jlo, jhi);
    if (jlo > jhi) return {kInf, false};
    prev[0] = d(1, 1);
    for (int j = 2; j <= jhi; ++j) prev[j - 1] = prev[j - 2] + d(1, j);

    for (int i = 2; i <= n; ++i) {
        int pjlo = jlo, pjhi = jhi;
        if (masked) {
            itakura_bounds(i, n, m, jlo, jhi);
        } else {
            jlo = 1;
            jhi = m;
        }
        if (jlo > jhi) return {kInf, false};
        std::fill(cur.begin(), cur.end(), kInf);
        for (int j = jlo; j <= jhi; ++j) {
            double best = kInf;
            if (j - 1 >= jlo) best = cur[j - 2];                                    // step (0,1)
            if (j >= pjlo && j <= pjhi) best = std::min(best, prev[j - 1]);         // step (1,0)
            if (j - 1 >= pjlo && j - 1 <= pjhi) best = std::min(best, prev[j - 2]); // step (1,1)
            cur[j - 1] = (best == kInf) ? kInf : best + d(i, j);
        }
        std::swap(prev, cur);
    }

    const double total = prev[static_cast<std::size_t>(m) - 1];
    if (total == kInf) return {kInf, false};
    return {total, true};
}

WarpResult dtw_points(std::span<const Point> a, std::span<const Point> b, bool masked, bool reverse_b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    return dtw_run(n, m, masked, [&](int i, int j) {
        const Point& pa = a[static_cast<std::size_t>(i) - 1];
        const Point& pb = b[reverse_b ? static_cast<std::size_t>(m - j) : static_cast<std::size_t>(j) - 1];
        return squared_distance(pa, pb);
    });
}

}  // namespace

WarpResult dtw_itakura(std::span<const Point> a, std::span<const Point> b) {
    return dtw_points(a, b, /*masked=*/true, /*reverse_b=*/false);
}

WarpResult dtw_unconstrained(std::span<const Point> a, std::span<const Point> b) {
    return dtw_points(a, b, /*masked=*/false, /*reverse_b=*/false);
}

WarpResult dtw_min_oriented(std::span<const Point> a, std::span<const Point> b) {
    const WarpResult fwd = dtw_points(a, b, true, false);
    const WarpResult rev = dtw_points(a, b, true, true);
    if (fwd.feasible || rev.feasible) return {std::min(fwd.cost, rev.cost), true};
    // No orientation admits a masked path (length ratio outside [1/2, 2]); fall
    // back to the unconstrained recurrence so the surrounding minimum stays finite.
    const WarpResult ufwd = dtw_points(a, b, false, false);
    const WarpResult urev = dtw_points(a, b, false, true);
    return {std::min(ufwd.cost, urev.cost), false};
}

WarpResult dtw_min_oriented(const Ucss& a, const Ucss& b) {
    return dtw_min_oriented(std::span<const Point>(a.points), std::span<const Point>(b.points));
}

WarpResult dtw_profile(std::span<const double> p, std::span<const double> q) {
    return dtw_run(static_cast<int>(p.size()), static_cast<int>(q.size()), true, [&](int i, int j) {
        const double diff = p[static_cast<std::size_t>(i) - 1] - q[static_cast<std::size_t>(j) - 1];
        return diff * diff;
    });
}

WarpResult dtw_profile_unconstrained(std::span<const double> p, std::span<const double> q) {
    return dtw_run(static_cast<int>(p.size()), static_cast<int>(q.size()), false, [&](int i, int j) {
        const double diff = p[static_cast<std::size_t>(i) - 1] - q[static_cast<std::size_t>(j) - 1];
        return diff * diff;
    });
}

}  // namespace sigver
