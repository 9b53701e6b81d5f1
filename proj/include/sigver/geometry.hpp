#pragma once

#include <cmath>
#include <vector>

namespace sigver {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }

// Pixel coordinates. Canonical ordering is raster order: (y, x).
struct Pixel {
    int x = 0;
    int y = 0;
};

inline bool operator==(Pixel a, Pixel b) { return a.x == b.x && a.y == b.y; }
inline bool operator<(Pixel a, Pixel b) {
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
}

inline double squared_distance(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }

// Chebyshev distance; 8-adjacency means this equals 1.
inline int chebyshev(Pixel a, Pixel b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

}  // namespace sigver
