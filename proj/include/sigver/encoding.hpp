#pragma once

#include <array>

#include "sigver/ucss.hpp"

namespace sigver {

// Compact 9-scalar segment representation: 4 sampled (x, y) pairs plus the source
// segment's point count.
struct SegmentCode {
    std::array<double, 8> coords{};  // x1,y1,x2,y2,x3,y3,x4,y4
    int length = 0;

    Point pair(int i) const { return {coords[static_cast<std::size_t>(i) * 2], coords[static_cast<std::size_t>(i) * 2 + 1]}; }
};

// 1-based subsample index i of 4 into a segment of L points:
// round(1 + (i - 1)(L - 1) / 3), half away from zero. Hits 1 and L exactly;
// indices repeat when L < 4.
int subsample_index(int i, int length);

SegmentCode subsample4(const Ucss& s);

// Pairs in order 4,3,2,1 (the direction ambiguity mirrored into code space).
SegmentCode reversed(const SegmentCode& c);

// Accumulated squared Euclidean distance over the 8 coordinates; the length
// scalar does not participate.
double code_distance(const SegmentCode& u, const SegmentCode& v);
double code_distance_min_oriented(const SegmentCode& u, const SegmentCode& v);

double length_difference(const SegmentCode& u, const SegmentCode& v);

}  // namespace sigver
