#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sigver/geometry.hpp"
#include "sigver/imaging.hpp"

namespace sigver {

enum class SegmentKind : std::uint8_t { internal, extremity, isolated, cycle };

const char* segment_kind_name(SegmentKind k);
SegmentKind parse_segment_kind(std::string_view s);

// One unambiguously ordered run of skeleton points. The point order is meaningful
// up to overall direction; consecutive points were 8-adjacent pixels before any
// coordinate normalization.
struct Ucss {
    std::vector<Point> points;
    SegmentKind kind = SegmentKind::isolated;

    int length() const { return static_cast<int>(points.size()); }
};

Ucss reversed(const Ucss& s);

// 8-connected pixel graph of a skeleton. Vertices are stored in raster order
// (y, x); per-vertex neighbor slots follow the fixed clockwise order starting
// from north (N, NE, E, SE, S, SW, W, NW), with -1 marking an absent neighbor.
struct SkeletonGraph {
    std::vector<Pixel> vertices;
    std::vector<std::array<std::int32_t, 8>> neighbors;
    std::vector<std::uint8_t> degree;

    std::size_t size() const { return vertices.size(); }
};

SkeletonGraph build_graph(const BinaryImage& skeleton);
SkeletonGraph build_graph(std::vector<Pixel> pixels);

struct ExtractionResult {
    std::vector<Ucss> segments;
    int isolated_dropped = 0;  // degree-0 pixels carry no direction and are skipped
};

// Decomposes the graph into segments delimited by endpoints (degree 1) and
// junctions (degree > 2). Junction pixels terminate every incident run and appear
// in each of them; an edge directly joining two junctions becomes a 2-point
// segment. Components where every vertex has degree 2 are emitted as one
// cycle-kind segment starting at the smallest (y, x) vertex and heading toward its
// smaller (y, x) neighbor. Output order and orientations are deterministic.
ExtractionResult extract_segments(const SkeletonGraph& graph);

}  // namespace sigver
