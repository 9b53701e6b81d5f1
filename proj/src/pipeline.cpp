#include "sigver/pipeline.hpp"

namespace sigver {

BinaryImage render_offline(const OnlineSignature& sig, const PipelineParams& params) {
    const OnlineSignature dense = oversample_spline(sig, params.max_step);
    return dilate(rasterize(dense), params.dilation_radius);
}

NormalizedSegments extract_normalized_segments(const BinaryImage& skeleton) {
    NormalizedSegments out;
    const SkeletonGraph graph = build_graph(skeleton);
    if (graph.size() < 2) {
        out.isolated_dropped = static_cast<int>(graph.size());
        return out;
    }

    std::vector<Point> pts;
    pts.reserve(graph.size());
    for (const Pixel& p : graph.vertices) {
        pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
    }
    const NormalizedPointSet norm = normalize_points(pts);
    out.degenerate_axis = norm.degenerate_x || norm.degenerate_y;

    ExtractionResult extraction = extract_segments(graph);
    out.isolated_dropped = extraction.isolated_dropped;
    out.segments = std::move(extraction.segments);
    for (Ucss& s : out.segments) {
        for (Point& p : s.points) {
            p.x = (p.x - norm.center.x) / norm.scale.x;
            p.y = (p.y - norm.center.y) / norm.scale.y;
        }
    }
    return out;
}

SignatureFeatures extract_features(const OnlineSignature& sig, const PipelineParams& params) {
    const BinaryImage offline = render_offline(sig, params);

    SignatureFeatures out;
    out.profile = vertical_profile(offline);

    NormalizedSegments ns = extract_normalized_segments(skeletonize(offline));
    out.segments = std::move(ns.segments);
    out.isolated_dropped = ns.isolated_dropped;

    out.codes.reserve(out.segments.size());
    for (const Ucss& s : out.segments) out.codes.push_back(subsample4(s));
    return out;
}

}  // namespace sigver
