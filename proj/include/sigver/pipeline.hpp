#pragma once

#include <vector>

#include "sigver/encoding.hpp"
#include "sigver/imaging.hpp"
#include "sigver/points_io.hpp"
#include "sigver/projection.hpp"
#include "sigver/ucss.hpp"

namespace sigver {

struct PipelineParams {
    double max_step = 0.5;    // oversampling step so consecutive pixels stay 8-adjacent
    int dilation_radius = 2;  // disk radius; yields roughly 4-5 px wide strokes
};

// Online signature -> offline bitmap (oversample, rasterize, dilate).
BinaryImage render_offline(const OnlineSignature& sig, const PipelineParams& params);

struct NormalizedSegments {
    std::vector<Ucss> segments;  // normalized coordinates
    int isolated_dropped = 0;
    bool degenerate_axis = false;
};

// Skeleton image -> normalized segment set. The graph topology is built on the
// pixel grid; the emitted coordinates are those pixels after centering the whole
// skeleton point set at the origin and scaling each axis to unit variance.
NormalizedSegments extract_normalized_segments(const BinaryImage& skeleton);

// Everything scoring needs for one signature.
struct SignatureFeatures {
    std::vector<Ucss> segments;
    std::vector<SegmentCode> codes;
    Profile profile;  // vertical projection of the offline bitmap
    int isolated_dropped = 0;
};

SignatureFeatures extract_features(const OnlineSignature& sig, const PipelineParams& params);

}  // namespace sigver
