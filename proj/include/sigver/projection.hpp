#pragma once

#include <vector>

#include "sigver/dtw.hpp"
#include "sigver/imaging.hpp"

namespace sigver {

// Per-column foreground counts over the foreground bounding box, scaled to unit
// sum. Horizontal placement of the ink therefore does not matter.
using Profile = std::vector<double>;

Profile vertical_profile(const BinaryImage& img);

// Itakura-masked profile DTW with the unconstrained fallback when the mask admits
// no path (result flagged feasible = false in that case).
WarpResult profile_distance(const Profile& p, const Profile& q);

struct ProjectionEnrollment {
    std::vector<Profile> references;
    double norm = 1.0;       // leave-one-out mean self-distance, floored
    bool norm_floored = false;
    int fallback_pairs = 0;  // reference pairs that needed the unconstrained fallback
};

ProjectionEnrollment make_projection_enrollment(std::vector<Profile> references);

// Mean DTW distance from the test profile to every reference, divided by the
// enrollment's leave-one-out normalization.
double projection_score(const Profile& test, const ProjectionEnrollment& enrollment);

}  // namespace sigver
