#include "sigver/projection.hpp"

#include <algorithm>

#include "sigver/errors.hpp"

namespace sigver {

namespace {
constexpr double kNormFloor = 1e-9;
}

Profile vertical_profile(const BinaryImage& img) {
    int min_x = img.width(), max_x = -1;
    std::vector<double> counts(static_cast<std::size_t>(std::max(img.width(), 1)), 0.0);
    double total = 0.0;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (!img.at(x, y)) continue;
            counts[static_cast<std::size_t>(x)] += 1.0;
            total += 1.0;
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
        }
    }
    if (max_x < 0) throw InputError("vertical_profile: image has no foreground");

    Profile out(counts.begin() + min_x, counts.begin() + max_x + 1);
    for (double& v : out) v /= total;
    return out;
}

WarpResult profile_distance(const Profile& p, const Profile& q) {
    const WarpResult masked = dtw_profile(p, q);
    if (masked.feasible) return masked;
    WarpResult fallback = dtw_profile_unconstrained(p, q);
    fallback.feasible = false;
    return fallback;
}

ProjectionEnrollment make_projection_enrollment(std::vector<Profile> references) {
    if (references.size() < 2) {
        throw EnrollmentError("projection enrollment needs at least 2 references");
    }
    for (const Profile& r : references) {
        if (r.size() < 2) throw EnrollmentError("projection enrollment: profile too short");
    }

    ProjectionEnrollment e;
    e.references = std::move(references);

    // Mirrors the test-side aggregation: each reference is scored as the mean
    // distance to the remaining references, then averaged.
    const std::size_t n = e.references.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const WarpResult r = profile_distance(e.references[i], e.references[j]);
            if (!r.feasible) ++e.fallback_pairs;
            acc += r.cost;
        }
        sum += acc / static_cast<double>(n - 1);
    }
    e.norm = sum / static_cast<double>(n);
    if (e.norm < kNormFloor) {
        e.norm = kNormFloor;
        e.norm_floored = true;
    }
    return e;
}

double projection_score(const Profile& test, const ProjectionEnrollment& enrollment) {
    double sum = 0.0;
    for (const Profile& r : enrollment.references) {
        sum += profile_distance(test, r).cost;
    }
    const double mean = sum / static_cast<double>(enrollment.references.size());
    return mean / enrollment.norm;
}

}  // namespace sigver
