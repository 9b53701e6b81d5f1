#include "sigver/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "sigver/errors.hpp"

namespace sigver {

int subsample_index(int i, int length) {
    const long long r = static_cast<long long>(i - 1) * (length - 1);
    return 1 + static_cast<int>(std::llround(static_cast<double>(r) / 3.0));
}

SegmentCode subsample4(const Ucss& s) {
    const int len = s.length();
    if (len < 2) throw InputError("subsample4: segment needs at least 2 points");

    SegmentCode code;
    code.length = len;
    for (int i = 1; i <= 4; ++i) {
        const int idx = subsample_index(i, len);
        const Point& p = s.points[static_cast<std::size_t>(idx) - 1];
        code.coords[static_cast<std::size_t>(i - 1) * 2] = p.x;
        code.coords[static_cast<std::size_t>(i - 1) * 2 + 1] = p.y;
    }
    return code;
}

SegmentCode reversed(const SegmentCode& c) {
    SegmentCode out;
    out.length = c.length;
    for (int i = 0; i < 4; ++i) {
        out.coords[static_cast<std::size_t>(i) * 2] = c.coords[static_cast<std::size_t>(3 - i) * 2];
        out.coords[static_cast<std::size_t>(i) * 2 + 1] = c.coords[static_cast<std::size_t>(3 - i) * 2 + 1];
    }
    return out;
}

double code_distance(const SegmentCode& u, const SegmentCode& v) {
    double sum = 0.0;
    for (std::size_t k = 0; k < 8; ++k) {
        const double d = u.coords[k] - v.coords[k];
        sum += d * d;
    }
    return sum;
}

double code_distance_min_oriented(const SegmentCode& u, const SegmentCode& v) {
    double fwd = 0.0, rev = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t c = 0; c < 2; ++c) {
            const double df = u.coords[i * 2 + c] - v.coords[i * 2 + c];
            const double dr = u.coords[i * 2 + c] - v.coords[(3 - i) * 2 + c];
            fwd += df * df;
            rev += dr * dr;
        }
    }
    return std::min(fwd, rev);
}

double length_difference(const SegmentCode& u, const SegmentCode& v) {
    return static_cast<double>(std::abs(u.length - v.length));
}

}  // namespace sigver
