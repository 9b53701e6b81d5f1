#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sigver/geometry.hpp"
#include "sigver/points_io.hpp"

namespace sigver {

// Rectangular foreground/background bitmap. Out-of-bounds reads return background,
// which keeps neighborhood code free of border special cases.
class BinaryImage {
  public:
    BinaryImage() = default;
    BinaryImage(int width, int height);

    int width() const { return w_; }
    int height() const { return h_; }
    bool empty() const { return w_ == 0 || h_ == 0; }

    bool at(int x, int y) const {
        if (x < 0 || y < 0 || x >= w_ || y >= h_) return false;
        return data_[static_cast<std::size_t>(y) * w_ + x] != 0;
    }
    void set(int x, int y, bool v);

    int foreground_count() const;
    std::vector<Pixel> foreground() const;  // raster order (y, x)

    bool operator==(const BinaryImage& other) const {
        return w_ == other.w_ && h_ == other.h_ && data_ == other.data_;
    }

  private:
    int w_ = 0;
    int h_ = 0;
    std::vector<std::uint8_t> data_;
};

// Densifies a polyline by sampling the interpolating cubic (chordal Catmull-Rom)
// through its points until consecutive samples are at most max_step apart.
// Endpoints and interior knots are preserved exactly.
OnlineSignature oversample_spline(const OnlineSignature& sig, double max_step);

// Evaluates the same spline at an arbitrary curve parameter. u is global in
// [0, n_knots - 1]: the integer part selects the knot interval, the fractional part
// the position within it. Exposed so tests can probe the curve independently of the
// step-bounded sampling above.
Point spline_point(const std::vector<Point>& knots, double u);

// Rounds every point to a pixel (half away from zero) and places the set on a
// canvas with a 4-pixel margin on every side.
BinaryImage rasterize(const OnlineSignature& sig);

// Morphological dilation with a Euclidean disk of the given radius. The canvas is
// not grown; callers must leave enough margin (rasterize leaves 4 px).
BinaryImage dilate(const BinaryImage& img, int radius);

// Iterative two-subiteration thinning (Zhang-Suen) run to fixpoint.
BinaryImage skeletonize(const BinaryImage& img);

// Number of 8-connected foreground components.
int connected_components(const BinaryImage& img);

struct NormalizedPointSet {
    std::vector<Point> points;
    Point center;         // subtracted mean
    Point scale;          // per-axis population std used as divisor (1.0 where degenerate)
    bool degenerate_x = false;
    bool degenerate_y = false;
};

// Centers the set at the origin and scales each axis to unit population variance.
// An axis whose variance is exactly zero is left unscaled and flagged.
NormalizedPointSet normalize_points(const std::vector<Point>& points);

// PBM (portable bitmap) serialization, foreground = black (1). Reads P1 and P4,
// writes P4 by default or P1 when ascii is set.
BinaryImage read_pbm(const std::filesystem::path& path);
void write_pbm(const std::filesystem::path& path, const BinaryImage& img, bool ascii = false);

}  // namespace sigver
