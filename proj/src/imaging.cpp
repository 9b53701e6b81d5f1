#include "sigver/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "sigver/errors.hpp"

namespace sigver {

BinaryImage::BinaryImage(int width, int height) : w_(width), h_(height) {
    if (width < 1 || height < 1) throw InputError("BinaryImage: dimensions must be >= 1");
    data_.assign(static_cast<std::size_t>(width) * height, 0);
}

void BinaryImage::set(int x, int y, bool v) {
    if (x < 0 || y < 0 || x >= w_ || y >= h_) throw InputError("BinaryImage::set out of bounds");
    data_[static_cast<std::size_t>(y) * w_ + x] = v ? 1 : 0;
}

int BinaryImage::foreground_count() const {
    int n = 0;
    for (std::uint8_t v : data_) n += v;
    return n;
}

std::vector<Pixel> BinaryImage::foreground() const {
    std::vector<Pixel> out;
    for (int y = 0; y < h_; ++y) {
        for (int x = 0; x < w_; ++x) {
            if (data_[static_cast<std::size_t>(y) * w_ + x]) out.push_back({x, y});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spline oversampling
// ---------------------------------------------------------------------------

namespace {

Point lerp(Point a, Point b, double t) {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

// Barry-Goldman evaluation of one chordal Catmull-Rom span [p1, p2].
// Knot values are cumulative chord lengths; t lies in [t1, t2].
Point catmull_rom_span(Point p0, Point p1, Point p2, Point p3, double t0, double t1, double t2,
                       double t3, double t) {
    const Point a1 = lerp(p0, p1, (t - t0) / (t1 - t0));
    const Point a2 = lerp(p1, p2, (t - t1) / (t2 - t1));
    const Point a3 = lerp(p2, p3, (t - t2) / (t3 - t2));
    const Point b1 = lerp(a1, a2, (t - t0) / (t2 - t0));
    const Point b2 = lerp(a2, a3, (t - t1) / (t3 - t1));
    return lerp(b1, b2, (t - t1) / (t2 - t1));
}

struct SplineData {
    std::vector<Point> pts;    // deduplicated knots with phantom endpoints at front/back
    std::vector<double> knot;  // chordal knot vector aligned with pts
};

// Collapses consecutive duplicate points and adds reflected phantom endpoints.
SplineData prepare_spline(const std::vector<Point>& input) {
    SplineData sd;
    std::vector<Point> knots;
    for (const Point& p : input) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw InputError("oversample_spline: non-finite coordinate");
        }
        if (knots.empty() || !(knots.back() == p)) knots.push_back(p);
    }
    if (knots.size() < 2) {
        // Degenerate path (all points coincide); nothing to interpolate.
        sd.pts = knots;
        return sd;
    }

    const std::size_t n = knots.size();
    sd.pts.resize(n + 2);
    std::copy(knots.begin(), knots.end(), sd.pts.begin() + 1);
    sd.pts.front() = {2 * knots[0].x - knots[1].x, 2 * knots[0].y - knots[1].y};
    sd.pts.back() = {2 * knots[n - 1].x - knots[n - 2].x, 2 * knots[n - 1].y - knots[n - 2].y};

    sd.knot.resize(n + 2);
    sd.knot[0] = 0.0;
    for (std::size_t i = 1; i < n + 2; ++i) {
        sd.knot[i] = sd.knot[i - 1] + distance(sd.pts[i - 1], sd.pts[i]);
    }
    return sd;
}

Point eval_span(const SplineData& sd, std::size_t span, double t) {
    // span indexes the interval [pts[span+1], pts[span+2]] of the padded array.
    return catmull_rom_span(sd.pts[span], sd.pts[span + 1], sd.pts[span + 2], sd.pts[span + 3],
                            sd.knot[span], sd.knot[span + 1], sd.knot[span + 2], sd.knot[span + 3], t);
}

}  // namespace

Point spline_point(const std::vector<Point>& knots, double u) {
    const SplineData sd = prepare_spline(knots);
    if (sd.knot.empty()) return sd.pts.empty() ? Point{} : sd.pts.front();
    const std::size_t n_spans = sd.pts.size() - 3;  // one span per original knot interval
    double clamped = std::clamp(u, 0.0, static_cast<double>(n_spans));
    std::size_t span = static_cast<std::size_t>(std::min(clamped, static_cast<double>(n_spans - 1)));
    const double frac = clamped - static_cast<double>(span);
    const double t = sd.knot[span + 1] + frac * (sd.knot[span + 2] - sd.knot[span + 1]);
    return eval_span(sd, span, t);
}

OnlineSignature oversample_spline(const OnlineSignature& sig, double max_step) {
    if (sig.points.size() < 2) throw InputError("oversample_spline: need at least 2 points");
    if (!(max_step > 0.0)) throw InputError("oversample_spline: max_step must be positive");

    const SplineData sd = prepare_spline(sig.points);
    OnlineSignature out;
    out.signer_id = sig.signer_id;
    out.sample_id = sig.sample_id;
    out.label = sig.label;

    if (sd.knot.empty()) {
        // All input points coincide.
        out.points = {sig.points.front(), sig.points.back()};
        return out;
    }

    const std::size_t n_spans = sd.pts.size() - 3;
    out.points.push_back(sd.pts[1]);
    std::vector<Point> samples;
    for (std::size_t span = 0; span < n_spans; ++span) {
        const double t1 = sd.knot[span + 1];
        const double t2 = sd.knot[span + 2];
        const double chord = t2 - t1;
        int n = std::max(1, static_cast<int>(std::ceil(chord / max_step)));
        // The curve can be slightly longer than the chord; refine until every gap fits.
        for (int attempt = 0; attempt < 24; ++attempt) {
            samples.clear();
            Point prev = sd.pts[span + 1];
            bool ok = true;
            for (int k = 1; k <= n; ++k) {
                const double t = t1 + chord * (static_cast<double>(k) / n);
                Point p = (k == n) ? sd.pts[span + 2] : eval_span(sd, span, t);
                if (distance(prev, p) > max_step) {
                    ok = false;
                    break;
                }
                samples.push_back(p);
                prev = p;
            }
            if (ok) break;
            n *= 2;
        }
        out.points.insert(out.points.end(), samples.begin(), samples.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rasterization and morphology
// ---------------------------------------------------------------------------

namespace {
constexpr int kRasterMargin = 4;

long long round_half_away(double v) { return std::llround(v); }
}  // namespace

BinaryImage rasterize(const OnlineSignature& sig) {
    if (sig.points.empty()) throw InputError("rasterize: empty signature");

    long long min_x = std::numeric_limits<long long>::max();
    long long min_y = std::numeric_limits<long long>::max();
    long long max_x = std::numeric_limits<long long>::min();
    long long max_y = std::numeric_limits<long long>::min();
    std::vector<Pixel> px;
    px.reserve(sig.points.size());
    for (const Point& p : sig.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InputError("rasterize: non-finite coordinate");
        const long long x = round_half_away(p.x);
        const long long y = round_half_away(p.y);
        if (std::llabs(x) > (1LL << 30) || std::llabs(y) > (1LL << 30)) {
            throw InputError("rasterize: coordinate out of supported range");
        }
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
        px.push_back({static_cast<int>(x), static_cast<int>(y)});
    }

    const long long w = max_x - min_x + 1 + 2 * kRasterMargin;
    const long long h = max_y - min_y + 1 + 2 * kRasterMargin;
    if (w > 1 << 20 || h > 1 << 20) throw InputError("rasterize: image would be unreasonably large");

    BinaryImage img(static_cast<int>(w), static_cast<int>(h));
    for (const Pixel& p : px) {
        img.set(p.x - static_cast<int>(min_x) + kRasterMargin, p.y - static_cast<int>(min_y) + kRasterMargin,
                true);
    }
    return img;
}

BinaryImage dilate(const BinaryImage& img, int radius) {
    if (radius < 0) throw InputError("dilate: radius must be >= 0");
    if (radius == 0) return img;

    std::vector<Pixel> disk;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dx * dx + dy * dy <= radius * radius) disk.push_back({dx, dy});
        }
    }

    BinaryImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (!img.at(x, y)) continue;
            for (const Pixel& d : disk) {
                const int nx = x + d.x;
                const int ny = y + d.y;
                if (nx >= 0 && ny >= 0 && nx < img.width() && ny < img.height()) out.set(nx, ny, true);
            }
        }
    }
    return out;
}

namespace {

// Neighbor order for thinning: N, NE, E, SE, S, SW, W, NW.
constexpr int kNbrDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kNbrDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

}  // namespace

BinaryImage skeletonize(const BinaryImage& img) {
    BinaryImage cur = img;
    if (cur.empty()) return cur;

    std::vector<Pixel> to_delete;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            to_delete.clear();
            for (int y = 0; y < cur.height(); ++y) {
                for (int x = 0; x < cur.width(); ++x) {
                    if (!cur.at(x, y)) continue;
                    bool nb[8];
                    int count = 0;
                    for (int k = 0; k < 8; ++k) {
                        nb[k] = cur.at(x + kNbrDx[k], y + kNbrDy[k]);
                        count += nb[k];
                    }
                    if (count < 2 || count > 6) continue;
                    int transitions = 0;
                    for (int k = 0; k < 8; ++k) {
                        if (!nb[k] && nb[(k + 1) % 8]) ++transitions;
                    }
                    if (transitions != 1) continue;
                    const bool n = nb[0], e = nb[2], s = nb[4], w = nb[6];
                    if (pass == 0) {
                        if ((n && e && s) || (e && s && w)) continue;
                    } else {
                        if ((n && e && w) || (n && s && w)) continue;
                    }
                    to_delete.push_back({x, y});
                }
            }
            for (const Pixel& p : to_delete) cur.set(p.x, p.y, false);
            if (!to_delete.empty()) changed = true;
        }
    }
    return cur;
}

int connected_components(const BinaryImage& img) {
    if (img.empty()) return 0;
    std::vector<std::uint8_t> visited(static_cast<std::size_t>(img.width()) * img.height(), 0);
    auto idx = [&](int x, int y) { return static_cast<std::size_t>(y) * img.width() + x; };

    int components = 0;
    std::vector<Pixel> stack;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (!img.at(x, y) || visited[idx(x, y)]) continue;
            ++components;
            stack.push_back({x, y});
            visited[idx(x, y)] = 1;
            while (!stack.empty()) {
                const Pixel p = stack.back();
                stack.pop_back();
                for (int k = 0; k < 8; ++k) {
                    const int nx = p.x + kNbrDx[k];
                    const int ny = p.y + kNbrDy[k];
                    if (img.at(nx, ny) && !visited[idx(nx, ny)]) {
                        visited[idx(nx, ny)] = 1;
                        stack.push_back({nx, ny});
                    }
                }
            }
        }
    }
    return components;
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

NormalizedPointSet normalize_points(const std::vector<Point>& points) {
    if (points.size() < 2) throw InputError("normalize_points: need at least 2 points");

    const double n = static_cast<double>(points.size());
    double sum_x = 0.0, sum_y = 0.0;
    for (const Point& p : points) {
        sum_x += p.x;
        sum_y += p.y;
    }
    const double mean_x = sum_x / n;
    const double mean_y = sum_y / n;

    double var_x = 0.0, var_y = 0.0;
    for (const Point& p : points) {
        var_x += (p.x - mean_x) * (p.x - mean_x);
        var_y += (p.y - mean_y) * (p.y - mean_y);
    }
    var_x /= n;  // population variance
    var_y /= n;

    NormalizedPointSet out;
    out.center = {mean_x, mean_y};
    out.degenerate_x = (var_x == 0.0);
    out.degenerate_y = (var_y == 0.0);
    out.scale = {out.degenerate_x ? 1.0 : std::sqrt(var_x), out.degenerate_y ? 1.0 : std::sqrt(var_y)};

    out.points.reserve(points.size());
    for (const Point& p : points) {
        out.points.push_back({(p.x - mean_x) / out.scale.x, (p.y - mean_y) / out.scale.y});
    }
    return out;
}

// ---------------------------------------------------------------------------
// PBM I/O
// ---------------------------------------------------------------------------

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string pbm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

}  // namespace

BinaryImage read_pbm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open PBM file: " + path.string());

    const std::string magic = pbm_token(in);
    if (magic != "P1" && magic != "P4") throw IoError(path.string() + ": not a P1/P4 PBM file");

    long w = 0, h = 0;
    try {
        w = std::stol(pbm_token(in));
        h = std::stol(pbm_token(in));
    } catch (const std::exception&) {
        throw IoError(path.string() + ": malformed PBM header");
    }
    if (w < 1 || h < 1 || w > (1 << 20) || h > (1 << 20)) {
        throw IoError(path.string() + ": unreasonable PBM dimensions");
    }

    BinaryImage img(static_cast<int>(w), static_cast<int>(h));
    if (magic == "P1") {
        for (long y = 0; y < h; ++y) {
            for (long x = 0; x < w; ++x) {
                int c;
                do {
                    c = in.get();
                    if (c == '#') {
                        while ((c = in.get()) != EOF && c != '\n') {
                        }
                    }
                } while (c != EOF && std::isspace(c));
                if (c != '0' && c != '1') throw IoError(path.string() + ": malformed P1 payload");
                if (c == '1') img.set(static_cast<int>(x), static_cast<int>(y), true);
            }
        }
    } else {
        const long row_bytes = (w + 7) / 8;
        std::vector<char> row(static_cast<std::size_t>(row_bytes));
        for (long y = 0; y < h; ++y) {
            in.read(row.data(), row_bytes);
            if (in.gcount() != row_bytes) throw IoError(path.string() + ": truncated P4 payload");
            for (long x = 0; x < w; ++x) {
                const unsigned char byte = static_cast<unsigned char>(row[static_cast<std::size_t>(x) / 8]);
                if (byte & (0x80u >> (x % 8))) img.set(static_cast<int>(x), static_cast<int>(y), true);
            }
        }
    }
    return img;
}

void write_pbm(const std::filesystem::path& path, const BinaryImage& img, bool ascii) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write PBM file: " + path.string());

    if (ascii) {
        out << "P1\n" << img.width() << " " << img.height() << "\n";
        for (int y = 0; y < img.height(); ++y) {
            std::string row;
            row.reserve(static_cast<std::size_t>(img.width()) * 2);
            for (int x = 0; x < img.width(); ++x) {
                row += img.at(x, y) ? '1' : '0';
                row += (x + 1 < img.width()) ? ' ' : '\n';
            }
            out << row;
        }
    } else {
        out << "P4\n" << img.width() << " " << img.height() << "\n";
        const int row_bytes = (img.width() + 7) / 8;
        std::vector<char> row(static_cast<std::size_t>(row_bytes));
        for (int y = 0; y < img.height(); ++y) {
            std::fill(row.begin(), row.end(), 0);
            for (int x = 0; x < img.width(); ++x) {
                if (img.at(x, y)) row[static_cast<std::size_t>(x) / 8] |= static_cast<char>(0x80u >> (x % 8));
            }
            out.write(row.data(), row_bytes);
        }
    }
    if (!out) throw IoError("short write: " + path.string());
}

}  // namespace sigver
