#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "oracles.hpp"
#include "sigver/errors.hpp"
#include "sigver/imaging.hpp"
#include "sigver/pipeline.hpp"
#include "sigver/rng.hpp"
#include "test_support.hpp"

using namespace sigver;
using testsupport::image_from_art;

namespace {

// Independent chordal Catmull-Rom evaluation via Hermite tangents, used as the
// oracle against the library's pyramidal form.
Point hermite_cr(Point p0, Point p1, Point p2, Point p3, double t0, double t1, double t2, double t3,
                 double s) {
    auto tangent = [](Point a, Point b, Point c, double ta, double tb, double tc) {
        const double d1 = tb - ta, d2 = tc - tb;
        return Point{((b.x - a.x) / d1 - (c.x - a.x) / (d1 + d2) + (c.x - b.x) / d2),
                     ((b.y - a.y) / d1 - (c.y - a.y) / (d1 + d2) + (c.y - b.y) / d2)};
    };
    const double h = t2 - t1;
    Point m1 = tangent(p0, p1, p2, t0, t1, t2);
    Point m2 = tangent(p1, p2, p3, t1, t2, t3);
    m1 = {m1.x * h, m1.y * h};
    m2 = {m2.x * h, m2.y * h};
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return {h00 * p1.x + h10 * m1.x + h01 * p2.x + h11 * m2.x,
            h00 * p1.y + h10 * m1.y + h01 * p2.y + h11 * m2.y};
}

Point oracle_spline(const std::vector<Point>& knots, double u) {
    const std::size_t n = knots.size();
    std::vector<Point> pts(n + 2);
    std::copy(knots.begin(), knots.end(), pts.begin() + 1);
    pts.front() = {2 * knots[0].x - knots[1].x, 2 * knots[0].y - knots[1].y};
    pts.back() = {2 * knots[n - 1].x - knots[n - 2].x, 2 * knots[n - 1].y - knots[n - 2].y};
    std::vector<double> t(n + 2);
    t[0] = 0.0;
    for (std::size_t i = 1; i < n + 2; ++i) t[i] = t[i - 1] + distance(pts[i - 1], pts[i]);

    const std::size_t span = std::min(static_cast<std::size_t>(u), n - 2);
    const double frac = u - static_cast<double>(span);
    return hermite_cr(pts[span], pts[span + 1], pts[span + 2], pts[span + 3], t[span], t[span + 1],
                      t[span + 2], t[span + 3], frac);
}

}  // namespace

TEST_CASE("oversample_spline") {
    SUBCASE("two collinear points become a dense straight run") {
        OnlineSignature sig;
        sig.points = {{0, 0}, {10, 0}};
        const OnlineSignature dense = oversample_spline(sig, 0.5);
        CHECK(dense.points.size() >= 21);
        CHECK(dense.points.front() == Point{0, 0});
        CHECK(dense.points.back() == Point{10, 0});
        for (std::size_t i = 0; i < dense.points.size(); ++i) {
            CHECK(dense.points[i].y == 0.0);
            if (i) CHECK(distance(dense.points[i - 1], dense.points[i]) <= 0.5 + 1e-12);
        }
    }

    SUBCASE("huge max_step still keeps both endpoints") {
        OnlineSignature sig;
        sig.points = {{0, 0}, {3, 4}, {6, 1}};
        const OnlineSignature dense = oversample_spline(sig, 1e6);
        CHECK(dense.points.front() == Point{0, 0});
        CHECK(dense.points.back() == Point{6, 1});
    }

    SUBCASE("square corner path stays on the spline (independent evaluation)") {
        OnlineSignature sig;
        sig.points = {{0, 0}, {10, 0}, {10, 10}, {0, 10}};
        const OnlineSignature dense = oversample_spline(sig, 0.5);

        // Nearest-distance to the independently evaluated curve, refined locally.
        const std::vector<Point> knots = sig.points;
        for (const Point& p : dense.points) {
            double best = 1e300;
            double best_u = 0.0;
            const int grid = 3 * 10 * 20;  // 10x the sampling density over 3 spans
            for (int k = 0; k <= grid; ++k) {
                const double u = 3.0 * k / grid;
                best = std::min(best, distance(p, oracle_spline(knots, u)));
                if (best == distance(p, oracle_spline(knots, u))) best_u = u;
            }
            double lo = std::max(0.0, best_u - 3.0 / grid), hi = std::min(3.0, best_u + 3.0 / grid);
            for (int it = 0; it < 80; ++it) {
                const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
                if (distance(p, oracle_spline(knots, m1)) < distance(p, oracle_spline(knots, m2))) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            best = std::min(best, distance(p, oracle_spline(knots, 0.5 * (lo + hi))));
            CHECK(best < 1e-6);
        }
    }

    SUBCASE("library evaluation matches the independent formulation") {
        Rng rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Point> knots;
            const int n = 4 + static_cast<int>(rng.below(5));
            for (int i = 0; i < n; ++i) {
                knots.push_back({rng.uniform(-20, 20), rng.uniform(-20, 20)});
            }
            for (int k = 1; k < 40; ++k) {
                const double u = (n - 1) * static_cast<double>(k) / 40.0;
                const Point a = spline_point(knots, u);
                const Point b = oracle_spline(knots, u);
                CHECK(distance(a, b) < 1e-9);
            }
        }
    }

    SUBCASE("rejects bad input") {
        OnlineSignature one;
        one.points = {{0, 0}};
        CHECK_THROWS_AS(oversample_spline(one, 0.5), InputError);
        OnlineSignature bad;
        bad.points = {{0, 0}, {std::nan(""), 1}};
        CHECK_THROWS_AS(oversample_spline(bad, 0.5), InputError);
        OnlineSignature ok;
        ok.points = {{0, 0}, {1, 1}};
        CHECK_THROWS_AS(oversample_spline(ok, 0.0), InputError);
    }
}

TEST_CASE("rasterize") {
    SUBCASE("rounding to pixels") {
        OnlineSignature sig;
        sig.points = {{0.4, 0.4}, {0.6, 0.6}};
        const BinaryImage img = rasterize(sig);
        CHECK(img.foreground_count() == 2);
        // 4-pixel margin on every side
        CHECK(img.width() == 2 + 8);
        CHECK(img.height() == 2 + 8);
        CHECK(img.at(4, 4));
        CHECK(img.at(5, 5));
    }

    SUBCASE("half rounds away from zero") {
        OnlineSignature sig;
        sig.points = {{-0.5, 0.0}, {0.5, 0.0}};
        const BinaryImage img = rasterize(sig);
        // pixels (-1,0) and (1,0): width 3 + margins
        CHECK(img.width() == 3 + 8);
        CHECK(img.at(4, 4));      // (-1,0) shifted
        CHECK(img.at(6, 4));      // (1,0)
        CHECK_FALSE(img.at(5, 4));
    }

    SUBCASE("dense straight line gives an 8-connected path") {
        OnlineSignature sig;
        for (int i = 0; i <= 90; ++i) sig.points.push_back({i * 0.1, 0.0});
        const BinaryImage img = rasterize(sig);
        CHECK(img.foreground_count() == 10);
        CHECK(connected_components(img) == 1);
    }

    SUBCASE("empty input rejected") {
        OnlineSignature sig;
        CHECK_THROWS_AS(rasterize(sig), InputError);
    }
}

TEST_CASE("dilate") {
    SUBCASE("radius 0 is identity") {
        const BinaryImage img = image_from_art({".....", "..#..", ".###.", "..#..", "....."});
        CHECK(dilate(img, 0) == img);
    }

    SUBCASE("single pixel radius 1 gives the 5-pixel cross") {
        BinaryImage img(7, 7);
        img.set(3, 3, true);
        const BinaryImage d = dilate(img, 1);
        const auto offsets = oracle::disk_offsets(1);
        CHECK(d.foreground_count() == static_cast<int>(offsets.size()));
        for (const Pixel& o : offsets) CHECK(d.at(3 + o.x, 3 + o.y));
    }

    SUBCASE("single pixel radius 2 matches disk enumeration") {
        BinaryImage img(9, 9);
        img.set(4, 4, true);
        const BinaryImage d = dilate(img, 2);
        const auto offsets = oracle::disk_offsets(2);
        CHECK(d.foreground_count() == static_cast<int>(offsets.size()));
        for (const Pixel& o : offsets) CHECK(d.at(4 + o.x, 4 + o.y));
    }

    SUBCASE("horizontal line radius 2 has 5 px tall interior columns") {
        BinaryImage img(20, 11);
        for (int x = 4; x <= 15; ++x) img.set(x, 5, true);
        const BinaryImage d = dilate(img, 2);
        for (int x = 6; x <= 13; ++x) {
            int tall = 0;
            for (int y = 0; y < d.height(); ++y) tall += d.at(x, y) ? 1 : 0;
            CHECK(tall == 5);
        }
    }

    SUBCASE("extensivity") {
        Rng rng(3);
        const OnlineSignature stroke = testsupport::random_stroke(rng);
        const BinaryImage img = rasterize(oversample_spline(stroke, 0.5));
        const BinaryImage d = dilate(img, 2);
        for (const Pixel& p : img.foreground()) CHECK(d.at(p.x, p.y));
    }
}

TEST_CASE("skeletonize") {
    SUBCASE("1-px diagonal is unchanged") {
        BinaryImage img(10, 10);
        for (int i = 1; i < 9; ++i) img.set(i, i, true);
        CHECK(skeletonize(img) == img);
    }

    SUBCASE("empty image stays empty") {
        const BinaryImage img(5, 5);
        CHECK(skeletonize(img).foreground_count() == 0);
    }

    SUBCASE("4-px wide bar thins to a line with degrees <= 2") {
        BinaryImage img(40, 12);
        for (int y = 4; y < 8; ++y) {
            for (int x = 4; x < 36; ++x) img.set(x, y, true);
        }
        const BinaryImage skel = skeletonize(img);
        CHECK(skel.foreground_count() > 0);
        const SkeletonGraph g = build_graph(skel);
        for (std::size_t v = 0; v < g.size(); ++v) CHECK(g.degree[v] <= 2);
    }

    SUBCASE("pipeline invariants on random dilated strokes") {
        Rng rng(11);
        for (int trial = 0; trial < 30; ++trial) {
            const OnlineSignature stroke = testsupport::random_stroke(rng);
            const BinaryImage img = dilate(rasterize(oversample_spline(stroke, 0.5)), 2);
            const BinaryImage skel = skeletonize(img);

            // anti-extensivity
            for (const Pixel& p : skel.foreground()) CHECK(img.at(p.x, p.y));
            // idempotence
            CHECK(skeletonize(skel) == skel);
            // component count preserved
            CHECK(connected_components(skel) == connected_components(img));
        }
    }
}

TEST_CASE("normalize_points") {
    SUBCASE("symmetric square") {
        const NormalizedPointSet n = normalize_points({{0, 0}, {2, 0}, {0, 2}, {2, 2}});
        REQUIRE(n.points.size() == 4);
        CHECK(n.points[0] == Point{-1, -1});
        CHECK(n.points[1] == Point{1, -1});
        CHECK(n.points[2] == Point{-1, 1});
        CHECK(n.points[3] == Point{1, 1});
        CHECK_FALSE(n.degenerate_x);
        CHECK_FALSE(n.degenerate_y);
    }

    SUBCASE("degenerate axis is centered but unscaled") {
        const NormalizedPointSet n = normalize_points({{0, 5}, {1, 5}, {2, 5}});
        CHECK(n.degenerate_y);
        CHECK_FALSE(n.degenerate_x);
        for (const Point& p : n.points) CHECK(p.y == 0.0);
        CHECK(n.points[0].x < 0.0);
        CHECK(n.points[2].x > 0.0);
    }

    SUBCASE("mean and std bounds on random sets") {
        Rng rng(5);
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<Point> pts;
            const int n = 2 + static_cast<int>(rng.below(40));
            for (int i = 0; i < n; ++i) {
                pts.push_back({rng.normal(50.0, 20.0), rng.normal(-10.0, 5.0)});
            }
            const NormalizedPointSet norm = normalize_points(pts);
            double mx = 0, my = 0;
            for (const Point& p : norm.points) {
                mx += p.x;
                my += p.y;
            }
            mx /= n;
            my /= n;
            CHECK(std::abs(mx) <= 1e-9);
            CHECK(std::abs(my) <= 1e-9);
            double vx = 0, vy = 0;
            for (const Point& p : norm.points) {
                vx += (p.x - mx) * (p.x - mx);
                vy += (p.y - my) * (p.y - my);
            }
            if (!norm.degenerate_x) CHECK(std::abs(std::sqrt(vx / n) - 1.0) <= 1e-9);
            if (!norm.degenerate_y) CHECK(std::abs(std::sqrt(vy / n) - 1.0) <= 1e-9);
        }
    }

    SUBCASE("too few points rejected") {
        CHECK_THROWS_AS(normalize_points({{1, 1}}), InputError);
    }
}

TEST_CASE("full conversion chain on a straight stroke yields degree <= 2 skeleton") {
    OnlineSignature sig;
    sig.points = {{0, 0}, {30, 6}};
    const BinaryImage offline = render_offline(sig, {});
    const BinaryImage skel = skeletonize(offline);
    const SkeletonGraph g = build_graph(skel);
    CHECK(g.size() > 0);
    for (std::size_t v = 0; v < g.size(); ++v) CHECK(g.degree[v] <= 2);
}

TEST_CASE("pbm round trip") {
    Rng rng(9);
    BinaryImage img(37, 23);
    for (int i = 0; i < 200; ++i) {
        img.set(static_cast<int>(rng.below(37)), static_cast<int>(rng.below(23)), true);
    }
    const auto dir = std::filesystem::temp_directory_path() / "sigver_pbm_test";
    std::filesystem::create_directories(dir);

    write_pbm(dir / "a.pbm", img, /*ascii=*/false);
    CHECK(read_pbm(dir / "a.pbm") == img);
    write_pbm(dir / "b.pbm", img, /*ascii=*/true);
    CHECK(read_pbm(dir / "b.pbm") == img);
}
