#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sigver/errors.hpp"
#include "sigver/rng.hpp"
#include "sigver/scoring.hpp"
#include "test_support.hpp"

using namespace sigver;

namespace {

Ucss line_segment(double x0, double y0, double dx, double dy, int n) {
    Ucss s;
    s.kind = SegmentKind::isolated;
    for (int i = 0; i < n; ++i) {
        s.points.push_back({x0 + dx * i, y0 + dy * i});
    }
    return s;
}

// A reference set of `n_refs` signatures, each `segs` jittered copies of shared
// template segments.
std::vector<std::vector<Ucss>> jittered_refs(Rng& rng, int n_refs = 5, int segs = 6,
                                             double jitter = 0.02) {
    std::vector<Ucss> templates;
    for (int k = 0; k < segs; ++k) templates.push_back(testsupport::smooth_segment(rng, 6, 24));

    std::vector<std::vector<Ucss>> refs;
    for (int r = 0; r < n_refs; ++r) {
        std::vector<Ucss> sig;
        for (const Ucss& t : templates) {
            Ucss s = t;
            for (Point& p : s.points) {
                p.x += rng.normal(0.0, jitter);
                p.y += rng.normal(0.0, jitter);
            }
            sig.push_back(std::move(s));
        }
        refs.push_back(std::move(sig));
    }
    return refs;
}

SignatureFeatures features_from_segments(std::vector<Ucss> segments) {
    SignatureFeatures f;
    f.segments = std::move(segments);
    for (const Ucss& s : f.segments) f.codes.push_back(subsample4(s));
    return f;
}

}  // namespace

TEST_CASE("build_bag") {
    Rng rng(40);
    SUBCASE("cardinality is the sum of per-reference counts") {
        const int counts[5] = {12, 10, 11, 9, 13};
        std::vector<std::vector<Ucss>> refs;
        for (int c : counts) {
            std::vector<Ucss> sig;
            for (int k = 0; k < c; ++k) sig.push_back(testsupport::smooth_segment(rng, 4, 10));
            refs.push_back(std::move(sig));
        }
        const SegmentBag bag = build_bag(refs);
        CHECK(bag.size() == 55);
        CHECK(bag.n_refs == 5);
        CHECK(bag.count_for_ref(2) == 10);
        // leave-one-out view: everything except ref 2
        int excluded_view = 0;
        for (const BagEntry& e : bag.entries) excluded_view += (e.ref_index != 2) ? 1 : 0;
        CHECK(excluded_view == 45);
    }

    SUBCASE("single reference is an enrollment error") {
        std::vector<std::vector<Ucss>> refs(1);
        refs[0].push_back(line_segment(0, 0, 1, 0, 5));
        CHECK_THROWS_AS(build_bag(refs), EnrollmentError);
    }

    SUBCASE("a reference without segments is an enrollment error") {
        std::vector<std::vector<Ucss>> refs(2);
        refs[0].push_back(line_segment(0, 0, 1, 0, 5));
        CHECK_THROWS_AS(build_bag(refs), EnrollmentError);
    }

    SUBCASE("entries are canonically ordered") {
        const auto refs = jittered_refs(rng, 3, 4);
        const SegmentBag bag = build_bag(refs);
        for (std::size_t i = 1; i < bag.entries.size(); ++i) {
            const auto& a = bag.entries[i - 1];
            const auto& b = bag.entries[i];
            CHECK(((a.ref_index < b.ref_index) ||
                   (a.ref_index == b.ref_index && a.seg_index < b.seg_index)));
        }
    }
}

TEST_CASE("segment_cost") {
    SUBCASE("encoded mode: arithmetic and first-entry tie-break") {
        std::vector<std::vector<Ucss>> refs(2);
        refs[0].push_back(line_segment(1, 0, 1, 0, 4));  // code distance 4 from test
        refs[1].push_back(line_segment(1, 1, 1, 0, 4));  // code distance 8 from test
        const SegmentBag bag = build_bag(refs);

        const Ucss test = line_segment(0, 0, 1, 0, 4);
        const SegmentMatch m = segment_cost(test, subsample4(test), bag, Mode::encoded);
        CHECK(m.cost == 1.0);  // 4 / 4
        CHECK(m.entry == 0);
    }

    SUBCASE("identical segment in the bag gives zero and matches it") {
        Rng rng(41);
        const auto refs = jittered_refs(rng, 3, 3);
        const SegmentBag bag = build_bag(refs);
        const Ucss test = refs[1][2];
        const SegmentMatch enc = segment_cost(test, subsample4(test), bag, Mode::encoded);
        CHECK(enc.cost == 0.0);
        CHECK(bag.entries[static_cast<std::size_t>(enc.entry)].ref_index == 2);
        CHECK(bag.entries[static_cast<std::size_t>(enc.entry)].seg_index == 2);
        const SegmentMatch dtw = segment_cost(test, subsample4(test), bag, Mode::dtw);
        CHECK(dtw.cost == 0.0);
    }

    SUBCASE("dtw mode divides the raw minimum by the test length") {
        std::vector<std::vector<Ucss>> refs(2);
        refs[0].push_back(line_segment(0, 2, 1, 0, 3));  // every cell costs 4
        refs[1].push_back(line_segment(0, 9, 1, 0, 3));  // far away
        const SegmentBag bag = build_bag(refs);
        const Ucss test = line_segment(0, 0, 1, 0, 3);
        const SegmentMatch m = segment_cost(test, subsample4(test), bag, Mode::dtw);
        CHECK(m.cost == 4.0);  // raw 12 over L_test = 3
        CHECK(m.entry == 0);
    }

    SUBCASE("exclusion skips a reference") {
        Rng rng(42);
        const auto refs = jittered_refs(rng, 2, 2);
        const SegmentBag bag = build_bag(refs);
        const Ucss test = refs[0][0];
        const SegmentMatch m = segment_cost(test, subsample4(test), bag, Mode::encoded, /*exclude_ref=*/1);
        CHECK(bag.entries[static_cast<std::size_t>(m.entry)].ref_index == 2);
        CHECK(m.cost > 0.0);
    }
}

TEST_CASE("mean_cost") {
    SUBCASE("averages per-segment costs") {
        std::vector<std::vector<Ucss>> refs(2);
        refs[0].push_back(line_segment(1, 0, 1, 0, 4));   // distance 4 to test seg 0
        refs[1].push_back(line_segment(100, 0, 1, 0, 4)); // far
        const SegmentBag bag = build_bag(refs);

        // seg 0 costs 1 (= 4/4); seg 1 is identical to a bag entry and costs 0
        std::vector<Ucss> test_segs = {line_segment(0, 0, 1, 0, 4),
                                       line_segment(1, 0, 1, 0, 4)};
        const SignatureFeatures f = features_from_segments(test_segs);
        const double got = mean_cost(f.segments, f.codes, bag, Mode::encoded, ExecMode::serial);
        CHECK(got == doctest::Approx(0.5).epsilon(1e-12));  // (1 + 0) / 2
    }

    SUBCASE("single-segment signature equals that segment's cost") {
        Rng rng(43);
        const auto refs = jittered_refs(rng, 2, 3);
        const SegmentBag bag = build_bag(refs);
        const SignatureFeatures f = features_from_segments({testsupport::smooth_segment(rng)});
        const double m = mean_cost(f.segments, f.codes, bag, Mode::encoded, ExecMode::serial);
        const SegmentMatch one = segment_cost(f.segments[0], f.codes[0], bag, Mode::encoded);
        CHECK(m == one.cost);
    }

    SUBCASE("no segments is a scoring error") {
        Rng rng(44);
        const auto refs = jittered_refs(rng, 2, 2);
        const SegmentBag bag = build_bag(refs);
        CHECK_THROWS_AS(mean_cost({}, {}, bag, Mode::encoded, ExecMode::serial), ScoringError);
    }
}

TEST_CASE("leave-one-out norm") {
    SUBCASE("identical references floor to 1e-9 with a flag") {
        Rng rng(45);
        std::vector<Ucss> sig;
        for (int k = 0; k < 4; ++k) sig.push_back(testsupport::smooth_segment(rng));
        const std::vector<std::vector<Ucss>> refs(5, sig);
        const NormCost n = leave_one_out_norm(build_bag(refs), Mode::encoded, ExecMode::serial);
        CHECK(n.floored);
        CHECK(n.value == 1e-9);
    }

    SUBCASE("reference scores against their own enrollment average to 1") {
        Rng rng(46);
        for (Mode mode : {Mode::encoded, Mode::dtw}) {
            const auto refs = jittered_refs(rng);
            const SegmentBag bag = build_bag(refs);
            const NormCost norm = leave_one_out_norm(bag, mode, ExecMode::serial);
            REQUIRE_FALSE(norm.floored);

            double mean_j = 0.0;
            for (int i = 1; i <= bag.n_refs; ++i) {
                const SignatureFeatures f = features_from_segments(refs[static_cast<std::size_t>(i - 1)]);
                mean_j += mean_cost(f.segments, f.codes, bag, mode, ExecMode::serial, i) / norm.value;
            }
            mean_j /= bag.n_refs;
            CHECK(mean_j == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("signature scores") {
    Rng rng(47);
    const auto refs = jittered_refs(rng);
    EnrollmentOptions opts;
    opts.with_dtw = true;
    const Enrollment e = make_enrollment(refs, opts, ExecMode::serial);

    SUBCASE("segments straight from the bag give zero scores") {
        const SignatureFeatures f = features_from_segments(refs[2]);
        CHECK(shape_score(f, e, ExecMode::serial) == 0.0);
        CHECK(length_score(f, e, ExecMode::serial) == 0.0);
        CHECK(fused_score(f, e, ExecMode::serial) == 0.0);
        CHECK(dtw_score(f, e, ExecMode::serial) == 0.0);
    }

    SUBCASE("fusion is the arithmetic mean of shape and length") {
        Rng rng2(48);
        const SignatureFeatures f = features_from_segments(
            {testsupport::smooth_segment(rng2), testsupport::smooth_segment(rng2)});
        const double s = shape_score(f, e, ExecMode::serial);
        const double l = length_score(f, e, ExecMode::serial);
        const double fused = fused_score(f, e, ExecMode::serial);
        CHECK(fused == 0.5 * (s + l));
        const SignatureScore all = score_signature(f, e, /*with_baseline=*/true, ExecMode::serial);
        CHECK(*all.j_fused == fused);
        CHECK(*all.j_shape == s);
        CHECK(*all.j_length == l);
        CHECK(all.j_baseline.has_value());
        CHECK(all.per_segment.size() == f.segments.size());
    }

    SUBCASE("length association goes through shape, not nearest length") {
        // Bag: entry A has matching shape but wrong length; entry B has equal
        // length but distant shape. The match must pick A.
        std::vector<std::vector<Ucss>> refs2(2);
        refs2[0].push_back(line_segment(0, 0, 1, 0, 9));     // near test shape, length 9
        refs2[1].push_back(line_segment(50, 50, 1, 0, 4));   // far shape, length 4 (equal to test)
        const Enrollment e2 = make_enrollment(refs2, {}, ExecMode::serial);
        const SignatureFeatures f = features_from_segments({line_segment(0, 0.5, 1, 0, 4)});
        // numerator length diff = |4 - 9| = 5 against the shape-matched entry
        const double num = 5.0;
        const double expect = num / e2.norm_length->value;
        CHECK(length_score(f, e2, ExecMode::serial) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("reference permutation leaves scores unchanged") {
    Rng rng(49);
    const auto refs = jittered_refs(rng);
    const SignatureFeatures test = features_from_segments(
        {testsupport::smooth_segment(rng), testsupport::smooth_segment(rng),
         testsupport::smooth_segment(rng)});

    EnrollmentOptions opts;
    opts.with_dtw = true;
    const Enrollment e1 = make_enrollment(refs, opts, ExecMode::serial);

    auto permuted = refs;
    std::rotate(permuted.begin(), permuted.begin() + 2, permuted.end());
    const Enrollment e2 = make_enrollment(permuted, opts, ExecMode::serial);

    CHECK(shape_score(test, e1, ExecMode::serial) ==
          doctest::Approx(shape_score(test, e2, ExecMode::serial)).epsilon(1e-12));
    CHECK(length_score(test, e1, ExecMode::serial) ==
          doctest::Approx(length_score(test, e2, ExecMode::serial)).epsilon(1e-12));
    CHECK(dtw_score(test, e1, ExecMode::serial) ==
          doctest::Approx(dtw_score(test, e2, ExecMode::serial)).epsilon(1e-12));
}

TEST_CASE("scores are invariant to pre-normalization scaling") {
    // Coordinates reach scoring only after the center/unit-variance normalization,
    // so scaling every raw point set by a constant must not move any score.
    Rng rng(50);

    auto normalized_from_scale = [&](const std::vector<Ucss>& raw, double scale) {
        std::vector<Point> all;
        for (const Ucss& s : raw) {
            for (const Point& p : s.points) all.push_back({p.x * scale, p.y * scale});
        }
        const NormalizedPointSet norm = normalize_points(all);
        std::vector<Ucss> out = raw;
        for (Ucss& s : out) {
            for (Point& p : s.points) {
                p.x = (p.x * scale - norm.center.x) / norm.scale.x;
                p.y = (p.y * scale - norm.center.y) / norm.scale.y;
            }
        }
        return out;
    };

    const auto raw_refs = jittered_refs(rng, 5, 4);
    std::vector<Ucss> raw_test;
    for (int k = 0; k < 3; ++k) raw_test.push_back(testsupport::smooth_segment(rng));

    EnrollmentOptions opts;
    opts.with_dtw = true;
    double base_shape = 0, base_len = 0, base_dtw = 0;
    for (int variant = 0; variant < 2; ++variant) {
        const double scale = (variant == 0) ? 1.0 : 3.7;
        std::vector<std::vector<Ucss>> refs;
        for (const auto& r : raw_refs) refs.push_back(normalized_from_scale(r, scale));
        const Enrollment e = make_enrollment(refs, opts, ExecMode::serial);
        const SignatureFeatures f = features_from_segments(normalized_from_scale(raw_test, scale));
        const double s = shape_score(f, e, ExecMode::serial);
        const double l = length_score(f, e, ExecMode::serial);
        const double d = dtw_score(f, e, ExecMode::serial);
        if (variant == 0) {
            base_shape = s;
            base_len = l;
            base_dtw = d;
        } else {
            CHECK(std::abs(s - base_shape) <= 1e-6 * std::max(1.0, std::abs(base_shape)));
            CHECK(std::abs(l - base_len) <= 1e-6 * std::max(1.0, std::abs(base_len)));
            CHECK(std::abs(d - base_dtw) <= 1e-6 * std::max(1.0, std::abs(base_dtw)));
        }
    }
}

TEST_CASE("genuine scores below forgery scores on a perturbed corpus") {
    Rng rng(51);
    const auto refs = jittered_refs(rng, 5, 5, 0.02);
    EnrollmentOptions opts;
    opts.with_dtw = true;
    const Enrollment e = make_enrollment(refs, opts, ExecMode::serial);

    double g_shape = 0, g_len = 0, g_fused = 0;
    double f_shape = 0, f_len = 0, f_fused = 0;
    const int trials = 6;
    for (int t = 0; t < trials; ++t) {
        // genuine: jittered copy of the enrolled template segments
        std::vector<Ucss> genuine = refs[0];
        for (Ucss& s : genuine) {
            for (Point& p : s.points) {
                p.x += rng.normal(0.0, 0.02);
                p.y += rng.normal(0.0, 0.02);
            }
        }
        // forgery: unrelated strokes of similar size
        std::vector<Ucss> forgery;
        for (std::size_t k = 0; k < genuine.size(); ++k) {
            forgery.push_back(testsupport::smooth_segment(rng));
        }
        const SignatureFeatures fg = features_from_segments(genuine);
        const SignatureFeatures ff = features_from_segments(forgery);
        g_shape += shape_score(fg, e, ExecMode::serial);
        g_len += length_score(fg, e, ExecMode::serial);
        g_fused += fused_score(fg, e, ExecMode::serial);
        f_shape += shape_score(ff, e, ExecMode::serial);
        f_len += length_score(ff, e, ExecMode::serial);
        f_fused += fused_score(ff, e, ExecMode::serial);
    }
    CHECK(g_shape / trials < f_shape / trials);
    CHECK(g_len / trials < f_len / trials);
    CHECK(g_fused / trials < f_fused / trials);
}
