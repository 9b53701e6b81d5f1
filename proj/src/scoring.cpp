#include "sigver/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "sigver/dtw.hpp"
#include "sigver/errors.hpp"

namespace sigver {

namespace {
constexpr double kNormFloor = 1e-9;
}

int SegmentBag::count_for_ref(int ref_index) const {
    int n = 0;
    for (const BagEntry& e : entries) n += (e.ref_index == ref_index) ? 1 : 0;
    return n;
}

SegmentBag build_bag(const std::vector<std::vector<Ucss>>& refs) {
    if (refs.size() < 2) throw EnrollmentError("enrollment needs at least 2 references");

    SegmentBag bag;
    bag.n_refs = static_cast<int>(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
        if (refs[i].empty()) {
            throw EnrollmentError("reference " + std::to_string(i + 1) + " produced no segments");
        }
        for (std::size_t k = 0; k < refs[i].size(); ++k) {
            BagEntry e;
            e.segment = refs[i][k];
            e.code = subsample4(refs[i][k]);
            e.ref_index = static_cast<int>(i + 1);
            e.seg_index = static_cast<int>(k);
            e.has_segment = true;
            bag.entries.push_back(std::move(e));
        }
    }
    return bag;
}

SegmentBag build_bag_from_codes(const std::vector<std::vector<SegmentCode>>& refs) {
    if (refs.size() < 2) throw EnrollmentError("enrollment needs at least 2 references");

    SegmentBag bag;
    bag.n_refs = static_cast<int>(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
        if (refs[i].empty()) {
            throw EnrollmentError("reference " + std::to_string(i + 1) + " has no segment codes");
        }
        for (std::size_t k = 0; k < refs[i].size(); ++k) {
            BagEntry e;
            e.code = refs[i][k];
            e.ref_index = static_cast<int>(i + 1);
            e.seg_index = static_cast<int>(k);
            e.has_segment = false;
            bag.entries.push_back(std::move(e));
        }
    }
    return bag;
}

SegmentMatch segment_cost(const Ucss& test_segment, const SegmentCode& test_code, const SegmentBag& bag,
                          Mode mode, int exclude_ref) {
    SegmentMatch best;
    bool first = true;
    for (std::size_t j = 0; j < bag.entries.size(); ++j) {
        const BagEntry& entry = bag.entries[j];
        if (entry.ref_index == exclude_ref) continue;

        double cost;
        bool fallback = false;
        if (mode == Mode::encoded) {
            cost = code_distance_min_oriented(test_code, entry.code);
        } else {
            if (!entry.has_segment) {
                throw ScoringError("bag entry lacks full segment points; dtw mode unavailable");
            }
            const WarpResult r = dtw_min_oriented(test_segment, entry.segment);
            cost = r.cost;
            fallback = !r.feasible;
        }
        if (first || cost < best.cost) {
            best.cost = cost;
            best.entry = static_cast<int>(j);
            best.fallback = fallback;
            first = false;
        }
    }
    if (first) throw ScoringError("segment_cost: bag has no usable entries");

    if (mode == Mode::encoded) {
        best.cost /= 4.0;
    } else {
        best.cost /= static_cast<double>(test_segment.length());
    }
    return best;
}

double mean_cost(const std::vector<Ucss>& segments, const std::vector<SegmentCode>& codes,
                 const SegmentBag& bag, Mode mode, ExecMode exec, int exclude_ref,
                 std::vector<SegmentMatch>* matches) {
    if (segments.empty()) throw ScoringError("mean_cost: test signature has no segments");
    if (codes.size() != segments.size()) throw ScoringError("mean_cost: codes/segments size mismatch");

    std::vector<SegmentMatch> local(segments.size());
    parallel_for(segments.size(), exec, [&](std::size_t k) {
        local[k] = segment_cost(segments[k], codes[k], bag, mode, exclude_ref);
    });

    double sum = 0.0;
    for (const SegmentMatch& m : local) sum += m.cost;
    if (matches) *matches = std::move(local);
    return sum / static_cast<double>(segments.size());
}

namespace {

// Splits bag entries back into per-reference segment/code lists.
struct RefView {
    std::vector<Ucss> segments;
    std::vector<SegmentCode> codes;
};

std::vector<RefView> per_reference(const SegmentBag& bag) {
    std::vector<RefView> refs(static_cast<std::size_t>(bag.n_refs));
    for (const BagEntry& e : bag.entries) {
        RefView& r = refs[static_cast<std::size_t>(e.ref_index) - 1];
        r.segments.push_back(e.segment);
        r.codes.push_back(e.code);
    }
    return refs;
}

NormCost floored(double value) {
    if (value < kNormFloor) return {kNormFloor, true};
    return {value, false};
}

}  // namespace

NormCost leave_one_out_norm(const SegmentBag& bag, Mode mode, ExecMode exec) {
    if (bag.n_refs < 2) throw EnrollmentError("leave-one-out norm needs at least 2 references");
    const std::vector<RefView> refs = per_reference(bag);

    double sum = 0.0;
    for (int i = 1; i <= bag.n_refs; ++i) {
        const RefView& r = refs[static_cast<std::size_t>(i) - 1];
        sum += mean_cost(r.segments, r.codes, bag, mode, exec, /*exclude_ref=*/i);
    }
    return floored(sum / static_cast<double>(bag.n_refs));
}

NormCost leave_one_out_length_norm(const SegmentBag& bag, ExecMode exec) {
    if (bag.n_refs < 2) throw EnrollmentError("leave-one-out norm needs at least 2 references");
    const std::vector<RefView> refs = per_reference(bag);

    double sum = 0.0;
    for (int i = 1; i <= bag.n_refs; ++i) {
        const RefView& r = refs[static_cast<std::size_t>(i) - 1];
        std::vector<double> diffs(r.codes.size());
        parallel_for(r.codes.size(), exec, [&](std::size_t k) {
            const SegmentMatch m = segment_cost(r.segments[k], r.codes[k], bag, Mode::encoded, i);
            diffs[k] = length_difference(r.codes[k], bag.entries[static_cast<std::size_t>(m.entry)].code);
        });
        double acc = 0.0;
        for (double d : diffs) acc += d;
        sum += acc / static_cast<double>(r.codes.size());
    }
    return floored(sum / static_cast<double>(bag.n_refs));
}

bool Enrollment::supports_dtw() const {
    return !bag.entries.empty() && bag.entries.front().has_segment;
}

Enrollment make_enrollment_from_bag(SegmentBag bag, const EnrollmentOptions& opts, ExecMode exec) {
    Enrollment e;
    e.bag = std::move(bag);
    if (opts.with_dtw) e.norm_dtw = leave_one_out_norm(e.bag, Mode::dtw, exec);
    if (opts.with_encoded) e.norm_encoded = leave_one_out_norm(e.bag, Mode::encoded, exec);
    if (opts.with_length) e.norm_length = leave_one_out_length_norm(e.bag, exec);
    return e;
}

Enrollment make_enrollment(const std::vector<std::vector<Ucss>>& refs, const EnrollmentOptions& opts,
                           ExecMode exec) {
    return make_enrollment_from_bag(build_bag(refs), opts, exec);
}

double dtw_score(const SignatureFeatures& test, const Enrollment& e, ExecMode exec) {
    if (!e.norm_dtw) throw ScoringError("enrollment was built without the dtw norm");
    return mean_cost(test.segments, test.codes, e.bag, Mode::dtw, exec) / e.norm_dtw->value;
}

double shape_score(const SignatureFeatures& test, const Enrollment& e, ExecMode exec,
                   std::vector<PerSegmentDiag>* diag) {
    if (!e.norm_encoded) throw ScoringError("enrollment was built without the encoded norm");
    std::vector<SegmentMatch> matches;
    const double mean =
        mean_cost(test.segments, test.codes, e.bag, Mode::encoded, exec, 0, diag ? &matches : nullptr);
    if (diag) {
        diag->clear();
        for (std::size_t k = 0; k < matches.size(); ++k) {
            diag->push_back({static_cast<int>(k), matches[k].entry, matches[k].cost});
        }
    }
    return mean / e.norm_encoded->value;
}

double length_score(const SignatureFeatures& test, const Enrollment& e, ExecMode exec) {
    if (!e.norm_length) throw ScoringError("enrollment was built without the length norm");
    if (test.codes.empty()) throw ScoringError("length_score: test signature has no segments");

    std::vector<double> diffs(test.codes.size());
    parallel_for(test.codes.size(), exec, [&](std::size_t k) {
        // Association is by shape (encoded argmin); only then are lengths compared.
        const SegmentMatch m = segment_cost(test.segments[k], test.codes[k], e.bag, Mode::encoded, 0);
        diffs[k] = length_difference(test.codes[k], e.bag.entries[static_cast<std::size_t>(m.entry)].code);
    });
    double sum = 0.0;
    for (double d : diffs) sum += d;
    const double mean = sum / static_cast<double>(test.codes.size());
    return mean / e.norm_length->value;
}

double fused_score(const SignatureFeatures& test, const Enrollment& e, ExecMode exec) {
    return 0.5 * (shape_score(test, e, exec) + length_score(test, e, exec));
}

SignatureScore score_signature(const SignatureFeatures& test, const Enrollment& e, bool with_baseline,
                               ExecMode exec) {
    SignatureScore s;
    if (with_baseline) s.j_baseline = dtw_score(test, e, exec);
    if (e.norm_encoded) s.j_shape = shape_score(test, e, exec, &s.per_segment);
    if (e.norm_length) s.j_length = length_score(test, e, exec);
    if (s.j_shape && s.j_length) s.j_fused = 0.5 * (*s.j_shape + *s.j_length);
    return s;
}

}  // namespace sigver
