#pragma once

#include <optional>
#include <vector>

#include "sigver/encoding.hpp"
#include "sigver/parallel.hpp"
#include "sigver/pipeline.hpp"
#include "sigver/ucss.hpp"

namespace sigver {

enum class Mode { dtw, encoded };

// Segments of all references merged into one set, each entry tagged with its
// source reference. Entries are stored canonically sorted by (reference index,
// segment index); argmin ties resolve to the smallest entry id in that order.
struct BagEntry {
    Ucss segment;  // may be empty when the bag was rebuilt from stored codes
    SegmentCode code;
    int ref_index = 0;  // 1-based
    int seg_index = 0;  // 0-based within the reference
    bool has_segment = false;
};

struct SegmentBag {
    std::vector<BagEntry> entries;
    int n_refs = 0;

    std::size_t size() const { return entries.size(); }
    int count_for_ref(int ref_index) const;
};

SegmentBag build_bag(const std::vector<std::vector<Ucss>>& refs);
SegmentBag build_bag_from_codes(const std::vector<std::vector<SegmentCode>>& refs);

struct SegmentMatch {
    double cost = 0.0;
    int entry = -1;      // canonical bag entry id
    bool fallback = false;  // dtw mode only: matched pair needed the unconstrained fallback
};

// Eq-style per-segment cost: the minimum distance over the bag, normalized by the
// test segment length (dtw mode) or by the 4 code samples (encoded mode). Entries
// from exclude_ref are skipped (leave-one-out views).
SegmentMatch segment_cost(const Ucss& test_segment, const SegmentCode& test_code, const SegmentBag& bag,
                          Mode mode, int exclude_ref = 0);

// Average per-segment cost over a whole signature.
double mean_cost(const std::vector<Ucss>& segments, const std::vector<SegmentCode>& codes,
                 const SegmentBag& bag, Mode mode, ExecMode exec, int exclude_ref = 0,
                 std::vector<SegmentMatch>* matches = nullptr);

struct NormCost {
    double value = 1.0;
    bool floored = false;
};

// Leave-one-out normalization: each reference scored against the bag with its own
// entries removed, averaged. Floored at 1e-9 (flagged) so a degenerate enrollment
// cannot divide by zero.
NormCost leave_one_out_norm(const SegmentBag& bag, Mode mode, ExecMode exec);

// Same pattern with the absolute length difference of the shape-matched entry as
// the per-segment cost.
NormCost leave_one_out_length_norm(const SegmentBag& bag, ExecMode exec);

// Precomputed state for scoring many test signatures against one reference set.
struct Enrollment {
    SegmentBag bag;
    std::optional<NormCost> norm_dtw;
    std::optional<NormCost> norm_encoded;
    std::optional<NormCost> norm_length;

    bool supports_dtw() const;
};

struct EnrollmentOptions {
    bool with_dtw = false;
    bool with_encoded = true;
    bool with_length = true;
};

Enrollment make_enrollment(const std::vector<std::vector<Ucss>>& refs, const EnrollmentOptions& opts,
                           ExecMode exec);
Enrollment make_enrollment_from_bag(SegmentBag bag, const EnrollmentOptions& opts, ExecMode exec);

struct PerSegmentDiag {
    int test_segment = 0;
    int matched_entry = -1;
    double cost = 0.0;
};

struct SignatureScore {
    std::optional<double> j_baseline;  // dtw mode (needs full segments in the bag)
    std::optional<double> j_shape;
    std::optional<double> j_length;
    std::optional<double> j_fused;
    std::vector<PerSegmentDiag> per_segment;  // diagnostics from the encoded match
};

// Normalized signature score: mean segment cost over the full bag divided by the
// leave-one-out norm. Smaller means more likely genuine.
double dtw_score(const SignatureFeatures& test, const Enrollment& e, ExecMode exec);
double shape_score(const SignatureFeatures& test, const Enrollment& e, ExecMode exec,
                   std::vector<PerSegmentDiag>* diag = nullptr);
double length_score(const SignatureFeatures& test, const Enrollment& e, ExecMode exec);
double fused_score(const SignatureFeatures& test, const Enrollment& e, ExecMode exec);

SignatureScore score_signature(const SignatureFeatures& test, const Enrollment& e, bool with_baseline,
                               ExecMode exec);

}  // namespace sigver
