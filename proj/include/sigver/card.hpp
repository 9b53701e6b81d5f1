#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sigver/encoding.hpp"
#include "sigver/pipeline.hpp"
#include "sigver/projection.hpp"
#include "sigver/ucss.hpp"

namespace sigver {

// Persisted enrollment. The required payload is the 9-scalar code records per
// reference; full segment point lists and projection profiles are optional extras
// that let `verify` run the dtw and projection methods without re-processing the
// reference signatures.
struct EnrollmentCard {
    struct Reference {
        std::string sample_id;
        std::vector<SegmentCode> codes;
        std::vector<Ucss> segments;  // optional (empty when codes-only)
        Profile profile;             // optional
    };

    std::string signer_id;
    PipelineParams params;
    std::vector<Reference> references;

    bool has_segments() const;
    bool has_profiles() const;
};

void save_card(const std::filesystem::path& path, const EnrollmentCard& card);
EnrollmentCard load_card(const std::filesystem::path& path);

}  // namespace sigver
