#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sigver/imaging.hpp"
#include "sigver/pipeline.hpp"
#include "sigver/points_io.hpp"

namespace sigver {

// Human-rating card: 5 genuine references on the left panel, 10 numbered test
// signatures (exactly 5 genuine, shuffled) with empty answer boxes on the right.
struct MosCardKey {
    struct Slot {
        std::string sample_id;
        bool genuine = false;
    };

    int card_id = 0;
    std::string signer_id;
    std::array<std::string, 5> reference_ids;
    std::array<Slot, 10> slots;
};

struct MosLayout {
    int cell_w = 200;
    int cell_h = 110;
    int margin = 12;
    int gap = 10;
    int label_w = 36;  // slot number + answer box column inside a test cell
};

// Pure image composition: consumes only the bitmaps and their slot order, so the
// rendered card cannot leak which slots are genuine.
BinaryImage compose_card(const std::vector<const BinaryImage*>& references,
                         const std::vector<const BinaryImage*>& tests, const MosLayout& layout = {});

struct MosGenerationResult {
    std::vector<MosCardKey> keys;
    std::vector<std::filesystem::path> card_files;
};

// Writes card_<id>.pbm for id in 1..n_cards plus the answer key CSV
// (card_id,slot,truth). Card i is fully determined by substream (seed, i); signers
// may repeat across cards. A drawn signer with fewer than 10 genuine or 5 forgery
// samples is an error.
MosGenerationResult generate_cards(const DatasetCatalog& catalog, int n_cards, std::uint64_t seed,
                                   const std::filesystem::path& outdir, const PipelineParams& params = {},
                                   const MosLayout& layout = {});

std::string key_to_csv(const std::vector<MosCardKey>& keys);
std::vector<MosCardKey> read_key_csv(const std::filesystem::path& path);

struct MosResponse {
    int card_id = 0;
    int slot = 0;          // 1-based
    bool answered = false;  // blank answers are excluded from the tally
    bool answer_genuine = false;
};

std::vector<MosResponse> read_responses_csv(const std::filesystem::path& path);

struct MosTally {
    int n_cards = 0;
    int genuine_answered = 0;
    int forgery_answered = 0;
    double frr = 0.0;  // genuine slots labeled F
    double far = 0.0;  // forgery slots labeled T
};

MosTally tally_responses(const std::vector<MosResponse>& responses, const std::vector<MosCardKey>& keys);

}  // namespace sigver
