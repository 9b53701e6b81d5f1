#pragma once

#include <cstdint>
#include <filesystem>

#include "sigver/points_io.hpp"

namespace sigver {

// Synthetic desk-scale corpus: each writer is a random smooth stroke template;
// genuine samples jitter the template anchors, forgeries reuse another writer's
// template (drawn from the same complexity distribution) with the same jitter.
struct SynthParams {
    int n_writers = 10;
    int genuine_per_writer = 12;
    int forgeries_per_writer = 8;
    int min_anchors = 6;
    int max_anchors = 9;
    double canvas = 100.0;        // template coordinate range
    double anchor_jitter = 1.1;   // per-anchor gaussian sigma
    double scale_jitter = 0.035;  // global scale sigma around 1
    std::uint64_t seed = 1;
};

DatasetCatalog make_synthetic_catalog(const SynthParams& params);

// Writes one point file per sample plus manifest.csv under outdir.
std::filesystem::path write_synthetic_dataset(const std::filesystem::path& outdir,
                                              const SynthParams& params);

}  // namespace sigver
