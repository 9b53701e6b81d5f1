#include "sigver/synth.hpp"

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "sigver/errors.hpp"
#include "sigver/rng.hpp"

namespace sigver {

namespace {

// Substream ids: writer m's template lives at m*4096, genuine sample n at
// m*4096 + 1 + n, forgery n at m*4096 + 2048 + n.
constexpr std::uint64_t kWriterStride = 4096;
constexpr std::uint64_t kForgeryOffset = 2048;

std::vector<Point> make_template(const SynthParams& p, int writer) {
    Rng rng = Rng::substream(p.seed, static_cast<std::uint64_t>(writer) * kWriterStride);
    const int n_anchors = p.min_anchors + static_cast<int>(rng.below(
                              static_cast<std::uint64_t>(p.max_anchors - p.min_anchors + 1)));
    std::vector<Point> anchors;
    anchors.reserve(static_cast<std::size_t>(n_anchors));
    for (int i = 0; i < n_anchors; ++i) {
        // Mostly left-to-right progression with loops in y, signature-like.
        const double x = p.canvas * static_cast<double>(i) / (n_anchors - 1) +
                         rng.normal(0.0, p.canvas * 0.07);
        const double y = p.canvas * 0.5 + rng.normal(0.0, p.canvas * 0.22);
        anchors.push_back({x, y});
    }
    return anchors;
}

std::vector<Point> jittered(const std::vector<Point>& anchors, const SynthParams& p, Rng& rng) {
    double cx = 0.0, cy = 0.0;
    for (const Point& a : anchors) {
        cx += a.x;
        cy += a.y;
    }
    cx /= static_cast<double>(anchors.size());
    cy /= static_cast<double>(anchors.size());

    const double scale = 1.0 + rng.normal(0.0, p.scale_jitter);
    std::vector<Point> out;
    out.reserve(anchors.size());
    for (const Point& a : anchors) {
        const double x = cx + (a.x - cx) * scale + rng.normal(0.0, p.anchor_jitter);
        const double y = cy + (a.y - cy) * scale + rng.normal(0.0, p.anchor_jitter);
        out.push_back({x, y});
    }
    return out;
}

std::string zero_pad(int v, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%0*d", width, v);
    return buf;
}

}  // namespace

DatasetCatalog make_synthetic_catalog(const SynthParams& p) {
    if (p.n_writers < 2) throw GenerationError("synthetic corpus needs at least 2 writers");
    if (p.min_anchors < 3 || p.max_anchors < p.min_anchors) {
        throw GenerationError("synthetic corpus: bad anchor range");
    }

    std::vector<std::vector<Point>> templates;
    templates.reserve(static_cast<std::size_t>(p.n_writers));
    for (int m = 0; m < p.n_writers; ++m) templates.push_back(make_template(p, m));

    DatasetCatalog catalog;
    for (int m = 0; m < p.n_writers; ++m) {
        SignerEntry entry;
        entry.signer_id = "w" + zero_pad(m, 2);

        for (int n = 0; n < p.genuine_per_writer; ++n) {
            Rng rng = Rng::substream(p.seed, static_cast<std::uint64_t>(m) * kWriterStride + 1 +
                                                  static_cast<std::uint64_t>(n));
            OnlineSignature sig;
            sig.points = jittered(templates[static_cast<std::size_t>(m)], p, rng);
            sig.signer_id = entry.signer_id;
            sig.sample_id = "g" + zero_pad(n, 2);
            sig.label = Label::genuine;
            entry.genuine.push_back(std::move(sig));
        }

        for (int n = 0; n < p.forgeries_per_writer; ++n) {
            Rng rng = Rng::substream(p.seed, static_cast<std::uint64_t>(m) * kWriterStride +
                                                  kForgeryOffset + static_cast<std::uint64_t>(n));
            // A different writer's template stands in for the forger's rendition.
            const std::uint64_t pick = rng.below(static_cast<std::uint64_t>(p.n_writers - 1));
            const int source = (static_cast<int>(pick) >= m) ? static_cast<int>(pick) + 1
                                                             : static_cast<int>(pick);
            OnlineSignature sig;
            sig.points = jittered(templates[static_cast<std::size_t>(source)], p, rng);
            sig.signer_id = entry.signer_id;
            sig.sample_id = "f" + zero_pad(n, 2);
            sig.label = Label::forgery;
            entry.forgeries.push_back(std::move(sig));
        }
        catalog.signers.push_back(std::move(entry));
    }
    return catalog;
}

std::filesystem::path write_synthetic_dataset(const std::filesystem::path& outdir,
                                              const SynthParams& params) {
    const DatasetCatalog catalog = make_synthetic_catalog(params);
    std::filesystem::create_directories(outdir);

    std::string manifest = "signer_id,path,label\n";
    for (const SignerEntry& signer : catalog.signers) {
        const std::filesystem::path sdir = outdir / signer.signer_id;
        std::filesystem::create_directories(sdir);
        for (const OnlineSignature& sig : signer.genuine) {
            const std::string rel = signer.signer_id + "/" + sig.sample_id + ".txt";
            write_points_file(outdir / rel, sig);
            manifest += signer.signer_id + "," + rel + ",genuine\n";
        }
        for (const OnlineSignature& sig : signer.forgeries) {
            const std::string rel = signer.signer_id + "/" + sig.sample_id + ".txt";
            write_points_file(outdir / rel, sig);
            manifest += signer.signer_id + "," + rel + ",forgery\n";
        }
    }

    const std::filesystem::path manifest_path = outdir / "manifest.csv";
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest: " + manifest_path.string());
    out << manifest;
    return manifest_path;
}

}  // namespace sigver
