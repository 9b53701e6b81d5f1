#include "sigver/mos.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "sigver/errors.hpp"
#include "sigver/rng.hpp"

namespace sigver {

namespace {

// 3x5 digit glyphs, row-major bit strings.
constexpr const char* kDigits[10] = {
    "111101101101111",  // 0
    "010110010010111",  // 1
    "111001111100111",  // 2
    "111001111001111",  // 3
    "101101111001001",  // 4
    "111100111001111",  // 5
    "111100111101111",  // 6
    "111001010010010",  // 7
    "111101111101111",  // 8
    "111101111001111",  // 9
};

void draw_digit(BinaryImage& img, int digit, int x, int y, int scale) {
    const char* glyph = kDigits[digit];
    for (int gy = 0; gy < 5; ++gy) {
        for (int gx = 0; gx < 3; ++gx) {
            if (glyph[gy * 3 + gx] != '1') continue;
            for (int sy = 0; sy < scale; ++sy) {
                for (int sx = 0; sx < scale; ++sx) {
                    const int px = x + gx * scale + sx;
                    const int py = y + gy * scale + sy;
                    if (px >= 0 && py >= 0 && px < img.width() && py < img.height()) img.set(px, py, true);
                }
            }
        }
    }
}

void draw_number(BinaryImage& img, int value, int x, int y, int scale) {
    std::string s = std::to_string(value);
    for (std::size_t i = 0; i < s.size(); ++i) {
        draw_digit(img, s[i] - '0', x + static_cast<int>(i) * (4 * scale), y, scale);
    }
}

void draw_rect_outline(BinaryImage& img, int x, int y, int w, int h) {
    for (int i = 0; i < w; ++i) {
        img.set(x + i, y, true);
        img.set(x + i, y + h - 1, true);
    }
    for (int i = 0; i < h; ++i) {
        img.set(x, y + i, true);
        img.set(x + w - 1, y + i, true);
    }
}

// OR-reduction over factor x factor blocks; keeps thin strokes visible.
BinaryImage downscale_or(const BinaryImage& img, int factor) {
    if (factor <= 1) return img;
    const int w = (img.width() + factor - 1) / factor;
    const int h = (img.height() + factor - 1) / factor;
    BinaryImage out(w, h);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (img.at(x, y)) out.set(x / factor, y / factor, true);
        }
    }
    return out;
}

// Centers src in the cell at (cx, cy), downscaling when necessary.
void blit_into_cell(BinaryImage& dst, const BinaryImage& src, int cx, int cy, int cw, int ch) {
    int factor = 1;
    while ((src.width() + factor - 1) / factor > cw || (src.height() + factor - 1) / factor > ch) {
        ++factor;
    }
    const BinaryImage scaled = downscale_or(src, factor);
    const int ox = cx + (cw - scaled.width()) / 2;
    const int oy = cy + (ch - scaled.height()) / 2;
    for (int y = 0; y < scaled.height(); ++y) {
        for (int x = 0; x < scaled.width(); ++x) {
            if (scaled.at(x, y)) dst.set(ox + x, oy + y, true);
        }
    }
}

}  // namespace

BinaryImage compose_card(const std::vector<const BinaryImage*>& references,
                         const std::vector<const BinaryImage*>& tests, const MosLayout& layout) {
    if (references.size() != 5 || tests.size() != 10) {
        throw InputError("compose_card: need exactly 5 references and 10 test bitmaps");
    }

    const int rows = 5;
    const int ref_panel_w = layout.cell_w;
    const int test_cell_w = layout.label_w + layout.cell_w;
    const int width = layout.margin * 2 + ref_panel_w + 3 * layout.gap + 2 * test_cell_w;
    const int height = layout.margin * 2 + rows * layout.cell_h + (rows - 1) * layout.gap;

    BinaryImage card(width, height);

    // Left panel: the five reference signatures stacked vertically.
    for (int r = 0; r < rows; ++r) {
        const int cy = layout.margin + r * (layout.cell_h + layout.gap);
        blit_into_cell(card, *references[static_cast<std::size_t>(r)], layout.margin, cy, layout.cell_w,
                       layout.cell_h);
    }

    // Vertical separator between panels.
    const int sep_x = layout.margin + ref_panel_w + layout.gap;
    for (int y = layout.margin; y < height - layout.margin; ++y) card.set(sep_x, y, true);

    // Right panel: 10 numbered test slots in two columns with answer boxes.
    for (int slot = 0; slot < 10; ++slot) {
        const int col = slot / rows;
        const int row = slot % rows;
        const int cx = sep_x + layout.gap + col * (test_cell_w + layout.gap);
        const int cy = layout.margin + row * (layout.cell_h + layout.gap);

        draw_number(card, slot + 1, cx + 2, cy + 4, 2);
        const int box = std::min(layout.label_w - 6, 18);
        draw_rect_outline(card, cx + 2, cy + 18, box, box);
        blit_into_cell(card, *tests[static_cast<std::size_t>(slot)], cx + layout.label_w, cy, layout.cell_w,
                       layout.cell_h);
    }
    return card;
}

MosGenerationResult generate_cards(const DatasetCatalog& catalog, int n_cards, std::uint64_t seed,
                                   const std::filesystem::path& outdir, const PipelineParams& params,
                                   const MosLayout& layout) {
    if (n_cards < 1) throw GenerationError("generate_cards: need at least 1 card");
    if (catalog.signers.empty()) throw GenerationError("generate_cards: catalog is empty");
    std::filesystem::create_directories(outdir);

    MosGenerationResult result;
    for (int ci = 1; ci <= n_cards; ++ci) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(ci));
        const SignerEntry& signer =
            catalog.signers[static_cast<std::size_t>(rng.below(catalog.signers.size()))];
        if (signer.genuine.size() < 10 || signer.forgeries.size() < 5) {
            throw GenerationError("signer " + signer.signer_id +
                                  " has too few samples for a card (needs 10 genuine, 5 forgeries)");
        }

        const std::vector<std::size_t> g_draw = rng.sample_indices(signer.genuine.size(), 10);
        const std::vector<std::size_t> f_draw = rng.sample_indices(signer.forgeries.size(), 5);

        MosCardKey key;
        key.card_id = ci;
        key.signer_id = signer.signer_id;

        std::vector<const OnlineSignature*> ref_sigs;
        for (int i = 0; i < 5; ++i) {
            const OnlineSignature& s = signer.genuine[g_draw[static_cast<std::size_t>(i)]];
            key.reference_ids[static_cast<std::size_t>(i)] = s.sample_id;
            ref_sigs.push_back(&s);
        }

        struct TestPick {
            const OnlineSignature* sig;
            bool genuine;
        };
        std::vector<TestPick> picks;
        for (int i = 5; i < 10; ++i) {
            picks.push_back({&signer.genuine[g_draw[static_cast<std::size_t>(i)]], true});
        }
        for (std::size_t i = 0; i < 5; ++i) {
            picks.push_back({&signer.forgeries[f_draw[i]], false});
        }
        rng.shuffle(picks);

        std::vector<BinaryImage> ref_imgs, test_imgs;
        for (const OnlineSignature* s : ref_sigs) ref_imgs.push_back(render_offline(*s, params));
        for (std::size_t i = 0; i < picks.size(); ++i) {
            test_imgs.push_back(render_offline(*picks[i].sig, params));
            key.slots[i] = {picks[i].sig->sample_id, picks[i].genuine};
        }

        std::vector<const BinaryImage*> ref_ptrs, test_ptrs;
        for (const BinaryImage& im : ref_imgs) ref_ptrs.push_back(&im);
        for (const BinaryImage& im : test_imgs) test_ptrs.push_back(&im);

        const std::filesystem::path file = outdir / ("card_" + std::to_string(ci) + ".pbm");
        write_pbm(file, compose_card(ref_ptrs, test_ptrs, layout));
        result.card_files.push_back(file);
        result.keys.push_back(std::move(key));
    }
    return result;
}

std::string key_to_csv(const std::vector<MosCardKey>& keys) {
    std::string out = "card_id,slot,truth\n";
    for (const MosCardKey& k : keys) {
        for (std::size_t i = 0; i < k.slots.size(); ++i) {
            out += std::to_string(k.card_id);
            out += ',';
            out += std::to_string(i + 1);
            out += ',';
            out += k.slots[i].genuine ? 'T' : 'F';
            out += '\n';
        }
    }
    return out;
}

namespace {

std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path,
                                                    const std::string& expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open CSV: " + path.string());

    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto fields = split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            std::string joined;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (i) joined += ',';
                joined += fields[i];
            }
            if (joined != expected_header) {
                throw IoError(path.string() + ": expected header '" + expected_header + "'");
            }
            continue;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

int parse_int_field(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw TallyError("bad " + what + " value '" + s + "'");
    }
}

}  // namespace

std::vector<MosCardKey> read_key_csv(const std::filesystem::path& path) {
    std::map<int, MosCardKey> cards;
    for (const auto& row : read_csv_rows(path, "card_id,slot,truth")) {
        if (row.size() != 3) throw TallyError(path.string() + ": key row needs 3 fields");
        const int card_id = parse_int_field(row[0], "card_id");
        const int slot = parse_int_field(row[1], "slot");
        if (slot < 1 || slot > 10) throw TallyError("slot out of range: " + row[1]);
        if (row[2] != "T" && row[2] != "F") throw TallyError("truth must be T or F, got '" + row[2] + "'");

        MosCardKey& key = cards[card_id];
        key.card_id = card_id;
        key.slots[static_cast<std::size_t>(slot) - 1].genuine = (row[2] == "T");
        key.slots[static_cast<std::size_t>(slot) - 1].sample_id = "?";
    }
    std::vector<MosCardKey> out;
    for (auto& [id, key] : cards) out.push_back(std::move(key));
    return out;
}

std::vector<MosResponse> read_responses_csv(const std::filesystem::path& path) {
    std::vector<MosResponse> out;
    for (const auto& row : read_csv_rows(path, "card_id,slot,answer")) {
        if (row.size() != 3) throw TallyError(path.string() + ": response row needs 3 fields");
        MosResponse r;
        r.card_id = parse_int_field(row[0], "card_id");
        r.slot = parse_int_field(row[1], "slot");
        if (row[2].empty()) {
            r.answered = false;
        } else if (row[2] == "T" || row[2] == "t") {
            r.answered = true;
            r.answer_genuine = true;
        } else if (row[2] == "F" || row[2] == "f") {
            r.answered = true;
            r.answer_genuine = false;
        } else {
            throw TallyError("answer must be T, F or blank, got '" + row[2] + "'");
        }
        out.push_back(r);
    }
    return out;
}

MosTally tally_responses(const std::vector<MosResponse>& responses, const std::vector<MosCardKey>& keys) {
    std::map<int, const MosCardKey*> by_id;
    for (const MosCardKey& k : keys) by_id[k.card_id] = &k;

    std::set<std::pair<int, int>> seen;
    int genuine_answered = 0, forgery_answered = 0;
    int false_rejections = 0, false_acceptances = 0;
    for (const MosResponse& r : responses) {
        const auto it = by_id.find(r.card_id);
        if (it == by_id.end()) throw TallyError("response references unknown card " + std::to_string(r.card_id));
        if (r.slot < 1 || r.slot > 10) {
            throw TallyError("response references unknown slot " + std::to_string(r.slot) + " on card " +
                             std::to_string(r.card_id));
        }
        if (!seen.insert({r.card_id, r.slot}).second) {
            throw TallyError("duplicate response for card " + std::to_string(r.card_id) + " slot " +
                             std::to_string(r.slot));
        }
        if (!r.answered) continue;

        const bool truth = it->second->slots[static_cast<std::size_t>(r.slot) - 1].genuine;
        if (truth) {
            ++genuine_answered;
            if (!r.answer_genuine) ++false_rejections;
        } else {
            ++forgery_answered;
            if (r.answer_genuine) ++false_acceptances;
        }
    }

    MosTally tally;
    tally.n_cards = static_cast<int>(keys.size());
    tally.genuine_answered = genuine_answered;
    tally.forgery_answered = forgery_answered;
    tally.frr = genuine_answered ? static_cast<double>(false_rejections) / genuine_answered : 0.0;
    tally.far = forgery_answered ? static_cast<double>(false_acceptances) / forgery_answered : 0.0;
    return tally;
}

}  // namespace sigver
