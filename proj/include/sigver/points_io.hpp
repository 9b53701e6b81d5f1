#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sigver/geometry.hpp"

namespace sigver {

enum class Label { genuine, forgery };

const char* label_name(Label l);
Label parse_label(std::string_view s);  // case-insensitive; throws CatalogError

// One signing act as an ordered list of pen-tip samples.
struct OnlineSignature {
    std::vector<Point> points;
    std::string signer_id;
    std::string sample_id;
    Label label = Label::genuine;
};

// Point file format: UTF-8 text, optional integer point-count header line, then one
// point per line as whitespace-separated numeric columns. The first two columns are
// (x, y); further columns (pressure, tilt, timestamps...) are read and discarded.
// Lines starting with '#' and blank lines are ignored. A declared count that does
// not match the number of data rows is an error.
OnlineSignature parse_points_text(std::string_view text, std::string_view origin = "<memory>");
OnlineSignature parse_points_file(const std::filesystem::path& path);

std::string points_to_text(const OnlineSignature& sig);
void write_points_file(const std::filesystem::path& path, const OnlineSignature& sig);

struct SignerEntry {
    std::string signer_id;
    std::vector<OnlineSignature> genuine;
    std::vector<OnlineSignature> forgeries;
};

// All signatures of a dataset, grouped per signer. Ordering is deterministic:
// signers sorted by id, samples sorted by sample id within each label group.
struct DatasetCatalog {
    std::vector<SignerEntry> signers;

    std::size_t total_samples() const;
    const SignerEntry* find(std::string_view signer_id) const;
};

// Manifest format: UTF-8 CSV with header `signer_id,path,label`; label is
// genuine|forgery; paths are relative to `root`. Every referenced file is parsed
// eagerly so a broken dataset fails at load time. Sample ids are the file stems.
DatasetCatalog load_catalog(const std::filesystem::path& root, const std::filesystem::path& manifest);

// Minimal CSV splitting shared by manifest/key/response readers (no quoting).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace sigver
