#include "sigver/points_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "sigver/errors.hpp"

namespace sigver {

const char* label_name(Label l) { return l == Label::genuine ? "genuine" : "forgery"; }

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

double parse_number(std::string_view tok, std::string_view origin, std::size_t line_no) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(std::string(origin) + ":" + std::to_string(line_no) +
                         ": malformed numeric column '" + std::string(tok) + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

Label parse_label(std::string_view s) {
    const std::string l = lower(trim(s));
    if (l == "genuine") return Label::genuine;
    if (l == "forgery") return Label::forgery;
    throw CatalogError("unknown label '" + std::string(s) + "' (expected genuine|forgery)");
}

OnlineSignature parse_points_text(std::string_view text, std::string_view origin) {
    OnlineSignature sig;
    std::optional<long long> declared;
    bool saw_data = false;
    std::size_t line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;

        const auto tokens = split_ws(stripped);
        if (tokens.size() == 1) {
            if (!saw_data && !declared.has_value()) {
                long long n = 0;
                const char* first = tokens[0].data();
                const char* last = tokens[0].data() + tokens[0].size();
                auto [ptr, ec] = std::from_chars(first, last, n);
                if (ec != std::errc() || ptr != last || n < 0) {
                    throw ParseError(std::string(origin) + ":" + std::to_string(line_no) +
                                     ": expected integer point count, got '" + std::string(tokens[0]) + "'");
                }
                declared = n;
                continue;
            }
            throw ParseError(std::string(origin) + ":" + std::to_string(line_no) +
                             ": data row needs at least two columns");
        }

        const double x = parse_number(tokens[0], origin, line_no);
        const double y = parse_number(tokens[1], origin, line_no);
        if (!std::isfinite(x) || !std::isfinite(y)) {
            throw ParseError(std::string(origin) + ":" + std::to_string(line_no) +
                             ": non-finite coordinate");
        }
        sig.points.push_back({x, y});
        saw_data = true;
    }

    if (declared.has_value() && *declared != static_cast<long long>(sig.points.size())) {
        throw ParseError(std::string(origin) + ": declared point count " + std::to_string(*declared) +
                         " does not match " + std::to_string(sig.points.size()) + " data rows");
    }
    if (sig.points.size() < 2) {
        throw ParseError(std::string(origin) + ": a signature needs at least 2 points, got " +
                         std::to_string(sig.points.size()));
    }
    return sig;
}

OnlineSignature parse_points_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open point file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    OnlineSignature sig = parse_points_text(ss.str(), path.string());
    sig.sample_id = path.stem().string();
    return sig;
}

std::string points_to_text(const OnlineSignature& sig) {
    std::string out = std::to_string(sig.points.size());
    out += '\n';
    for (const Point& p : sig.points) {
        out += format_double(p.x);
        out += ' ';
        out += format_double(p.y);
        out += '\n';
    }
    return out;
}

void write_points_file(const std::filesystem::path& path, const OnlineSignature& sig) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write point file: " + path.string());
    out << points_to_text(sig);
    if (!out) throw IoError("short write: " + path.string());
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const std::string_view field =
            line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start);
        out.emplace_back(trim(field));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::size_t DatasetCatalog::total_samples() const {
    std::size_t n = 0;
    for (const auto& s : signers) n += s.genuine.size() + s.forgeries.size();
    return n;
}

const SignerEntry* DatasetCatalog::find(std::string_view signer_id) const {
    for (const auto& s : signers) {
        if (s.signer_id == signer_id) return &s;
    }
    return nullptr;
}

DatasetCatalog load_catalog(const std::filesystem::path& root, const std::filesystem::path& manifest) {
    std::ifstream in(manifest, std::ios::binary);
    if (!in) throw CatalogError("cannot open manifest: " + manifest.string());

    std::map<std::string, SignerEntry> by_signer;
    std::set<std::pair<std::string, std::string>> seen_ids;

    std::string line;
    std::size_t line_no = 0;
    bool header_checked = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;

        auto fields = split_csv_line(stripped);
        if (!header_checked) {
            header_checked = true;
            if (fields.size() != 3 || lower(fields[0]) != "signer_id" || lower(fields[1]) != "path" ||
                lower(fields[2]) != "label") {
                throw CatalogError(manifest.string() + ":" + std::to_string(line_no) +
                                   ": manifest header must be 'signer_id,path,label'");
            }
            continue;
        }
        if (fields.size() != 3) {
            throw CatalogError(manifest.string() + ":" + std::to_string(line_no) +
                               ": expected 3 fields, got " + std::to_string(fields.size()));
        }

        const std::string& signer_id = fields[0];
        const std::filesystem::path rel = fields[1];
        const Label label = parse_label(fields[2]);

        const std::filesystem::path full = root / rel;
        if (!std::filesystem::exists(full)) {
            throw CatalogError(manifest.string() + ":" + std::to_string(line_no) +
                               ": referenced file does not exist: " + full.string());
        }
        OnlineSignature sig = parse_points_file(full);
        sig.signer_id = signer_id;
        sig.label = label;

        if (!seen_ids.insert({signer_id, sig.sample_id}).second) {
            throw CatalogError(manifest.string() + ":" + std::to_string(line_no) + ": duplicate sample (" +
                               signer_id + ", " + sig.sample_id + ")");
        }

        SignerEntry& entry = by_signer[signer_id];
        entry.signer_id = signer_id;
        (label == Label::genuine ? entry.genuine : entry.forgeries).push_back(std::move(sig));
    }

    DatasetCatalog catalog;
    for (auto& [id, entry] : by_signer) {
        auto by_sample = [](const OnlineSignature& a, const OnlineSignature& b) {
            return a.sample_id < b.sample_id;
        };
        std::sort(entry.genuine.begin(), entry.genuine.end(), by_sample);
        std::sort(entry.forgeries.begin(), entry.forgeries.end(), by_sample);
        catalog.signers.push_back(std::move(entry));
    }
    return catalog;
}

}  // namespace sigver
