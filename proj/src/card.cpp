#include "sigver/card.hpp"

#include <fstream>

#include <json.hpp>

#include "sigver/errors.hpp"

namespace sigver {

using nlohmann::json;

namespace {
constexpr const char* kFormatTag = "ucss-card/1";
}

bool EnrollmentCard::has_segments() const {
    for (const Reference& r : references) {
        if (r.segments.size() != r.codes.size()) return false;
    }
    return !references.empty();
}

bool EnrollmentCard::has_profiles() const {
    for (const Reference& r : references) {
        if (r.profile.size() < 2) return false;
    }
    return !references.empty();
}

void save_card(const std::filesystem::path& path, const EnrollmentCard& card) {
    json j;
    j["format"] = kFormatTag;
    j["signer_id"] = card.signer_id;
    j["pipeline"] = {{"max_step", card.params.max_step}, {"dilation_radius", card.params.dilation_radius}};

    json refs = json::array();
    for (std::size_t i = 0; i < card.references.size(); ++i) {
        const EnrollmentCard::Reference& r = card.references[i];
        json jr;
        jr["ref"] = i + 1;
        jr["sample_id"] = r.sample_id;

        json codes = json::array();
        for (const SegmentCode& c : r.codes) {
            json rec = json::array();
            for (double v : c.coords) rec.push_back(v);
            rec.push_back(c.length);
            codes.push_back(std::move(rec));
        }
        jr["codes"] = std::move(codes);

        if (!r.segments.empty()) {
            json segs = json::array();
            for (const Ucss& s : r.segments) {
                json js;
                js["kind"] = segment_kind_name(s.kind);
                json pts = json::array();
                for (const Point& p : s.points) pts.push_back(json::array({p.x, p.y}));
                js["points"] = std::move(pts);
                segs.push_back(std::move(js));
            }
            jr["segments"] = std::move(segs);
        }
        if (!r.profile.empty()) jr["profile"] = r.profile;
        refs.push_back(std::move(jr));
    }
    j["references"] = std::move(refs);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write card: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("short write: " + path.string());
}

EnrollmentCard load_card(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open card: " + path.string());

    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": invalid JSON: " + e.what());
    }

    try {
        if (j.at("format").get<std::string>() != kFormatTag) {
            throw IoError(path.string() + ": unrecognized card format tag");
        }
        EnrollmentCard card;
        card.signer_id = j.at("signer_id").get<std::string>();
        card.params.max_step = j.at("pipeline").at("max_step").get<double>();
        card.params.dilation_radius = j.at("pipeline").at("dilation_radius").get<int>();

        for (const json& jr : j.at("references")) {
            EnrollmentCard::Reference r;
            r.sample_id = jr.at("sample_id").get<std::string>();
            for (const json& rec : jr.at("codes")) {
                if (!rec.is_array() || rec.size() != 9) {
                    throw IoError(path.string() + ": code record must hold 9 scalars");
                }
                SegmentCode c;
                for (std::size_t k = 0; k < 8; ++k) c.coords[k] = rec[k].get<double>();
                c.length = rec[8].get<int>();
                r.codes.push_back(c);
            }
            if (jr.contains("segments")) {
                for (const json& js : jr.at("segments")) {
                    Ucss s;
                    s.kind = parse_segment_kind(js.at("kind").get<std::string>());
                    for (const json& pt : js.at("points")) {
                        s.points.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
                    }
                    r.segments.push_back(std::move(s));
                }
                if (r.segments.size() != r.codes.size()) {
                    throw IoError(path.string() + ": segments/codes count mismatch");
                }
            }
            if (jr.contains("profile")) r.profile = jr.at("profile").get<Profile>();
            card.references.push_back(std::move(r));
        }
        return card;
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": malformed card: " + e.what());
    }
}

}  // namespace sigver
