#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sigver/errors.hpp"
#include "sigver/points_io.hpp"
#include "sigver/rng.hpp"

using namespace sigver;

namespace {

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "sigver_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("point file parsing") {
    SUBCASE("count header plus rows") {
        const OnlineSignature sig = parse_points_text("3\n0 0\n1 2\n3 4");
        REQUIRE(sig.points.size() == 3);
        CHECK(sig.points[0] == Point{0, 0});
        CHECK(sig.points[1] == Point{1, 2});
        CHECK(sig.points[2] == Point{3, 4});
    }

    SUBCASE("extra columns ignored") {
        const OnlineSignature sig = parse_points_text("2\n0 0 100 5\n1 1 110 5");
        REQUIRE(sig.points.size() == 2);
        CHECK(sig.points[1] == Point{1, 1});
    }

    SUBCASE("single point is a format error") {
        CHECK_THROWS_AS(parse_points_text("1\n0 0"), ParseError);
    }

    SUBCASE("no header needed") {
        const OnlineSignature sig = parse_points_text("0.5 -1.25\n2 3\n");
        REQUIRE(sig.points.size() == 2);
        CHECK(sig.points[0].x == 0.5);
        CHECK(sig.points[0].y == -1.25);
    }

    SUBCASE("count mismatch reported") {
        CHECK_THROWS_AS(parse_points_text("4\n0 0\n1 1"), ParseError);
    }

    SUBCASE("comments and blank lines skipped") {
        const OnlineSignature sig = parse_points_text("# header comment\n2\n\n0 0\n# mid\n1 1\n");
        CHECK(sig.points.size() == 2);
    }

    SUBCASE("malformed row names the line") {
        try {
            parse_points_text("2\n0 0\n1 abc", "f.txt");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("f.txt:3") != std::string::npos);
        }
    }

    SUBCASE("non-finite coordinates rejected") {
        CHECK_THROWS_AS(parse_points_text("2\n0 0\nnan 1"), ParseError);
        CHECK_THROWS_AS(parse_points_text("2\n0 0\ninf 1"), ParseError);
    }
}

TEST_CASE("point file round trip preserves coordinates exactly") {
    Rng rng(42);
    OnlineSignature sig;
    for (int i = 0; i < 50; ++i) {
        sig.points.push_back({rng.normal(0.0, 123.456), rng.normal(2.5, 0.001)});
    }
    const OnlineSignature back = parse_points_text(points_to_text(sig));
    REQUIRE(back.points.size() == sig.points.size());
    for (std::size_t i = 0; i < sig.points.size(); ++i) {
        CHECK(back.points[i].x == sig.points[i].x);
        CHECK(back.points[i].y == sig.points[i].y);
    }
}

TEST_CASE("catalog loading") {
    const auto dir = temp_dir();
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir / "s1");
    std::filesystem::create_directories(dir / "s2");

    write_file(dir / "s1" / "a.txt", "2\n0 0\n1 1\n");
    write_file(dir / "s1" / "b.txt", "2\n0 0\n2 2\n");
    write_file(dir / "s1" / "f.txt", "2\n5 5\n6 6\n");
    write_file(dir / "s2" / "a.txt", "2\n0 1\n1 0\n");
    write_file(dir / "s2" / "b.txt", "2\n0 2\n2 0\n");
    write_file(dir / "s2" / "f.txt", "2\n9 9\n8 8\n");

    SUBCASE("groups and counts") {
        write_file(dir / "manifest.csv",
                   "signer_id,path,label\n"
                   "s1,s1/a.txt,genuine\ns1,s1/b.txt,genuine\ns1,s1/f.txt,forgery\n"
                   "s2,s2/a.txt,genuine\ns2,s2/b.txt,genuine\ns2,s2/f.txt,forgery\n");
        const DatasetCatalog cat = load_catalog(dir, dir / "manifest.csv");
        REQUIRE(cat.signers.size() == 2);
        CHECK(cat.signers[0].signer_id == "s1");
        CHECK(cat.signers[0].genuine.size() == 2);
        CHECK(cat.signers[0].forgeries.size() == 1);
        CHECK(cat.signers[1].genuine.size() == 2);
        CHECK(cat.signers[0].genuine[0].sample_id == "a");
        CHECK(cat.signers[0].genuine[0].label == Label::genuine);
    }

    SUBCASE("empty manifest yields empty catalog") {
        write_file(dir / "manifest.csv", "signer_id,path,label\n");
        const DatasetCatalog cat = load_catalog(dir, dir / "manifest.csv");
        CHECK(cat.signers.empty());
        CHECK(cat.total_samples() == 0);
    }

    SUBCASE("missing file names the path") {
        write_file(dir / "manifest.csv", "signer_id,path,label\ns1,s1/nope.txt,genuine\n");
        try {
            load_catalog(dir, dir / "manifest.csv");
            FAIL("expected CatalogError");
        } catch (const CatalogError& e) {
            CHECK(std::string(e.what()).find("nope.txt") != std::string::npos);
        }
    }

    SUBCASE("duplicate sample id rejected") {
        write_file(dir / "manifest.csv",
                   "signer_id,path,label\ns1,s1/a.txt,genuine\ns1,s1/a.txt,genuine\n");
        CHECK_THROWS_AS(load_catalog(dir, dir / "manifest.csv"), CatalogError);
    }

    SUBCASE("bad label rejected") {
        write_file(dir / "manifest.csv", "signer_id,path,label\ns1,s1/a.txt,unknown\n");
        CHECK_THROWS_AS(load_catalog(dir, dir / "manifest.csv"), CatalogError);
    }

    SUBCASE("iteration order is stable across loads") {
        write_file(dir / "manifest.csv",
                   "signer_id,path,label\n"
                   "s2,s2/b.txt,genuine\ns1,s1/b.txt,genuine\ns1,s1/a.txt,genuine\ns2,s2/a.txt,genuine\n");
        const DatasetCatalog c1 = load_catalog(dir, dir / "manifest.csv");
        const DatasetCatalog c2 = load_catalog(dir, dir / "manifest.csv");
        REQUIRE(c1.signers.size() == c2.signers.size());
        CHECK(c1.signers[0].signer_id == "s1");
        CHECK(c1.signers[0].genuine[0].sample_id == "a");
        for (std::size_t s = 0; s < c1.signers.size(); ++s) {
            for (std::size_t i = 0; i < c1.signers[s].genuine.size(); ++i) {
                CHECK(c1.signers[s].genuine[i].sample_id == c2.signers[s].genuine[i].sample_id);
            }
        }
    }
}
