#include <doctest.h>

#include <filesystem>
#include <random>

#include "ikc/fixtures.hpp"
#include "ikc/io.hpp"
#include "ikc/random.hpp"

using namespace ikc;

namespace {

bool same(const KnotComplex& a, const KnotComplex& b) {
    return a.names == b.names && a.grw == b.grw && a.grz == b.grz && a.d == b.d && a.has_iota == b.has_iota &&
           (!a.has_iota || a.iota == b.iota);
}

bool same(const UComplex& a, const UComplex& b) { return a.names == b.names && a.gr == b.gr && a.d == b.d; }

std::filesystem::path scratch_dir(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("ikc_io_" + tag);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("knot files round trip") {
    for (const auto& k : {unknot(), trefoil(), figure_eight(), fixture_c1(), fixture_c2(), fixture_c3(), fixture_c4(),
                          fixture_c5(), fixture_c6(), fixture_c7(), tensor_with_iota(fixture_c1(), fixture_c2())}) {
        json j = knot_to_json(k);
        CHECK(format_tag(j) == "ikc/1");
        KnotComplex back = knot_from_json(parse_json(dump(j)));
        CHECK(same(k, back));
        CHECK(dump(knot_to_json(back)) == dump(j));
    }
}

TEST_CASE("iota-complex files round trip") {
    KnotExample k = knot_example();
    for (const auto& ic : {trivial_iota(), k.a0, k.c, a0_iota(figure_eight())}) {
        UFile f = ufile_from_json(parse_json(dump(ufile_to_json(ufile_of(ic)))));
        CHECK_FALSE(f.almost);
        IotaComplex back = iota_complex_of(f);
        CHECK(same(back.base, ic.base));
        CHECK(back.iota.m == ic.iota.m);
    }
    AlmostIotaComplex s = standard_complex(parse_std_params("+,-1,+,-3"));
    UFile f = ufile_from_json(parse_json(dump(ufile_to_json(ufile_of(s)))));
    CHECK(f.almost);
    CHECK_THROWS_AS(iota_complex_of(f), format_error);
    AlmostIotaComplex back = almost_complex_of(f);
    CHECK(same(back.base, s.base));
    CHECK(back.omega.m == s.omega.m);

    std::mt19937 rng(11);
    for (int t = 0; t < 30; ++t) {
        UComplex c = random_complex(rng, 7);
        UFile u;
        u.c = c;
        UFile r = ufile_from_json(parse_json(dump(ufile_to_json(u))));
        CHECK(same(r.c, c));
        CHECK_FALSE(r.iota.has_value());
    }
}

TEST_CASE("uc/1 powers are checked against the gradings") {
    json j = parse_json(R"({"format": "uc/1",
        "generators": [{"name": "a", "gr": 0}, {"name": "b", "gr": 1}],
        "diff": [["a", "b", 1]]})");
    UFile f = ufile_from_json(j);
    CHECK(f.c.d.get(0, 1));
    j["diff"][0][2] = 2;
    CHECK_THROWS_AS(ufile_from_json(j), format_error);
    j["diff"][0] = json::array({"a", "b"});
    CHECK_THROWS_AS(ufile_from_json(j), format_error);
}

TEST_CASE("hyperbox files round trip") {
    std::mt19937 rng(5);
    for (const auto& size : std::vector<std::vector<int>>{{1}, {2}, {1, 1}, {1, 2}, {1, 1, 1}, {1, 1, 3}}) {
        Hyperbox h = random_hyperbox(rng, size, 5);
        Hyperbox back = hyperbox_from_json(parse_json(dump(hyperbox_to_json(h))));
        CHECK(back == h);
        CHECK(validate(back).empty());
    }
}

TEST_CASE("malformed files are rejected") {
    CHECK_THROWS_AS(parse_json("{\"format\": "), format_error);
    CHECK_THROWS_AS(format_tag(parse_json("{}")), format_error);
    CHECK_THROWS_AS(knot_from_json(parse_json(R"({"format": "uc/1", "generators": []})")), format_error);
    // duplicate names
    CHECK_THROWS_AS(knot_from_json(parse_json(R"({"format": "ikc/1",
        "generators": [{"name": "x", "grw": 0, "grz": 0}, {"name": "x", "grw": 0, "grz": 0}], "diff": []})")),
                    format_error);
    // arrow to an unknown generator
    CHECK_THROWS_AS(knot_from_json(parse_json(R"({"format": "ikc/1",
        "generators": [{"name": "x", "grw": 0, "grz": 0}], "diff": [["x", "y"]]})")),
                    format_error);
    CHECK_THROWS_AS(read_file("/nonexistent/ikc/file.json"), io_error);
}

TEST_CASE("atomic writes and hashing") {
    auto dir = scratch_dir("write");
    std::string path = (dir / "out.json").string();
    write_file_atomic(path, "first\n");
    write_file_atomic(path, "second\n");
    CHECK(read_file(path) == "second\n");
    int entries = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
    CHECK(entries == 1);
    CHECK_THROWS_AS(write_file_atomic((dir / "missing" / "x.json").string(), "x"), io_error);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    std::filesystem::remove_all(dir);
}
