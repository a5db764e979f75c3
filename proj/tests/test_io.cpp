#include <doctest.h>

#include <random>

#include "indmath/pgm.hpp"
#include "indmath/scenario.hpp"
#include "test_util.hpp"

using namespace indmath;
using testutil::TempDir;

TEST_CASE("pgm write/read roundtrip preserves pixels") {
    TempDir dir("indmath-pgm");
    std::mt19937 rng(4);
    std::uniform_int_distribution<int> u(0, 255);
    imaging::GrayImage img(37, 23);
    for (double& p : img.pixels) p = u(rng);

    const auto path = dir.file("img.pgm");
    io::write_pgm(img, path);
    const auto back = io::read_pgm(path);
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    CHECK(back.pixels == img.pixels);

    // read -> write -> read is byte stable for conforming files
    const auto second = dir.file("img2.pgm");
    io::write_pgm(back, second);
    CHECK(testutil::slurp(path) == testutil::slurp(second));
}

TEST_CASE("pgm rejects unsupported and corrupt inputs") {
    TempDir dir("indmath-pgm");
    CHECK_THROWS_AS(io::read_pgm(dir.file("missing.pgm")), FileNotFound);

    const auto color = dir.file("color.ppm");
    testutil::spit(color, "P6\n2 2\n255\n0123456789AB");
    CHECK_THROWS_AS(io::read_pgm(color), UnsupportedFormat);

    const auto deep = dir.file("deep.pgm");
    testutil::spit(deep, "P5\n2 2\n65535\n\0\1\2\3\4\5\6\7");
    CHECK_THROWS_AS(io::read_pgm(deep), UnsupportedFormat);

    const auto garbled = dir.file("garbled.pgm");
    testutil::spit(garbled, "P5\nnot-a-number 2\n255\n....");
    CHECK_THROWS_AS(io::read_pgm(garbled), CorruptHeader);

    const auto truncated = dir.file("short.pgm");
    testutil::spit(truncated, "P5\n4 4\n255\nab");
    CHECK_THROWS_AS(io::read_pgm(truncated), CorruptHeader);
}

TEST_CASE("pgm write clamps intensities to [0,255]") {
    TempDir dir("indmath-pgm");
    imaging::GrayImage img(3, 1);
    img.pixels = {-12.0, 128.4, 300.0};
    const auto path = dir.file("clamp.pgm");
    io::write_pgm(img, path);
    const auto back = io::read_pgm(path);
    CHECK(back.pixels[0] == 0.0);
    CHECK(back.pixels[1] == 128.0);
    CHECK(back.pixels[2] == 255.0);
}

namespace {

const char* kSources =
    "id,x_m,y_m,h_m,q_gps\n"
    "s1,0,0,12,4.2\n"
    "s2,700,100,8,1.3\n"
    "s3,-500,400,15,2.8\n"
    "s4,300,-600,10,0.7\n";

const char* kReceptors =
    "id,x_m,y_m,area_m2,deposition_mg_m2\n"
    "r1,250,80,0.05,90.1\n"
    "r2,-180,-160,0.05,88.2\n"
    "r3,930,300,0.05,31.7\n"
    "r4,560,-120,0.05,53.6\n"
    "r5,-710,620,0.05,40.7\n"
    "r6,-350,240,0.05,76.5\n"
    "r7,520,-780,0.05,25.0\n"
    "r8,120,-420,0.05,53.8\n"
    "r9,150,-80,0.05,113.3\n";

const char* kWind =
    "start,duration_s,speed_mps,dir_deg_toward\n"
    "2015-06-01T00:00,1800,3.0,5\n"
    "2015-06-01T00:30,1800,6.0,15\n"
    "2015-06-01T01:00,1800,3.0,25\n";

}  // namespace

TEST_CASE("scenario ingestion counts and validates rows") {
    TempDir dir("indmath-scen");
    const auto s = dir.file("sources.csv");
    const auto r = dir.file("receptors.csv");
    const auto w = dir.file("wind.csv");
    testutil::spit(s, kSources);
    testutil::spit(r, kReceptors);
    testutil::spit(w, kWind);

    const auto scenario = io::ingest_scenario(s, r, w);
    CHECK(scenario.sources.size() == 4);
    CHECK(scenario.receptors.size() == 9);
    CHECK(scenario.wind.size() == 3);
    CHECK(scenario.sources[1].id == "s2");
    CHECK(scenario.receptors[8].measured_deposition == 113.3);
    CHECK(scenario.wind[1].speed == 6.0);
}

TEST_CASE("scenario parse errors name file, line and field") {
    TempDir dir("indmath-scen");
    const auto r = dir.file("receptors.csv");

    // row with the area cell missing entirely
    testutil::spit(r,
                   "id,x_m,y_m,area_m2,deposition_mg_m2\n"
                   "r1,250,80,0.05,90.1\n"
                   "r2,-180,-160,88.2\n");
    try {
        io::read_receptors_csv(r);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.file() == r);
    }

    const auto s = dir.file("sources.csv");
    testutil::spit(s,
                   "id,x_m,y_m,h_m,q_gps\n"
                   "s1,0,0,12,fast\n");
    try {
        io::read_sources_csv(s);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.field() == "q_gps");
        CHECK(e.line() == 2);
    }
}

TEST_CASE("unit-bearing headers are mandatory") {
    TempDir dir("indmath-scen");
    const auto w = dir.file("wind.csv");
    testutil::spit(w,
                   "start,duration,speed,direction\n"
                   "t0,1800,3.0,5\n");
    CHECK_THROWS_AS(io::read_wind_csv(w), UnitHeaderMismatch);
    CHECK_THROWS_AS(io::read_wind_csv(dir.file("nope.csv")), FileNotFound);
}

TEST_CASE("csv values carry 12 significant digits") {
    CHECK(io::format_value(0.27279220613578553) == "0.272792206136");
    CHECK(io::format_value(8.6157117207394519e-05) == "8.61571172074e-05");
    CHECK(io::format_value(1.0) == "1");
}
