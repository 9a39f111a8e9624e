#include <doctest.h>

#include <cstdio>
#include <random>
#include <sstream>

#include "anicv/pcr_io.hpp"
#include "helpers.hpp"

using namespace anicv;
using namespace anicv::testing;

TEST_CASE("pcr text round trip is bit exact") {
    std::mt19937_64 rng(71);
    for (int t = 0; t < 50; ++t) {
        PcrImage f = random_pcr(rng, 6);
        std::ostringstream out;
        write_pcr(out, f);
        std::istringstream in(out.str());
        PcrImage g = read_pcr(in);
        REQUIRE(*g.grid() == *f.grid());
        REQUIRE(g.values() == f.values());
    }
}

TEST_CASE("pcr reader accepts the documented layout") {
    std::istringstream in(
        "PCR1\n"
        "xlines: 0 0.5 1\n"
        "ylines: 0 1 2\n"
        "values:\n"
        "0.1 0.2\n"
        "0.3 0.4\n");
    PcrImage f = read_pcr(in);
    REQUIRE(f.grid()->cell_count() == 4);
    // Top row of the file is the row with the largest y.
    CHECK(f.value(f.grid()->cell_at(0.25, 1.5)) == 0.1);
    CHECK(f.value(f.grid()->cell_at(0.75, 1.5)) == 0.2);
    CHECK(f.value(f.grid()->cell_at(0.25, 0.5)) == 0.3);
    CHECK(f.value(f.grid()->cell_at(0.75, 0.5)) == 0.4);
}

TEST_CASE("pcr reader rejects malformed input") {
    auto parse = [](const char* text) {
        std::istringstream in(text);
        return read_pcr(in);
    };
    CHECK_THROWS_AS(parse(""), IoError);
    CHECK_THROWS_AS(parse("PCR2\nxlines: 0 1\nylines: 0 1\nvalues:\n0\n"), IoError);
    CHECK_THROWS_AS(parse("PCR1\nxlines: 0 1\nylines: 0 1\nvalues:\n"), IoError);
    CHECK_THROWS_AS(parse("PCR1\nxlines: 0 1\nylines: 0 1\nvalues:\n1 2\n"), IoError);
    CHECK_THROWS_AS(parse("PCR1\nxlines: 0 zero\nylines: 0 1\nvalues:\n0\n"), IoError);
    CHECK_THROWS_AS(parse("PCR1\nxlines: 1 0\nylines: 0 1\nvalues:\n0\n"), IoError);
}

TEST_CASE("format_double survives parsing") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> d(-10, 10);
    for (int t = 0; t < 1000; ++t) {
        double x = d(rng) * std::pow(10.0, static_cast<int>(rng() % 7) - 3);
        std::string s = format_double(x);
        CHECK(std::stod(s) == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(9.0 / 94.0) == format_double(9.0 / 94.0));
}

TEST_CASE("file level round trip") {
    auto ex = BreakExample::make();
    std::string path = "test_io_tmp.pcr";
    write_pcr_file(path, ex.f);
    PcrImage g = read_pcr_file(path);
    CHECK(*g.grid() == *ex.grid);
    CHECK(g.values() == ex.f.values());
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_pcr_file("does_not_exist.pcr"), IoError);
}
