// Copyright 2026 the blepin authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <blepin/csv.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace blepin;
namespace fs = std::filesystem;

namespace {

std::vector<RssiSample> parse(std::string_view text) {
    std::istringstream is{std::string(text)};
    return read_measurement_csv(is);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) {
        n += c == '\n' ? 1 : 0;
    }
    return n;
}

// Unique scratch directory per test run; removed on destruction.
struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("blepin_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static std::size_t& counter() {
        static std::size_t n = 0;
        return n;
    }
};

} // namespace

TEST_CASE("doubles serialize in shortest round-trip form") {
    REQUIRE(format_double(1.0) == "1");
    REQUIRE(format_double(-45.0) == "-45");
    REQUIRE(format_double(2.5) == "2.5");
    REQUIRE(format_double(0.1) == "0.1");
    REQUIRE(format_double(16.5) == "16.5");

    SECTION("random values parse back bit-exactly") {
        SplitMix64 rng(2026);
        for (int i = 0; i < 2000; ++i) {
            const double x = rng.next_gaussian() * 100.0;
            const std::string s = format_double(x);
            double back = 0.0;
            const auto [ptr, ec] =
                std::from_chars(s.data(), s.data() + s.size(), back);
            REQUIRE(ec == std::errc());
            REQUIRE(ptr == s.data() + s.size());
            REQUIRE(back == x);
        }
    }
}

TEST_CASE("sweep rows serialize to the documented columns") {
    SweepReport r;
    r.scenario = "flat";
    r.rows.push_back({"flat", 1.0, 0, -45.0, true});
    r.rows.push_back({"flat", 2.5, 1, -51.5, false});
    std::ostringstream os;
    write_sweep_csv(os, r);
    REQUIRE(os.str() == "scenario,distance_m,trial,rssi_dbm,delivered\n"
                        "flat,1,0,-45,1\n"
                        "flat,2.5,1,-51.5,0\n");
}

TEST_CASE("overlay rows carry the model curve") {
    const ScenarioParams flat{"flat", 2.0, -45.0, 1.0, 0.0};
    const std::vector<double> ds = {1.0, 10.0};
    std::ostringstream os;
    write_expected_csv(os, flat, ds);
    REQUIRE(os.str() == "scenario,distance_m,expected_rssi_dbm\n"
                        "flat,1,-45\n"
                        "flat,10,-65\n");
}

TEST_CASE("trace records are headerless time,dir,hex,rssi,delivered lines") {
    SessionTrace t;
    t.events.push_back(
        {100, Direction::PeripheralToCentral, KeyPress{'7'}, -60.5, true, 0,
         false});
    t.events.push_back(
        {130, Direction::CentralToPeripheral, Locked{30000}, -91.25, false, 1,
         false});
    std::ostringstream os;
    write_trace(os, t);
    REQUIRE(os.str() == "100,p2c,0137,-60.5,1\n"
                        "130,c2p,0600007530,-91.25,0\n");
}

TEST_CASE("measurement files parse strictly") {
    SECTION("well formed input") {
        const auto samples = parse("distance_m,rssi_dbm\n1,-45\n2.5,-51.5\n");
        REQUIRE(samples.size() == 2);
        REQUIRE(samples[0].distance_m == 1.0);
        REQUIRE(samples[0].rssi_dbm == -45.0);
        REQUIRE(samples[1].distance_m == 2.5);
        REQUIRE(samples[1].rssi_dbm == -51.5);
    }

    SECTION("CRLF endings and blank lines are tolerated") {
        const auto samples =
            parse("\ndistance_m,rssi_dbm\r\n\r\n1,-45\r\n\n2,-51\n\n");
        REQUIRE(samples.size() == 2);
        REQUIRE(samples[1].distance_m == 2.0);
    }

    SECTION("a header-only file is empty, not an error") {
        REQUIRE(parse("distance_m,rssi_dbm\n").empty());
    }

    SECTION("a wrong header fails on its line") {
        try {
            parse("distance,rssi\n1,-45\n");
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            REQUIRE(e.line() == 1);
            REQUIRE_THAT(e.what(),
                         Catch::Matchers::ContainsSubstring("expected header"));
        }
    }

    SECTION("an empty stream is missing its header") {
        try {
            parse("");
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            REQUIRE(e.line() == 1);
        }
    }

    SECTION("field count errors name the offending line") {
        try {
            parse("distance_m,rssi_dbm\n1,-45\n1,-45,9\n");
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            REQUIRE(e.line() == 3);
            REQUIRE_THAT(e.what(),
                         Catch::Matchers::ContainsSubstring("line 3"));
        }
        REQUIRE_THROWS_AS(parse("distance_m,rssi_dbm\n1\n"), CsvError);
    }

    SECTION("unparsable numbers name field and line") {
        try {
            parse("distance_m,rssi_dbm\nabc,-45\n");
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            REQUIRE(e.line() == 2);
            REQUIRE_THAT(e.what(),
                         Catch::Matchers::ContainsSubstring("distance_m"));
        }
        REQUIRE_THROWS_AS(parse("distance_m,rssi_dbm\n1,\n"), CsvError);
        REQUIRE_THROWS_AS(parse("distance_m,rssi_dbm\n1,-45x\n"), CsvError);
    }

    SECTION("distances must be positive") {
        REQUIRE_THROWS_AS(parse("distance_m,rssi_dbm\n0,-45\n"), CsvError);
        REQUIRE_THROWS_AS(parse("distance_m,rssi_dbm\n-1,-45\n"), CsvError);
    }
}

TEST_CASE("measurement files round-trip through the filesystem") {
    TempDir tmp;
    const fs::path file = tmp.path / "measure.csv";
    write_text_file(file, "distance_m,rssi_dbm\n1,-45\n3,-58.25\n");
    const auto samples = read_measurement_file(file);
    REQUIRE(samples.size() == 2);
    REQUIRE(samples[1].distance_m == 3.0);
    REQUIRE(samples[1].rssi_dbm == -58.25);

    SECTION("missing files raise an io error") {
        REQUIRE_THROWS_AS(read_measurement_file(tmp.path / "nope.csv"),
                          IoError);
    }

    SECTION("unwritable paths raise an io error") {
        REQUIRE_THROWS_AS(write_text_file(tmp.path / "no" / "dir.csv", "x"),
                          IoError);
    }
}

TEST_CASE("figure export writes one sweep and one overlay per environment") {
    TempDir tmp;
    const auto written = write_figure_files(7, 5, tmp.path / "figs");
    REQUIRE(written.size() == 8);
    const std::vector<std::string> names = {
        "indoor_sweep.csv",   "indoor_expected.csv", "outdoor_sweep.csv",
        "outdoor_expected.csv", "combined_sweep.csv", "combined_expected.csv",
        "ground_sweep.csv",   "ground_expected.csv"};
    for (std::size_t i = 0; i < written.size(); ++i) {
        REQUIRE(written[i].filename().string() == names[i]);
        REQUIRE(fs::exists(written[i]));
    }

    const std::vector<std::size_t> grid_sizes = {15, 13, 20, 10};
    for (std::size_t i = 0; i < 4; ++i) {
        REQUIRE(count_lines(slurp(written[2 * i])) == 1 + grid_sizes[i] * 5);
        REQUIRE(count_lines(slurp(written[2 * i + 1])) == 1 + grid_sizes[i]);
    }

    SECTION("a second run with the same seed is byte-identical") {
        TempDir tmp2;
        const auto again = write_figure_files(7, 5, tmp2.path / "figs");
        for (std::size_t i = 0; i < written.size(); ++i) {
            REQUIRE(slurp(written[i]) == slurp(again[i]));
        }
    }

    SECTION("a different seed changes the sweeps but not the overlays") {
        TempDir tmp2;
        const auto other = write_figure_files(8, 5, tmp2.path / "figs");
        REQUIRE(slurp(written[0]) != slurp(other[0]));
        REQUIRE(slurp(written[1]) == slurp(other[1]));
    }
}
