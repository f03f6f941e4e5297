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

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "blepin/channel.hpp"
#include "blepin/errors.hpp"
#include "blepin/frame.hpp"
#include "blepin/simulator.hpp"

namespace blepin {

// CSV formats:
//   measurement input   header `distance_m,rssi_dbm`
//   sweep output        header `scenario,distance_m,trial,rssi_dbm,delivered`
//   overlay output      header `scenario,distance_m,expected_rssi_dbm`
//   trace output        records `time_ms,dir,frame,rssi_dbm,delivered`
// Doubles are written in shortest round-trip form, so identical runs
// serialize byte-identically.

/// Shortest decimal string that parses back to exactly this value.
inline std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw Error("cannot format double");
    }
    return std::string(buf, ptr);
}

inline constexpr std::string_view kMeasurementHeader = "distance_m,rssi_dbm";
inline constexpr std::string_view kSweepHeader =
    "scenario,distance_m,trial,rssi_dbm,delivered";
inline constexpr std::string_view kExpectedHeader =
    "scenario,distance_m,expected_rssi_dbm";

inline void write_sweep_csv(std::ostream& os, const SweepReport& report) {
    os << kSweepHeader << '\n';
    for (const auto& row : report.rows) {
        os << row.scenario << ',' << format_double(row.distance_m) << ','
           << row.trial << ',' << format_double(row.rssi_dbm) << ','
           << (row.delivered ? '1' : '0') << '\n';
    }
}

inline void write_expected_csv(std::ostream& os, const Scenario& scenario,
                               std::span<const double> distances) {
    const std::string label(scenario_label(scenario));
    os << kExpectedHeader << '\n';
    for (double d : distances) {
        os << label << ',' << format_double(d) << ','
           << format_double(expected_rssi(scenario, d)) << '\n';
    }
}

/// Line-delimited attempt records; the frame is the hex of its encoding.
inline void write_trace(std::ostream& os, const SessionTrace& trace) {
    for (const auto& ev : trace.events) {
        os << ev.time_ms << ',' << to_string(ev.dir) << ','
           << frame_hex(ev.frame) << ',' << format_double(ev.rssi_dbm) << ','
           << (ev.delivered ? '1' : '0') << '\n';
    }
}

namespace detail {

inline std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

inline double parse_csv_double(std::string_view field, std::size_t line_no,
                               std::string_view name) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty()) {
        throw CsvError(line_no, "cannot parse " + std::string(name) + " '" +
                                    std::string(field) + "'");
    }
    return value;
}

} // namespace detail

/// Reads measurement samples. Strict two-column format; tolerates CRLF
/// line endings and blank lines. Errors carry 1-based line numbers.
inline std::vector<RssiSample> read_measurement_csv(std::istream& is) {
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<RssiSample> samples;
    while (std::getline(is, raw)) {
        ++line_no;
        const std::string_view line = detail::strip_cr(raw);
        if (line.empty()) {
            continue;
        }
        if (!header_seen) {
            if (line != kMeasurementHeader) {
                throw CsvError(line_no, "expected header '" +
                                            std::string(kMeasurementHeader) +
                                            "', got '" + std::string(line) +
                                            "'");
            }
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos ||
            line.find(',', comma + 1) != std::string_view::npos) {
            throw CsvError(line_no, "expected 2 fields");
        }
        const double d = detail::parse_csv_double(line.substr(0, comma),
                                                  line_no, "distance_m");
        const double rssi = detail::parse_csv_double(line.substr(comma + 1),
                                                     line_no, "rssi_dbm");
        if (!(d > 0.0)) {
            throw CsvError(line_no, "distance_m must be > 0, got " +
                                        std::string(line.substr(0, comma)));
        }
        RssiSample sample;
        sample.distance_m = d;
        sample.rssi_dbm = rssi;
        samples.push_back(std::move(sample));
    }
    if (!header_seen) {
        throw CsvError(1, "missing header '" + std::string(kMeasurementHeader) +
                              "'");
    }
    return samples;
}

inline std::vector<RssiSample>
read_measurement_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return read_measurement_csv(is);
}

/// Writes the whole buffer in one shot so failed runs leave no partial file.
inline void write_text_file(const std::filesystem::path& path,
                            std::string_view content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) {
        throw IoError("cannot write '" + path.string() + "'");
    }
}

/// Runs the four canonical sweeps and writes `<label>_sweep.csv` plus
/// `<label>_expected.csv` for each into out_dir. Returns the written
/// paths in a deterministic order.
inline std::vector<std::filesystem::path>
write_figure_files(std::uint64_t seed, std::uint32_t trials,
                   const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create directory '" + out_dir.string() + "': " +
                      ec.message());
    }
    std::vector<std::filesystem::path> written;
    for (const auto& spec : canonical_figures()) {
        const SweepReport report =
            sweep_distance(spec.scenario, spec.distances, trials, seed);
        std::ostringstream sweep_buf;
        write_sweep_csv(sweep_buf, report);
        std::ostringstream expected_buf;
        write_expected_csv(expected_buf, spec.scenario, spec.distances);

        const auto sweep_path = out_dir / (report.scenario + "_sweep.csv");
        const auto expected_path =
            out_dir / (report.scenario + "_expected.csv");
        write_text_file(sweep_path, sweep_buf.str());
        write_text_file(expected_path, expected_buf.str());
        written.push_back(sweep_path);
        written.push_back(expected_path);
    }
    return written;
}

} // namespace blepin
