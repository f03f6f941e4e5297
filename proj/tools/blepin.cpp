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

// blepin: command-line surface of the BLE PIN-authentication simulator.
//
// Subcommands: sweep, fit, session, interactive, reproduce-figures.
// Exit codes: 0 success, 2 usage or validation error, 3 I/O error,
// 4 degenerate input. Every command except `interactive` is a pure
// function of its arguments, seed included.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <blepin/blepin.hpp>

#include <CLI11.hpp>

#include <termios.h>
#include <unistd.h>

namespace {

using namespace blepin;

// ---------------------------------------------------------------------------
// Shared scenario plumbing

struct ScenarioFlags {
    std::string name = "indoor";
    std::string composite; ///< "start:preset[:offset_db];..." when non-empty
    std::optional<double> alpha;
    std::optional<double> sigma;
    std::optional<double> rssi0;
    std::optional<double> d0;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& flags) {
    cmd->add_option("--scenario", flags.name,
                    "Scenario preset: indoor, outdoor, combined, ground")
        ->capture_default_str();
    cmd->add_option("--composite", flags.composite,
                    "Piecewise scenario, segments 'start_m:preset[:offset_db]' "
                    "joined by ';' (e.g. '0:combined;16:outdoor:6')");
    cmd->add_option("--alpha", flags.alpha, "Override path-loss exponent");
    cmd->add_option("--sigma", flags.sigma, "Override shadowing sigma [dB]");
    cmd->add_option("--rssi0", flags.rssi0,
                    "Override RSSI at the reference distance [dBm]");
    cmd->add_option("--d0", flags.d0, "Override reference distance [m]");
}

double parse_number(std::string_view text, const std::string& what) {
    double value = 0.0;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw ValidationError("cannot parse " + what + " '" +
                              std::string(text) + "'");
    }
    return value;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find(sep, pos);
        if (next == std::string_view::npos) {
            parts.emplace_back(text.substr(pos));
            break;
        }
        parts.emplace_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    return parts;
}

CompositeScenario parse_composite(const std::string& spec) {
    CompositeScenario comp;
    comp.name = "composite";
    for (const auto& seg_text : split(spec, ';')) {
        if (seg_text.empty()) {
            continue;
        }
        const auto fields = split(seg_text, ':');
        if (fields.size() < 2 || fields.size() > 3) {
            throw ValidationError("composite segment '" + seg_text +
                                  "' must be start_m:preset[:offset_db]");
        }
        CompositeScenario::Segment seg;
        seg.start_m = parse_number(fields[0], "segment start");
        seg.params = scenario_preset(fields[1]);
        seg.offset_db =
            fields.size() == 3 ? parse_number(fields[2], "segment offset") : 0.0;
        comp.segments.push_back(std::move(seg));
    }
    comp.validate();
    return comp;
}

Scenario make_scenario(const ScenarioFlags& flags) {
    if (!flags.composite.empty()) {
        if (flags.alpha || flags.sigma || flags.rssi0 || flags.d0) {
            throw ValidationError(
                "--alpha/--sigma/--rssi0/--d0 apply to preset scenarios, "
                "not --composite");
        }
        return parse_composite(flags.composite);
    }
    ScenarioParams params = scenario_preset(flags.name);
    if (flags.alpha) {
        params.alpha = *flags.alpha;
    }
    if (flags.sigma) {
        params.sigma_db = *flags.sigma;
    }
    if (flags.rssi0) {
        params.rssi_at_d0 = *flags.rssi0;
    }
    if (flags.d0) {
        params.d0 = *flags.d0;
    }
    params.validate();
    return params;
}

std::string fmt(const char* format, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, value);
    return buf;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    ScenarioFlags scenario;
    double from = 0.1;
    double to = 6.0;
    std::size_t points = 20;
    std::vector<double> distances;
    std::uint32_t trials = 100;
    std::uint64_t seed = 1;
    double sensitivity = -90.0;
    double width = 2.0;
    std::string out = "sweep.csv";
    std::string overlay;
};

std::filesystem::path overlay_path(const SweepArgs& args) {
    if (!args.overlay.empty()) {
        return args.overlay;
    }
    std::filesystem::path p(args.out);
    auto stem = p.stem().string() + "_expected";
    return p.parent_path() / (stem + p.extension().string());
}

int cmd_sweep(const SweepArgs& args) {
    const Scenario scenario = make_scenario(args.scenario);
    const std::vector<double> distances =
        args.distances.empty()
            ? log_spaced_grid(args.from, args.to, args.points)
            : args.distances;
    const SweepReport report =
        sweep_distance(scenario, distances, args.trials, args.seed,
                       {args.sensitivity, args.width});

    std::ostringstream sweep_buf;
    write_sweep_csv(sweep_buf, report);
    std::ostringstream overlay_buf;
    write_expected_csv(overlay_buf, scenario, distances);
    write_text_file(args.out, sweep_buf.str());
    write_text_file(overlay_path(args), overlay_buf.str());

    std::cout << "scenario: " << report.scenario << "  trials: " << args.trials
              << "  seed: " << args.seed << "\n";
    std::cout << "distance_m  mean_rssi_dbm  std_db  delivery_rate\n";
    for (const auto& s : report.summary) {
        std::cout << fmt("%10.3f", s.distance_m)
                  << fmt("  %13.2f", s.mean_rssi_dbm) << fmt("  %6.2f", s.std_rssi_db)
                  << fmt("  %13.3f", s.delivery_rate) << "\n";
    }
    std::cout << "wrote " << args.out << " and " << overlay_path(args).string()
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
    std::string input;
    double d0 = 1.0;
    std::optional<double> expect_alpha;
};

int cmd_fit(const FitArgs& args) {
    std::vector<RssiSample> samples;
    try {
        samples = read_measurement_file(args.input);
    } catch (const CsvError& e) {
        // e.what() already carries the line number; add the file name.
        throw ValidationError(args.input + ": " + e.what());
    }
    if (samples.empty()) {
        throw DegenerateInput("'" + args.input +
                              "' holds no measurement rows; need at least 2");
    }
    const PathLossFit fit = fit_path_loss(samples, args.d0);
    std::cout << "n         = " << fit.n << "\n";
    std::cout << "alpha_hat = " << fmt("%.10g", fit.alpha_hat) << "\n";
    std::cout << "rssi0_hat = " << fmt("%.10g", fit.rssi0_hat) << " dBm\n";
    std::cout << "rmse_db   = " << fmt("%.10g", fit.rmse_db) << "\n";
    if (args.expect_alpha) {
        std::cout << "alpha_dev = "
                  << fmt("%.10g", fit.alpha_hat - *args.expect_alpha) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// session

struct SessionArgs {
    ScenarioFlags scenario;
    double distance = 1.0;
    std::uint64_t seed = 1;
    std::string pin = "12AB";
    std::string script;
    std::string pin_attempts;
    std::uint64_t key_interval = 200;
    std::uint32_t max_count = 3;
    std::uint32_t lockout_ms = 30000;
    std::uint64_t horizon_ms = 0; ///< 0 = last key + 2000
    std::uint64_t conn_interval = 30;
    std::uint64_t airtime = 1;
    std::uint32_t retries = 5;
    double sensitivity = -90.0;
    double width = 2.0;
    std::uint64_t telemetry_period = 1000;
    double temp_base = 25.0;
    double temp_amplitude = 0.0;
    std::uint64_t temp_period = 60000;
    double temp_noise = 0.0;
    std::string trace_path;
};

char normalize_key(char key) {
    if (key >= 'a' && key <= 'f') {
        return static_cast<char>(key - 'a' + 'A');
    }
    return key;
}

Script read_script_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    Script script;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::istringstream fields(line);
        std::string time_text;
        std::string key_text;
        if (!(fields >> time_text)) {
            continue; // blank line
        }
        std::string extra;
        if (!(fields >> key_text) || key_text.size() != 1 || fields >> extra) {
            throw ValidationError("script line " + std::to_string(line_no) +
                                  ": expected '<time_ms> <key>'");
        }
        const double t = parse_number(
            time_text, "script line " + std::to_string(line_no) + " time");
        if (t < 0) {
            throw ValidationError("script line " + std::to_string(line_no) +
                                  ": time must be >= 0");
        }
        script.push_back({static_cast<std::uint64_t>(t),
                          normalize_key(key_text[0])});
    }
    std::stable_sort(script.begin(), script.end(),
                     [](const ScriptKey& a, const ScriptKey& b) {
                         return a.time_ms < b.time_ms;
                     });
    return script;
}

Script script_from_attempts(const std::string& attempts,
                            std::uint64_t key_interval) {
    Script script;
    std::uint64_t t = 1000;
    for (const auto& candidate : split(attempts, ',')) {
        if (candidate.size() != kPinLength) {
            throw ValidationError("PIN attempt '" + candidate + "' must be " +
                                  std::to_string(kPinLength) + " symbols");
        }
        for (char raw : candidate) {
            const char key = normalize_key(raw);
            if (!is_pin_symbol(key)) {
                throw ValidationError("PIN attempt '" + candidate +
                                      "' holds a non-keypad symbol");
            }
            script.push_back({t, key});
            t += key_interval;
        }
        script.push_back({t, '#'});
        t += 1000;
    }
    return script;
}

LinkConfig make_link(const ScenarioFlags& scen, double distance,
                     std::uint64_t seed, std::uint64_t conn_interval,
                     std::uint64_t airtime, double sensitivity, double width,
                     std::uint32_t retries) {
    LinkConfig link;
    link.distance_m = distance;
    link.scenario = make_scenario(scen);
    link.seed = seed;
    link.conn_interval_ms = conn_interval;
    link.per_frame_airtime_ms = airtime;
    link.sensitivity_dbm = sensitivity;
    link.logistic_width_db = width;
    link.max_retries = retries;
    return link;
}

void print_session_report(std::ostream& os, const SessionTrace& trace) {
    std::size_t delivered = 0;
    std::size_t dropped = 0;
    for (const auto& ev : trace.events) {
        delivered += ev.delivered ? 1 : 0;
    }
    // A frame is dropped when its last attempt failed. Per direction the
    // queue head stays put until resolved, so an undelivered attempt was
    // final exactly when the next same-direction attempt is not attempt+1.
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const auto& ev = trace.events[i];
        if (ev.delivered) {
            continue;
        }
        bool retried = false;
        for (std::size_t j = i + 1; j < trace.events.size(); ++j) {
            if (trace.events[j].dir == ev.dir) {
                retried = trace.events[j].attempt == ev.attempt + 1;
                break;
            }
        }
        if (!retried) {
            dropped += 1;
        }
    }
    os << "outcome: " << to_string(trace.outcome) << "\n";
    os << "attempts: " << trace.events.size() << " (" << delivered
       << " delivered, " << dropped << " frames dropped)\n";
    const auto latencies = trace.latencies_ms();
    if (latencies.empty()) {
        os << "latency: none recorded\n";
    } else {
        std::uint64_t lo = latencies.front();
        std::uint64_t hi = latencies.front();
        double sum = 0.0;
        for (auto l : latencies) {
            lo = std::min(lo, l);
            hi = std::max(hi, l);
            sum += static_cast<double>(l);
        }
        os << "latency: n=" << latencies.size() << " min=" << lo << " mean="
           << fmt("%.1f", sum / static_cast<double>(latencies.size()))
           << " max=" << hi << " ms\n";
    }
    os << "display:\n" << trace.central.display.render() << "\n";
}

int cmd_session(const SessionArgs& args) {
    if (!args.script.empty() && !args.pin_attempts.empty()) {
        throw ValidationError("--script and --pin-attempts are exclusive");
    }
    const LinkConfig link =
        make_link(args.scenario, args.distance, args.seed, args.conn_interval,
                  args.airtime, args.sensitivity, args.width, args.retries);

    CentralState central;
    central.stored_pin = Pin::from_string(args.pin);
    central.max_count = args.max_count;
    central.lockout_duration_ms = args.lockout_ms;

    PeripheralState peripheral;
    peripheral.telemetry_period_ms = args.telemetry_period;

    TemperatureSource temp;
    temp.base_c = args.temp_base;
    temp.amplitude_c = args.temp_amplitude;
    temp.period_ms = args.temp_period;
    temp.noise_sd_c = args.temp_noise;

    const Script script =
        !args.script.empty()
            ? read_script_file(args.script)
            : script_from_attempts(args.pin_attempts.empty() ? args.pin
                                                             : args.pin_attempts,
                                   args.key_interval);
    std::uint64_t horizon = args.horizon_ms;
    if (horizon == 0) {
        horizon = (script.empty() ? 0 : script.back().time_ms) + 2000;
    }

    const SessionTrace trace =
        run_session(link, peripheral, central, script, horizon, temp);

    if (!args.trace_path.empty()) {
        std::ostringstream buf;
        write_trace(buf, trace);
        write_text_file(args.trace_path, buf.str());
    }
    print_session_report(std::cout, trace);
    if (!args.trace_path.empty()) {
        std::cout << "wrote " << args.trace_path << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// interactive

struct InteractiveArgs {
    ScenarioFlags scenario;
    double distance = 1.0;
    std::uint64_t seed = 1;
    std::string pin = "12AB";
    std::uint32_t max_count = 3;
    std::uint32_t lockout_ms = 30000;
};

struct RawTerminal {
    termios saved{};
    bool active = false;

    RawTerminal() {
        if (tcgetattr(STDIN_FILENO, &saved) == 0) {
            termios raw = saved;
            raw.c_lflag &= ~static_cast<tcflag_t>(ICANON | ECHO);
            raw.c_cc[VMIN] = 1;
            raw.c_cc[VTIME] = 0;
            active = tcsetattr(STDIN_FILENO, TCSANOW, &raw) == 0;
        }
    }
    ~RawTerminal() {
        if (active) {
            tcsetattr(STDIN_FILENO, TCSANOW, &saved);
        }
    }
};

int cmd_interactive(const InteractiveArgs& args) {
    if (isatty(STDIN_FILENO) == 0) {
        std::cerr << "error: interactive mode needs a terminal on stdin\n";
        return 2;
    }
    const LinkConfig link = make_link(args.scenario, args.distance, args.seed,
                                      30, 1, -90.0, 2.0, 5);
    CentralState central;
    central.stored_pin = Pin::from_string(args.pin);
    central.max_count = args.max_count;
    central.lockout_duration_ms = args.lockout_ms;
    const PeripheralState peripheral;
    const TemperatureSource temp;

    // Virtual time advances a fixed step per keypress; each press replays
    // the grown script through the deterministic engine, so the live view
    // always matches what a batch run of the same script would produce.
    constexpr std::uint64_t kKeyStep = 500;
    constexpr std::uint64_t kSettle = 480; // < kKeyStep so windows never overlap

    std::cout << "stored PIN: " << args.pin << "  scenario: "
              << scenario_label(link.scenario) << "  distance: "
              << format_double(args.distance) << " m\n";
    std::cout << "keys: 0-9 A-F enter digits, * resets, # submits, q quits\n";
    std::cout << Display().render() << "\n" << std::flush;

    RawTerminal raw;
    Script script;
    std::uint64_t now = 0;
    std::size_t printed_events = 0;

    for (;;) {
        char ch = 0;
        if (::read(STDIN_FILENO, &ch, 1) != 1) {
            std::cout << "\n";
            return 0;
        }
        if (ch == 'q' || ch == 'Q' || ch == 3 || ch == 4) {
            std::cout << "bye\n";
            return 0;
        }
        const char key = normalize_key(ch);
        if (!is_pin_symbol(key) && key != '*' && key != '#') {
            std::cout << "ignored '" << (std::isprint(ch) ? ch : '?')
                      << "'; keys: 0-9 A-F * # (q quits)\n" << std::flush;
            continue;
        }
        now += kKeyStep;
        script.push_back({now, key});
        const SessionTrace trace =
            run_session(link, peripheral, central, script, now + kSettle, temp);
        std::cout << "[t=" << now << " ms] key '" << key << "'\n";
        for (; printed_events < trace.events.size(); ++printed_events) {
            const auto& ev = trace.events[printed_events];
            std::cout << "  " << ev.time_ms << " ms " << to_string(ev.dir)
                      << " " << frame_name(ev.frame) << " rssi "
                      << fmt("%.1f", ev.rssi_dbm) << " dBm "
                      << (ev.delivered ? "delivered" : "lost")
                      << (ev.attempt > 0
                              ? " (retry " + std::to_string(ev.attempt) + ")"
                              : "")
                      << "\n";
        }
        std::cout << "outcome so far: " << to_string(trace.outcome) << "\n";
        std::cout << trace.central.display.render() << "\n" << std::flush;
    }
}

// ---------------------------------------------------------------------------
// reproduce-figures

struct FiguresArgs {
    std::uint64_t seed = 1;
    std::uint32_t trials = 100;
    std::string out = "figures";
};

int cmd_figures(const FiguresArgs& args) {
    const auto written = write_figure_files(args.seed, args.trials, args.out);
    for (const auto& path : written) {
        std::cout << "wrote " << path.string() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic simulator for a BLE PIN-authentication link"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Config file with key = value lines; flags take precedence");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Sample RSSI and delivery over a distance grid");
    add_scenario_flags(sweep, sweep_args.scenario);
    sweep->add_option("--from", sweep_args.from, "Grid start [m]")
        ->capture_default_str();
    sweep->add_option("--to", sweep_args.to, "Grid end [m]")
        ->capture_default_str();
    sweep->add_option("--points", sweep_args.points,
                      "Log-spaced grid size")
        ->capture_default_str();
    auto* distances_opt =
        sweep->add_option("--distances", sweep_args.distances,
                          "Explicit distance list [m] (overrides the grid)")
            ->delimiter(',');
    distances_opt->excludes("--from")->excludes("--to")->excludes("--points");
    sweep->add_option("--trials", sweep_args.trials, "Trials per distance")
        ->capture_default_str();
    sweep->add_option("--seed", sweep_args.seed, "Root RNG seed")
        ->capture_default_str();
    sweep->add_option("--sensitivity", sweep_args.sensitivity,
                      "Receiver sensitivity midpoint [dBm]")
        ->capture_default_str();
    sweep->add_option("--width", sweep_args.width,
                      "Delivery logistic width [dB]")
        ->capture_default_str();
    sweep->add_option("--out", sweep_args.out, "Sweep CSV path")
        ->capture_default_str();
    sweep->add_option("--overlay", sweep_args.overlay,
                      "Expected-RSSI CSV path (default: <out>_expected.csv)");

    FitArgs fit_args;
    CLI::App* fit = app.add_subcommand(
        "fit", "Fit path-loss parameters to a measurement CSV");
    fit->add_option("--input", fit_args.input, "Measurement CSV")->required();
    fit->add_option("--d0", fit_args.d0, "Reference distance [m]")
        ->capture_default_str();
    fit->add_option("--expect-alpha", fit_args.expect_alpha,
                    "Also print the deviation from this exponent");

    SessionArgs session_args;
    CLI::App* session = app.add_subcommand(
        "session", "Run a scripted authentication session");
    add_scenario_flags(session, session_args.scenario);
    session->add_option("--distance", session_args.distance, "Link distance [m]")
        ->capture_default_str();
    session->add_option("--seed", session_args.seed, "Root RNG seed")
        ->capture_default_str();
    session->add_option("--pin", session_args.pin, "Stored PIN (4 symbols)")
        ->capture_default_str();
    session->add_option("--script", session_args.script,
                        "Keystroke file, lines '<time_ms> <key>'");
    session->add_option("--pin-attempts", session_args.pin_attempts,
                        "Comma-separated PIN candidates typed in order "
                        "(default: the stored PIN once)");
    session->add_option("--key-interval-ms", session_args.key_interval,
                        "Delay between scripted keys")
        ->capture_default_str();
    session->add_option("--max-count", session_args.max_count,
                        "Wrong attempts before lockout")
        ->capture_default_str();
    session->add_option("--lockout-ms", session_args.lockout_ms,
                        "Lockout duration")
        ->capture_default_str();
    session->add_option("--horizon-ms", session_args.horizon_ms,
                        "Simulation horizon (0 = last key + 2000)")
        ->capture_default_str();
    session->add_option("--conn-interval-ms", session_args.conn_interval,
                        "Retry spacing")
        ->capture_default_str();
    session->add_option("--airtime-ms", session_args.airtime,
                        "Per-frame airtime")
        ->capture_default_str();
    session->add_option("--retries", session_args.retries,
                        "Retries after the first attempt")
        ->capture_default_str();
    session->add_option("--sensitivity", session_args.sensitivity,
                        "Receiver sensitivity midpoint [dBm]")
        ->capture_default_str();
    session->add_option("--width", session_args.width,
                        "Delivery logistic width [dB]")
        ->capture_default_str();
    session->add_option("--telemetry-period-ms", session_args.telemetry_period,
                        "Telemetry cadence after authentication")
        ->capture_default_str();
    session->add_option("--temp-base", session_args.temp_base,
                        "Temperature baseline [C]")
        ->capture_default_str();
    session->add_option("--temp-amplitude", session_args.temp_amplitude,
                        "Temperature swing [C]")
        ->capture_default_str();
    session->add_option("--temp-period-ms", session_args.temp_period,
                        "Temperature cycle period")
        ->capture_default_str();
    session->add_option("--temp-noise", session_args.temp_noise,
                        "Temperature noise sd [C]")
        ->capture_default_str();
    session->add_option("--trace", session_args.trace_path,
                        "Write the attempt trace to this file");

    InteractiveArgs interactive_args;
    CLI::App* interactive = app.add_subcommand(
        "interactive", "Type at the virtual keypad in a live session");
    add_scenario_flags(interactive, interactive_args.scenario);
    interactive
        ->add_option("--distance", interactive_args.distance,
                     "Link distance [m]")
        ->capture_default_str();
    interactive->add_option("--seed", interactive_args.seed, "Root RNG seed")
        ->capture_default_str();
    interactive->add_option("--pin", interactive_args.pin, "Stored PIN")
        ->capture_default_str();
    interactive
        ->add_option("--max-count", interactive_args.max_count,
                     "Wrong attempts before lockout")
        ->capture_default_str();
    interactive
        ->add_option("--lockout-ms", interactive_args.lockout_ms,
                     "Lockout duration")
        ->capture_default_str();

    FiguresArgs figures_args;
    CLI::App* figures = app.add_subcommand(
        "reproduce-figures",
        "Write the four canonical sweep CSVs with analytical overlays");
    figures->add_option("--seed", figures_args.seed, "Root RNG seed")
        ->capture_default_str();
    figures->add_option("--trials", figures_args.trials, "Trials per distance")
        ->capture_default_str();
    figures->add_option("--out", figures_args.out, "Output directory")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep->parsed()) {
            return cmd_sweep(sweep_args);
        }
        if (fit->parsed()) {
            return cmd_fit(fit_args);
        }
        if (session->parsed()) {
            return cmd_session(session_args);
        }
        if (interactive->parsed()) {
            return cmd_interactive(interactive_args);
        }
        if (figures->parsed()) {
            return cmd_figures(figures_args);
        }
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
