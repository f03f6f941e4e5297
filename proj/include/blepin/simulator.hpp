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

#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "blepin/channel.hpp"
#include "blepin/errors.hpp"
#include "blepin/frame.hpp"
#include "blepin/nodes.hpp"
#include "blepin/random.hpp"

namespace blepin {

// Deterministic discrete-event engine. Events are ordered by (time,
// insertion sequence), every random draw comes from a stream derived from
// the configured seed, and node logic runs through the pure step
// functions, so identical configurations replay identical traces.

/// Radio link between the two nodes.
struct LinkConfig {
    double distance_m = 1.0;
    Scenario scenario = scenario_preset("indoor");
    std::uint64_t seed = 1;
    std::uint64_t conn_interval_ms = 30;   ///< retry spacing
    std::uint64_t per_frame_airtime_ms = 1;
    double sensitivity_dbm = -90.0;        ///< logistic midpoint
    double logistic_width_db = 2.0;
    std::uint32_t max_retries = 5;         ///< attempts after the first

    void validate() const {
        if (!(distance_m > 0.0)) {
            throw ValidationError("link distance_m must be > 0");
        }
        if (conn_interval_ms == 0) {
            throw ValidationError("conn_interval_ms must be > 0");
        }
        if (per_frame_airtime_ms > conn_interval_ms) {
            throw ValidationError("per_frame_airtime_ms must not exceed conn_interval_ms");
        }
        if (!(logistic_width_db > 0.0)) {
            throw ValidationError("logistic_width_db must be > 0");
        }
        blepin::validate(scenario);
    }
};

inline double delivery_probability(double rssi_dbm, const LinkConfig& link) {
    return delivery_probability(rssi_dbm, link.sensitivity_dbm,
                                link.logistic_width_db);
}

enum class Direction { PeripheralToCentral, CentralToPeripheral };

inline std::string_view to_string(Direction d) {
    return d == Direction::PeripheralToCentral ? "p2c" : "c2p";
}

enum class SessionOutcome { Authenticated, LockedOut, LinkLost, TimedOut };

inline std::string_view to_string(SessionOutcome o) {
    switch (o) {
    case SessionOutcome::Authenticated:
        return "Authenticated";
    case SessionOutcome::LockedOut:
        return "LockedOut";
    case SessionOutcome::LinkLost:
        return "LinkLost";
    default:
        return "TimedOut";
    }
}

/// One transmission attempt as seen on the air.
struct TraceEvent {
    std::uint64_t time_ms = 0;
    Direction dir = Direction::PeripheralToCentral;
    Frame frame;
    double rssi_dbm = 0.0;
    bool delivered = false;
    std::uint32_t attempt = 0;      ///< 0 = first try
    bool telemetry_clamped = false; ///< reading was clamped to the wire range

    bool operator==(const TraceEvent&) const = default;
};

/// Keypress-to-display timing of one delivered user action.
struct LatencyRecord {
    std::uint64_t key_time_ms = 0;
    std::uint64_t displayed_at_ms = 0;

    std::uint64_t latency_ms() const { return displayed_at_ms - key_time_ms; }

    bool operator==(const LatencyRecord&) const = default;
};

struct SessionTrace {
    std::vector<TraceEvent> events;
    SessionOutcome outcome = SessionOutcome::TimedOut;
    std::vector<LatencyRecord> latencies;
    PeripheralState peripheral; ///< terminal state at the horizon
    CentralState central;       ///< terminal state at the horizon

    std::vector<std::uint64_t> latencies_ms() const {
        std::vector<std::uint64_t> out;
        out.reserve(latencies.size());
        for (const auto& l : latencies) {
            out.push_back(l.latency_ms());
        }
        return out;
    }
};

/// One scripted user action at the peripheral's keypad.
struct ScriptKey {
    std::uint64_t time_ms = 0;
    char key = '\0';
};

using Script = std::vector<ScriptKey>;

namespace detail {

struct PendingTx {
    Frame frame;
    std::optional<std::uint64_t> origin_key_ms; ///< set for script-key frames
    bool clamped = false;
    std::uint32_t attempt = 0;
};

struct EvUserKey {
    char key;
};
struct EvAttempt {
    Direction dir;
};
struct EvArrival {
    Direction dir;
    Frame frame;
    std::optional<std::uint64_t> origin_key_ms;
};
struct EvTelemetryTimer {
    std::uint64_t scheduled_for;
};

struct EngineEvent {
    std::uint64_t time_ms;
    std::uint64_t seq;
    std::variant<EvUserKey, EvAttempt, EvArrival, EvTelemetryTimer> payload;
};

struct EventAfter {
    bool operator()(const EngineEvent& a, const EngineEvent& b) const {
        if (a.time_ms != b.time_ms) {
            return a.time_ms > b.time_ms;
        }
        return a.seq > b.seq;
    }
};

} // namespace detail

/// Runs one authentication session between a peripheral and a central over
/// the configured link, driving the peripheral with the scripted keys.
/// Every transmission attempt draws its own shadowed RSSI and a Bernoulli
/// delivery decision; undelivered frames retry at conn_interval_ms spacing
/// up to max_retries, then drop. Frames of one direction go out in FIFO
/// order, a pending frame blocking the ones queued behind it.
inline SessionTrace run_session(const LinkConfig& link, PeripheralState peripheral,
                                CentralState central, const Script& script,
                                std::uint64_t horizon_ms,
                                const TemperatureSource& temp_source = {}) {
    link.validate();
    peripheral.validate();
    central.validate();
    temp_source.validate();
    if (horizon_ms == 0) {
        throw ValidationError("horizon_ms must be > 0");
    }
    for (const auto& k : script) {
        if (k.time_ms > horizon_ms) {
            throw ValidationError("script key at " + std::to_string(k.time_ms) +
                                  " ms lies beyond the horizon " +
                                  std::to_string(horizon_ms) + " ms");
        }
        if (!is_pin_symbol(k.key) && k.key != '*' && k.key != '#') {
            throw ValidationError(std::string("script key '") + k.key +
                                  "' is not a keypad key");
        }
    }

    SplitMix64 chan_rng(derive_stream(link.seed, {hash_label("session.channel")}));
    SplitMix64 temp_rng(derive_stream(
        link.seed, {hash_label("session.temperature"), temp_source.seed}));

    std::priority_queue<detail::EngineEvent, std::vector<detail::EngineEvent>,
                        detail::EventAfter>
        queue;
    std::uint64_t seq = 0;
    auto schedule = [&](std::uint64_t at, auto payload) {
        queue.push({at, seq++, std::move(payload)});
    };

    std::deque<detail::PendingTx> tx[2]; // indexed by Direction
    std::uint64_t channel_free_at[2] = {0, 0};
    bool any_delivered = false;
    bool any_dropped = false;

    SessionTrace trace;
    trace.events.reserve(script.size() * 2 + 16);

    std::optional<std::uint64_t> scheduled_telemetry;
    auto sync_telemetry_timer = [&] {
        const auto& next = peripheral.next_telemetry_at_ms;
        if (next && scheduled_telemetry != next) {
            schedule(*next, detail::EvTelemetryTimer{*next});
            scheduled_telemetry = next;
        }
    };

    auto enqueue_frames = [&](Direction dir, std::vector<Frame> frames,
                              std::optional<std::uint64_t> origin, bool clamped,
                              std::uint64_t now) {
        auto& q = tx[static_cast<int>(dir)];
        const bool was_idle = q.empty();
        for (auto& f : frames) {
            q.push_back({std::move(f), origin, clamped, 0});
        }
        if (was_idle && !q.empty()) {
            schedule(std::max(now, channel_free_at[static_cast<int>(dir)]),
                     detail::EvAttempt{dir});
        }
    };

    auto step_peripheral = [&](const PeripheralEvent& ev, std::uint64_t now,
                               std::optional<std::uint64_t> origin) {
        PeripheralStep step =
            peripheral_step(std::move(peripheral), ev, now, temp_source, temp_rng);
        peripheral = std::move(step.state);
        enqueue_frames(Direction::PeripheralToCentral, std::move(step.out), origin,
                       step.telemetry_clamped, now);
        sync_telemetry_timer();
    };

    for (const auto& k : script) {
        schedule(k.time_ms, detail::EvUserKey{k.key});
    }

    while (!queue.empty() && queue.top().time_ms <= horizon_ms) {
        const detail::EngineEvent ev = queue.top();
        queue.pop();
        const std::uint64_t now = ev.time_ms;

        std::visit(
            [&](const auto& e) {
                using E = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<E, detail::EvUserKey>) {
                    step_peripheral(KeyPressed{e.key}, now, now);
                } else if constexpr (std::is_same_v<E, detail::EvAttempt>) {
                    auto& q = tx[static_cast<int>(e.dir)];
                    detail::PendingTx& head = q.front();
                    const double rssi =
                        sample_rssi(link.scenario, link.distance_m, chan_rng);
                    const double p = delivery_probability(rssi, link);
                    const bool delivered = chan_rng.next_unit() < p;
                    trace.events.push_back({now, e.dir, head.frame, rssi,
                                            delivered, head.attempt,
                                            head.clamped});
                    channel_free_at[static_cast<int>(e.dir)] =
                        now + link.per_frame_airtime_ms;
                    if (delivered) {
                        any_delivered = true;
                        schedule(now + link.per_frame_airtime_ms,
                                 detail::EvArrival{e.dir, head.frame,
                                                   head.origin_key_ms});
                        q.pop_front();
                        if (!q.empty()) {
                            schedule(now + link.per_frame_airtime_ms,
                                     detail::EvAttempt{e.dir});
                        }
                    } else if (head.attempt < link.max_retries) {
                        head.attempt += 1;
                        schedule(now + link.conn_interval_ms,
                                 detail::EvAttempt{e.dir});
                    } else {
                        any_dropped = true;
                        q.pop_front();
                        if (!q.empty()) {
                            schedule(now + link.conn_interval_ms,
                                     detail::EvAttempt{e.dir});
                        }
                    }
                } else if constexpr (std::is_same_v<E, detail::EvArrival>) {
                    if (e.dir == Direction::PeripheralToCentral) {
                        CentralStep step = central_step(std::move(central),
                                                        e.frame, now);
                        central = std::move(step.state);
                        enqueue_frames(Direction::CentralToPeripheral,
                                       std::move(step.out), std::nullopt, false,
                                       now);
                        if (e.origin_key_ms) {
                            trace.latencies.push_back({*e.origin_key_ms, now});
                        }
                    } else {
                        step_peripheral(FrameReceived{e.frame}, now,
                                        std::nullopt);
                    }
                } else {
                    if (peripheral.next_telemetry_at_ms == e.scheduled_for) {
                        scheduled_telemetry.reset();
                        step_peripheral(TimerFired{}, now, std::nullopt);
                    } else if (scheduled_telemetry == e.scheduled_for) {
                        scheduled_telemetry.reset(); // stale timer
                    }
                }
            },
            ev.payload);
    }

    if (central.session == Session::Authenticated) {
        trace.outcome = SessionOutcome::Authenticated;
    } else if (central.locked_until_ms && *central.locked_until_ms > horizon_ms) {
        trace.outcome = SessionOutcome::LockedOut;
    } else if (any_dropped && !any_delivered) {
        trace.outcome = SessionOutcome::LinkLost;
    } else {
        trace.outcome = SessionOutcome::TimedOut;
    }
    trace.peripheral = std::move(peripheral);
    trace.central = std::move(central);
    return trace;
}

// ---------------------------------------------------------------------------
// Distance sweeps

struct SweepRow {
    std::string scenario;
    double distance_m = 0.0;
    std::uint32_t trial = 0;
    double rssi_dbm = 0.0;
    bool delivered = false;
};

struct SweepSummary {
    double distance_m = 0.0;
    double mean_rssi_dbm = 0.0;
    double std_rssi_db = 0.0;
    double delivery_rate = 0.0;
    std::uint32_t trials = 0;
};

struct SweepReport {
    std::string scenario;
    std::vector<SweepRow> rows;      ///< |distances| x trials, trial-major within distance
    std::vector<SweepSummary> summary;
};

struct SweepOptions {
    double sensitivity_dbm = -90.0;
    double logistic_width_db = 2.0;
};

/// Log-spaced distance grid with exact endpoints.
inline std::vector<double> log_spaced_grid(double from, double to,
                                           std::size_t points) {
    if (!(from > 0.0) || !(to >= from)) {
        throw ValidationError("log grid needs 0 < from <= to");
    }
    if (points < 1 || (points == 1 && from != to)) {
        throw ValidationError("log grid needs points >= 2 when from < to");
    }
    std::vector<double> grid(points);
    grid.front() = from;
    for (std::size_t i = 1; i + 1 < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        grid[i] = from * std::pow(to / from, t);
    }
    grid.back() = to;
    return grid;
}

/// One beacon exchange per (distance, trial): a shadowed RSSI draw and a
/// Bernoulli delivery decision. Each trial owns a stream derived from
/// (seed, scenario, distance index, trial), so results do not depend on
/// iteration or thread order.
inline SweepReport sweep_distance(const Scenario& scenario,
                                  std::span<const double> distances,
                                  std::uint32_t trials, std::uint64_t seed,
                                  const SweepOptions& opts = {}) {
    blepin::validate(scenario);
    if (distances.empty()) {
        throw ValidationError("distance list must not be empty");
    }
    for (double d : distances) {
        if (!(d > 0.0)) {
            throw InvalidDistance("sweep distance must be > 0, got " +
                                  std::to_string(d));
        }
    }
    if (trials < 1) {
        throw ValidationError("trials must be >= 1");
    }
    if (!(opts.logistic_width_db > 0.0)) {
        throw ValidationError("logistic_width_db must be > 0");
    }

    SweepReport report;
    report.scenario = std::string(scenario_label(scenario));
    report.rows.reserve(distances.size() * trials);
    report.summary.reserve(distances.size());

    const std::uint64_t scenario_part = hash_label(report.scenario);
    for (std::size_t di = 0; di < distances.size(); ++di) {
        const double d = distances[di];
        double sum = 0.0;
        std::uint32_t delivered_count = 0;
        for (std::uint32_t trial = 0; trial < trials; ++trial) {
            SplitMix64 rng(derive_stream(
                seed, {hash_label("sweep"), scenario_part, di, trial}));
            const double rssi = sample_rssi(scenario, d, rng);
            const double p = delivery_probability(rssi, opts.sensitivity_dbm,
                                                  opts.logistic_width_db);
            const bool delivered = rng.next_unit() < p;
            report.rows.push_back({report.scenario, d, trial, rssi, delivered});
            sum += rssi;
            delivered_count += delivered ? 1 : 0;
        }
        const double mean = sum / trials;
        double sq = 0.0;
        for (std::uint32_t trial = 0; trial < trials; ++trial) {
            const double dev =
                report.rows[di * trials + trial].rssi_dbm - mean;
            sq += dev * dev;
        }
        const double stddev =
            trials > 1 ? std::sqrt(sq / (trials - 1)) : 0.0;
        report.summary.push_back({d, mean, stddev,
                                  static_cast<double>(delivered_count) / trials,
                                  trials});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Canonical figure sweeps

/// One canonical experiment: an environment and its measurement grid.
struct FigureSpec {
    Scenario scenario;
    std::vector<double> distances;
};

/// The four canonical sweeps. Grids are measurement-campaign style point
/// lists spanning each environment's tested range; the combined grid
/// includes points on both sides of the 16 m boundary.
inline std::vector<FigureSpec> canonical_figures() {
    std::vector<FigureSpec> specs;
    specs.push_back({scenario_preset("indoor"),
                     {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0, 1.5, 2.0, 2.5,
                      3.0, 4.0, 5.0, 6.0}});
    specs.push_back({scenario_preset("outdoor"),
                     {1.0, 2.0, 3.0, 4.0, 5.0, 7.0, 10.0, 15.0, 20.0, 25.0,
                      30.0, 40.0, 50.0}});
    specs.push_back({combined_composite(),
                     {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0, 14.0,
                      15.0, 15.5, 16.0, 16.5, 17.0, 18.0, 20.0, 22.0, 25.0,
                      30.0}});
    specs.push_back({scenario_preset("ground"),
                     {1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 15.0, 20.0, 25.0, 30.0}});
    return specs;
}

/// Runs the four canonical sweeps with per-scenario substreams of the
/// given seed. Reports come back in indoor, outdoor, combined, ground
/// order.
inline std::vector<SweepReport> run_canonical_sweeps(std::uint64_t seed,
                                                     std::uint32_t trials = 100) {
    std::vector<SweepReport> reports;
    for (const auto& spec : canonical_figures()) {
        reports.push_back(
            sweep_distance(spec.scenario, spec.distances, trials, seed));
    }
    return reports;
}

} // namespace blepin
