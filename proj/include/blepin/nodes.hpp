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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "blepin/display.hpp"
#include "blepin/errors.hpp"
#include "blepin/frame.hpp"
#include "blepin/random.hpp"

namespace blepin {

// Both nodes are pure step functions (state, event) -> (state, frames to
// send). The caller owns sequencing, time, and the random streams, so any
// number of node pairs can run in parallel.

// ---------------------------------------------------------------------------
// Temperature source

/// Synthetic ambient-temperature model: base + sinusoidal drift + gaussian
/// noise, reported in centi-degrees Celsius.
struct TemperatureSource {
    double base_c = 25.0;
    double amplitude_c = 0.0;
    std::uint64_t period_ms = 60000;
    double noise_sd_c = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(amplitude_c >= 0.0)) {
            throw ValidationError("temperature amplitude_c must be >= 0");
        }
        if (!(noise_sd_c >= 0.0)) {
            throw ValidationError("temperature noise_sd_c must be >= 0");
        }
        if (period_ms == 0) {
            throw ValidationError("temperature period_ms must be > 0");
        }
    }
};

struct TempSample {
    std::int16_t centi_c = 0;
    bool clamped = false; ///< reading fell outside the signed 16-bit range
};

/// Reads the source at a point in time. Always consumes one gaussian
/// deviate so the stream layout does not depend on noise_sd_c.
inline TempSample sample_temperature(const TemperatureSource& src,
                                     std::uint64_t now_ms, SplitMix64& rng) {
    const double phase = 2.0 * std::numbers::pi *
                         (static_cast<double>(now_ms) /
                          static_cast<double>(src.period_ms));
    const double noise = src.noise_sd_c * rng.next_gaussian();
    const double celsius = src.base_c + src.amplitude_c * std::sin(phase) + noise;
    const double centi = std::round(100.0 * celsius);

    TempSample out;
    if (centi > 32767.0) {
        out.centi_c = 32767;
        out.clamped = true;
    } else if (centi < -32768.0) {
        out.centi_c = -32768;
        out.clamped = true;
    } else {
        out.centi_c = static_cast<std::int16_t>(centi);
    }
    return out;
}

/// "T=25.34C" style rendering for the display's second row.
inline std::string format_temperature(std::int16_t centi_c) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "T=%.2fC",
                  static_cast<double>(centi_c) / 100.0);
    return buf;
}

// ---------------------------------------------------------------------------
// PIN verification

/// True iff the entered sequence is a complete, symbol-for-symbol match of
/// the stored PIN. Every position is folded into the comparison whatever
/// the first mismatch, so the decision path length does not leak where the
/// entry went wrong.
inline bool verify_pin(std::string_view entered, const Pin& stored) {
    unsigned diff = entered.size() == kPinLength ? 0u : 1u;
    for (std::size_t i = 0; i < kPinLength; ++i) {
        const char e = i < entered.size() ? entered[i] : '\0';
        diff |= static_cast<unsigned>(static_cast<unsigned char>(e) ^
                                      static_cast<unsigned char>(stored.symbols()[i]));
    }
    return diff == 0;
}

// ---------------------------------------------------------------------------
// Peripheral (keypad side)

enum class PeripheralPhase { Entering, AwaitingVerdict, Authenticated, LockedOut };

inline std::string_view to_string(PeripheralPhase p) {
    switch (p) {
    case PeripheralPhase::Entering:
        return "Entering";
    case PeripheralPhase::AwaitingVerdict:
        return "AwaitingVerdict";
    case PeripheralPhase::Authenticated:
        return "Authenticated";
    default:
        return "LockedOut";
    }
}

struct PeripheralState {
    std::string pin_buffer;    ///< at most kPinLength symbols
    PeripheralPhase phase = PeripheralPhase::Entering;
    std::uint64_t locked_until_ms = 0; ///< meaningful while LockedOut
    std::uint64_t telemetry_period_ms = 1000;
    std::optional<std::uint64_t> next_telemetry_at_ms; ///< set while Authenticated

    void validate() const {
        if (telemetry_period_ms == 0) {
            throw ValidationError("telemetry_period_ms must be > 0");
        }
        if (pin_buffer.size() > kPinLength) {
            throw ValidationError("pin_buffer holds more than 4 symbols");
        }
    }
};

struct KeyPressed {
    char key = '\0'; ///< '0'-'9', 'A'-'F', '*' reset, '#' submit
};

struct FrameReceived {
    Frame frame;
};

struct TimerFired {};

using PeripheralEvent = std::variant<KeyPressed, FrameReceived, TimerFired>;

struct PeripheralStep {
    PeripheralState state;
    std::vector<Frame> out;
    bool telemetry_clamped = false; ///< set when out contains a clamped reading
};

/// Advances the peripheral by one event. Keys are ignored while a verdict
/// is pending or the node is locked out; a lockout expires lazily the
/// first time an event arrives at or after its deadline.
inline PeripheralStep peripheral_step(PeripheralState state,
                                      const PeripheralEvent& event,
                                      std::uint64_t now_ms,
                                      const TemperatureSource& temp_source,
                                      SplitMix64& rng) {
    PeripheralStep step;

    if (state.phase == PeripheralPhase::LockedOut &&
        now_ms >= state.locked_until_ms) {
        state.phase = PeripheralPhase::Entering;
        state.pin_buffer.clear();
        state.locked_until_ms = 0;
    }

    std::visit(
        [&](const auto& ev) {
            using E = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<E, KeyPressed>) {
                if (state.phase == PeripheralPhase::AwaitingVerdict ||
                    state.phase == PeripheralPhase::LockedOut) {
                    return;
                }
                if (ev.key == '*') {
                    state.pin_buffer.clear();
                    step.out.push_back(PinReset{});
                } else if (ev.key == '#') {
                    state.phase = PeripheralPhase::AwaitingVerdict;
                    state.next_telemetry_at_ms.reset();
                    step.out.push_back(PinSubmit{});
                } else if (is_pin_symbol(ev.key)) {
                    if (state.pin_buffer.size() < kPinLength) {
                        state.pin_buffer.push_back(ev.key);
                        step.out.push_back(KeyPress{ev.key});
                    }
                }
                // anything else is not a keypad key
            } else if constexpr (std::is_same_v<E, FrameReceived>) {
                if (std::holds_alternative<AuthOk>(ev.frame)) {
                    state.phase = PeripheralPhase::Authenticated;
                    state.pin_buffer.clear();
                    state.next_telemetry_at_ms = now_ms + state.telemetry_period_ms;
                } else if (std::holds_alternative<AuthFail>(ev.frame)) {
                    state.phase = PeripheralPhase::Entering;
                    state.pin_buffer.clear();
                    state.next_telemetry_at_ms.reset();
                } else if (const auto* locked = std::get_if<Locked>(&ev.frame)) {
                    state.phase = PeripheralPhase::LockedOut;
                    state.locked_until_ms = now_ms + locked->remaining_ms;
                    state.pin_buffer.clear();
                    state.next_telemetry_at_ms.reset();
                }
                // Ack and peripheral-bound noise carry no state change
            } else {
                if (state.phase == PeripheralPhase::Authenticated &&
                    state.next_telemetry_at_ms &&
                    now_ms >= *state.next_telemetry_at_ms) {
                    const TempSample sample =
                        sample_temperature(temp_source, now_ms, rng);
                    step.out.push_back(Telemetry{sample.centi_c});
                    step.telemetry_clamped = sample.clamped;
                    state.next_telemetry_at_ms = now_ms + state.telemetry_period_ms;
                }
                // stale timers for a phase we already left are dropped
            }
        },
        event);

    step.state = std::move(state);
    return step;
}

// ---------------------------------------------------------------------------
// Central (verifier side)

enum class Session { Unauthenticated, Authenticated };

struct CentralState {
    Pin stored_pin;
    std::uint32_t wrong_counter = 0;
    std::uint32_t max_count = 3;
    std::uint32_t lockout_duration_ms = 30000;
    std::optional<std::uint64_t> locked_until_ms;
    std::string rx_buffer; ///< at most kPinLength symbols
    Session session = Session::Unauthenticated;
    Display display;

    void validate() const {
        if (max_count < 1 || max_count > 255) {
            throw ValidationError("max_count must be in 1..255 (wire field is one byte)");
        }
        if (rx_buffer.size() > kPinLength) {
            throw ValidationError("rx_buffer holds more than 4 symbols");
        }
        if (!locked_until_ms && wrong_counter >= max_count) {
            throw ValidationError("wrong_counter must stay below max_count while unlocked");
        }
    }
};

struct CentralStep {
    CentralState state;
    std::vector<Frame> out;
};

namespace detail {

inline void show_masked_entry(CentralState& s) {
    s.display.set_row(0, std::string(s.rx_buffer.size(), '*'));
    s.display.clear_row(1);
}

} // namespace detail

/// Advances the central by one received frame.
///
/// Keypresses echo as '*' marks; a submit verifies the collected entry and
/// answers AuthOk or AuthFail with the attempts left. max_count
/// consecutive misses start a lockout, during which every submit is
/// answered with Locked and nothing else changes, keys included. Telemetry
/// is only accepted (displayed and acked) from an authenticated session.
inline CentralStep central_step(CentralState state, const Frame& frame,
                                std::uint64_t now_ms) {
    CentralStep step;

    const bool locked =
        state.locked_until_ms && now_ms < *state.locked_until_ms;
    if (state.locked_until_ms && !locked) {
        state.locked_until_ms.reset(); // lockout expired
    }

    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, KeyPress>) {
                if (locked) {
                    return;
                }
                if (state.rx_buffer.size() < kPinLength) {
                    state.rx_buffer.push_back(f.symbol);
                }
                detail::show_masked_entry(state);
            } else if constexpr (std::is_same_v<F, PinReset>) {
                if (locked) {
                    return;
                }
                state.rx_buffer.clear();
                detail::show_masked_entry(state);
            } else if constexpr (std::is_same_v<F, PinSubmit>) {
                if (locked) {
                    step.out.push_back(Locked{static_cast<std::uint32_t>(
                        *state.locked_until_ms - now_ms)});
                    return;
                }
                const bool ok = verify_pin(state.rx_buffer, state.stored_pin);
                state.rx_buffer.clear();
                if (ok) {
                    state.session = Session::Authenticated;
                    state.wrong_counter = 0;
                    state.display.set_row(0, "HELLO");
                    state.display.clear_row(1);
                    step.out.push_back(AuthOk{});
                } else {
                    state.session = Session::Unauthenticated;
                    state.wrong_counter += 1;
                    state.display.set_row(0, "Wrong PIN,");
                    state.display.set_row(1, "enter again");
                    step.out.push_back(AuthFail{static_cast<std::uint8_t>(
                        state.max_count - state.wrong_counter)});
                    if (state.wrong_counter >= state.max_count) {
                        state.locked_until_ms =
                            now_ms + state.lockout_duration_ms;
                        state.wrong_counter = 0;
                        step.out.push_back(Locked{state.lockout_duration_ms});
                    }
                }
            } else if constexpr (std::is_same_v<F, Telemetry>) {
                if (state.session == Session::Authenticated) {
                    state.display.set_row(1, format_temperature(f.temp_centi_c));
                    step.out.push_back(Ack{kTagTelemetry});
                }
                // unauthenticated telemetry is dropped silently
            }
            // AuthOk/AuthFail/Locked/Ack are central-to-peripheral frames;
            // receiving one here is noise and is ignored
        },
        frame);

    step.state = std::move(state);
    return step;
}

} // namespace blepin
