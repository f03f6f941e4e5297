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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "blepin/errors.hpp"

namespace blepin {

// Wire format, one frame per packet, tag byte first:
//
//   tag  frame      payload
//   0x01 KeyPress   1 byte, ASCII symbol ('0'-'9', 'A'-'F')
//   0x02 PinReset   none
//   0x03 PinSubmit  none
//   0x04 AuthOk     none
//   0x05 AuthFail   1 byte, remaining attempts
//   0x06 Locked     4 bytes, big-endian unsigned milliseconds
//   0x07 Telemetry  2 bytes, big-endian signed centi-degrees C
//   0x08 Ack        1 byte, tag of the acknowledged frame
//
// Symbols travel as their ASCII codes so hex dumps stay readable.

inline constexpr std::size_t kPinLength = 4;

/// The 16-symbol PIN alphabet: digits and uppercase A-F.
inline constexpr bool is_pin_symbol(char c) {
    return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'F');
}

struct KeyPress {
    char symbol = '0';
    bool operator==(const KeyPress&) const = default;
};

struct PinReset {
    bool operator==(const PinReset&) const = default;
};

struct PinSubmit {
    bool operator==(const PinSubmit&) const = default;
};

struct AuthOk {
    bool operator==(const AuthOk&) const = default;
};

struct AuthFail {
    std::uint8_t remaining_attempts = 0;
    bool operator==(const AuthFail&) const = default;
};

struct Locked {
    std::uint32_t remaining_ms = 0;
    bool operator==(const Locked&) const = default;
};

struct Telemetry {
    std::int16_t temp_centi_c = 0;
    bool operator==(const Telemetry&) const = default;
};

struct Ack {
    std::uint8_t of_tag = 0;
    bool operator==(const Ack&) const = default;
};

using Frame = std::variant<KeyPress, PinReset, PinSubmit, AuthOk, AuthFail,
                           Locked, Telemetry, Ack>;

inline constexpr std::uint8_t kTagKeyPress = 0x01;
inline constexpr std::uint8_t kTagPinReset = 0x02;
inline constexpr std::uint8_t kTagPinSubmit = 0x03;
inline constexpr std::uint8_t kTagAuthOk = 0x04;
inline constexpr std::uint8_t kTagAuthFail = 0x05;
inline constexpr std::uint8_t kTagLocked = 0x06;
inline constexpr std::uint8_t kTagTelemetry = 0x07;
inline constexpr std::uint8_t kTagAck = 0x08;
inline constexpr std::uint8_t kTagMax = kTagAck;

/// Tag byte of a frame. Variant order mirrors the tag table.
inline std::uint8_t frame_tag(const Frame& f) {
    return static_cast<std::uint8_t>(f.index() + 1);
}

/// Serializes a frame. The input must satisfy the frame invariants; the
/// output is at most 5 bytes and self-delimiting via the tag byte.
inline std::vector<std::uint8_t> encode_frame(const Frame& f) {
    std::vector<std::uint8_t> out;
    out.push_back(frame_tag(f));
    std::visit(
        [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, KeyPress>) {
                out.push_back(static_cast<std::uint8_t>(v.symbol));
            } else if constexpr (std::is_same_v<T, AuthFail>) {
                out.push_back(v.remaining_attempts);
            } else if constexpr (std::is_same_v<T, Locked>) {
                out.push_back(static_cast<std::uint8_t>(v.remaining_ms >> 24));
                out.push_back(static_cast<std::uint8_t>(v.remaining_ms >> 16));
                out.push_back(static_cast<std::uint8_t>(v.remaining_ms >> 8));
                out.push_back(static_cast<std::uint8_t>(v.remaining_ms));
            } else if constexpr (std::is_same_v<T, Telemetry>) {
                const auto u = static_cast<std::uint16_t>(v.temp_centi_c);
                out.push_back(static_cast<std::uint8_t>(u >> 8));
                out.push_back(static_cast<std::uint8_t>(u));
            } else if constexpr (std::is_same_v<T, Ack>) {
                out.push_back(v.of_tag);
            }
        },
        f);
    return out;
}

namespace detail {

inline std::size_t payload_length(std::uint8_t tag) {
    switch (tag) {
    case kTagKeyPress:
    case kTagAuthFail:
    case kTagAck:
        return 1;
    case kTagPinReset:
    case kTagPinSubmit:
    case kTagAuthOk:
        return 0;
    case kTagLocked:
        return 4;
    case kTagTelemetry:
        return 2;
    default:
        return 0; // unreachable, tags are checked before this is called
    }
}

} // namespace detail

/// Parses one frame from the whole byte sequence; exact inverse of
/// encode_frame on its image. Trailing or missing bytes are a
/// TruncatedFrame, an unassigned tag byte an UnknownTag, and a KeyPress
/// payload outside the alphabet an InvalidSymbol. A decoded frame always
/// satisfies the frame invariants.
inline Frame decode_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) {
        throw TruncatedFrame("empty input, expected at least a tag byte");
    }
    const std::uint8_t tag = bytes[0];
    if (tag < kTagKeyPress || tag > kTagMax) {
        throw UnknownTag("unassigned frame tag " + std::to_string(tag));
    }
    const std::size_t want = detail::payload_length(tag);
    if (bytes.size() != 1 + want) {
        throw TruncatedFrame("tag " + std::to_string(tag) + " takes " +
                             std::to_string(want) + " payload byte(s), got " +
                             std::to_string(bytes.size() - 1));
    }
    const std::span<const std::uint8_t> p = bytes.subspan(1);
    switch (tag) {
    case kTagKeyPress: {
        const char sym = static_cast<char>(p[0]);
        if (!is_pin_symbol(sym)) {
            throw InvalidSymbol("KeyPress payload byte " + std::to_string(p[0]) +
                                " is not in the 16-symbol alphabet");
        }
        return KeyPress{sym};
    }
    case kTagPinReset:
        return PinReset{};
    case kTagPinSubmit:
        return PinSubmit{};
    case kTagAuthOk:
        return AuthOk{};
    case kTagAuthFail:
        return AuthFail{p[0]};
    case kTagLocked: {
        const std::uint32_t ms = (static_cast<std::uint32_t>(p[0]) << 24) |
                                 (static_cast<std::uint32_t>(p[1]) << 16) |
                                 (static_cast<std::uint32_t>(p[2]) << 8) |
                                 static_cast<std::uint32_t>(p[3]);
        return Locked{ms};
    }
    case kTagTelemetry: {
        const auto u = static_cast<std::uint16_t>(
            (static_cast<std::uint16_t>(p[0]) << 8) | p[1]);
        return Telemetry{static_cast<std::int16_t>(u)};
    }
    default: { // kTagAck
        if (p[0] < kTagKeyPress || p[0] > kTagMax) {
            throw UnknownTag("Ack references unassigned tag " +
                             std::to_string(p[0]));
        }
        return Ack{p[0]};
    }
    }
}

/// Hex rendering of the encoded frame, lowercase, no separators.
inline std::string frame_hex(const Frame& f) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (std::uint8_t b : encode_frame(f)) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

/// Human-readable rendering for logs and the CLI.
inline std::string frame_name(const Frame& f) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, KeyPress>) {
                return std::string("KeyPress('") + v.symbol + "')";
            } else if constexpr (std::is_same_v<T, PinReset>) {
                return "PinReset";
            } else if constexpr (std::is_same_v<T, PinSubmit>) {
                return "PinSubmit";
            } else if constexpr (std::is_same_v<T, AuthOk>) {
                return "AuthOk";
            } else if constexpr (std::is_same_v<T, AuthFail>) {
                return "AuthFail(" + std::to_string(v.remaining_attempts) + ")";
            } else if constexpr (std::is_same_v<T, Locked>) {
                return "Locked(" + std::to_string(v.remaining_ms) + "ms)";
            } else if constexpr (std::is_same_v<T, Telemetry>) {
                return "Telemetry(" + std::to_string(v.temp_centi_c) + ")";
            } else {
                return "Ack(tag " + std::to_string(v.of_tag) + ")";
            }
        },
        f);
}

/// A complete stored PIN: exactly four symbols from the alphabet.
class Pin {
public:
    Pin() : symbols_{'0', '0', '0', '0'} {}

    /// Accepts lowercase a-f and normalizes to the uppercase alphabet.
    static Pin from_string(std::string_view s) {
        if (s.size() != kPinLength) {
            throw ValidationError("PIN must have exactly 4 symbols, got " +
                                  std::to_string(s.size()));
        }
        Pin pin;
        for (std::size_t i = 0; i < kPinLength; ++i) {
            char c = s[i];
            if (c >= 'a' && c <= 'f') {
                c = static_cast<char>(c - 'a' + 'A');
            }
            if (!is_pin_symbol(c)) {
                throw ValidationError(std::string("PIN symbol '") + s[i] +
                                      "' is outside 0-9 A-F");
            }
            pin.symbols_[i] = c;
        }
        return pin;
    }

    const std::array<char, kPinLength>& symbols() const { return symbols_; }

    std::string str() const { return {symbols_.begin(), symbols_.end()}; }

    bool operator==(const Pin&) const = default;

private:
    std::array<char, kPinLength> symbols_;
};

} // namespace blepin
