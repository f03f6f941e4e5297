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
#include <initializer_list>
#include <numbers>
#include <string_view>

namespace blepin {

/// Finalizer of Sebastiano Vigna's splitmix64. Bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// FNV-1a over the bytes of a string, for folding labels into stream seeds.
inline constexpr std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Deterministic random stream used everywhere randomness is needed.
///
/// The generator is splitmix64 (seed + odd constant per step, then mix64).
/// Gaussian deviates use the Box-Muller transform, cosine branch only, so
/// every deviate consumes exactly two 64-bit draws. Both algorithms are
/// fixed by name so a recorded deviate stream can be replayed against any
/// other implementation of the same pair.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix64(state_);
    }

    /// Uniform double in [0, 1), 53 mantissa bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal deviate. Consumes two 64-bit draws.
    double next_gaussian() {
        const double u1 = 1.0 - next_unit(); // (0, 1], keeps the log finite
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

/// Folds (seed, parts...) into a substream seed. Order-sensitive, so
/// derive_stream(s, {a, b}) and derive_stream(s, {b, a}) are unrelated.
/// Independent substreams make trial results order- and thread-agnostic.
inline constexpr std::uint64_t derive_stream(std::uint64_t seed,
                                             std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = mix64(seed ^ 0xa0761d6478bd642full);
    for (std::uint64_t p : parts) {
        h = mix64(h ^ p);
    }
    return h;
}

} // namespace blepin
