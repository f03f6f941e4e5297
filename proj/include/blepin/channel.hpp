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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "blepin/errors.hpp"
#include "blepin/random.hpp"

namespace blepin {

// Log-distance channel model with log-normal shadowing:
//
//   rssi(d) = rssi(d0) - 10 * alpha * log10(d / d0) + X_sigma,
//   X_sigma ~ N(0, sigma_db^2)
//
// alpha is the path-loss exponent, d0 the reference distance, and
// rssi(d0) the mean received power at d0.

/// Parameters of the model for one environment.
struct ScenarioParams {
    std::string name;
    double alpha = 2.0;       ///< path-loss exponent
    double rssi_at_d0 = -45.0; ///< dBm at the reference distance
    double d0 = 1.0;          ///< reference distance, meters
    double sigma_db = 0.0;    ///< shadowing standard deviation, dB

    void validate() const {
        if (!(alpha > 0.0)) {
            throw ValidationError("scenario '" + name + "': alpha must be > 0");
        }
        if (!(d0 > 0.0)) {
            throw ValidationError("scenario '" + name + "': d0 must be > 0");
        }
        if (!(sigma_db >= 0.0)) {
            throw ValidationError("scenario '" + name + "': sigma_db must be >= 0");
        }
    }

    bool operator==(const ScenarioParams&) const = default;
};

inline constexpr std::array<std::string_view, 4> kScenarioNames = {
    "indoor", "outdoor", "combined", "ground"};

/// Preset exponents for the four measured environments. The reference
/// level -45 dBm at 1 m is a conventional BLE figure for 0 dBm transmit
/// power; the sigmas rank the environments by observed noisiness. Both
/// are calibration knobs, not measurements.
inline ScenarioParams scenario_preset(std::string_view name) {
    if (name == "indoor") {
        return {"indoor", 3.1, -45.0, 1.0, 2.5};
    }
    if (name == "outdoor") {
        return {"outdoor", 2.55, -45.0, 1.0, 1.5};
    }
    if (name == "combined") {
        return {"combined", 2.85, -45.0, 1.0, 2.0};
    }
    if (name == "ground") {
        return {"ground", 2.75, -45.0, 1.0, 2.0};
    }
    throw UnknownScenario("unknown scenario '" + std::string(name) +
                          "' (expected one of: indoor, outdoor, combined, ground)");
}

/// Mean RSSI at distance d (the model with the shadowing term zeroed).
inline double expected_rssi(const ScenarioParams& params, double distance_m) {
    if (!(distance_m > 0.0)) {
        throw InvalidDistance("distance must be > 0, got " +
                              std::to_string(distance_m));
    }
    return params.rssi_at_d0 - 10.0 * params.alpha * std::log10(distance_m / params.d0);
}

/// Piecewise environment: distance ranges with their own parameters and a
/// level offset. Models a propagation boundary such as a wall between an
/// indoor and an outdoor region.
struct CompositeScenario {
    struct Segment {
        double start_m = 0.0; ///< inclusive lower edge of the segment
        ScenarioParams params;
        double offset_db = 0.0;

        bool operator==(const Segment&) const = default;
    };

    std::string name;
    std::vector<Segment> segments;

    void validate() const {
        if (segments.empty()) {
            throw ValidationError("composite '" + name + "': needs at least one segment");
        }
        if (segments.front().start_m != 0.0) {
            throw ValidationError("composite '" + name + "': first segment must start at 0");
        }
        for (std::size_t i = 0; i < segments.size(); ++i) {
            segments[i].params.validate();
            if (i > 0 && !(segments[i].start_m > segments[i - 1].start_m)) {
                throw ValidationError("composite '" + name +
                                      "': segment starts must be strictly increasing");
            }
        }
    }

    /// The unique segment whose range contains distance_m.
    const Segment& segment_at(double distance_m) const {
        if (!(distance_m > 0.0)) {
            throw InvalidDistance("distance must be > 0, got " +
                                  std::to_string(distance_m));
        }
        std::size_t idx = 0;
        while (idx + 1 < segments.size() && distance_m >= segments[idx + 1].start_m) {
            ++idx;
        }
        return segments[idx];
    }

    bool operator==(const CompositeScenario&) const = default;
};

/// The default two-segment split of the combined environment: past the
/// boundary the link is plain outdoor, stepped up by the wall attenuation
/// that is no longer in the path.
inline CompositeScenario combined_composite(double boundary_m = 16.0,
                                            double step_db = 6.0) {
    CompositeScenario cs;
    cs.name = "combined";
    cs.segments = {{0.0, scenario_preset("combined"), 0.0},
                   {boundary_m, scenario_preset("outdoor"), step_db}};
    return cs;
}

inline double expected_rssi(const CompositeScenario& cs, double distance_m) {
    const auto& seg = cs.segment_at(distance_m);
    return expected_rssi(seg.params, distance_m) + seg.offset_db;
}

/// Either a single environment or a piecewise one.
using Scenario = std::variant<ScenarioParams, CompositeScenario>;

inline double expected_rssi(const Scenario& scenario, double distance_m) {
    return std::visit([&](const auto& s) { return expected_rssi(s, distance_m); },
                      scenario);
}

inline std::string_view scenario_label(const Scenario& scenario) {
    return std::visit([](const auto& s) -> std::string_view { return s.name; },
                      scenario);
}

inline void validate(const Scenario& scenario) {
    std::visit([](const auto& s) { s.validate(); }, scenario);
}

/// One shadowed draw of the model at distance d. Always consumes one
/// gaussian deviate (two 64-bit draws) so the stream layout does not
/// depend on sigma.
inline double sample_rssi(const ScenarioParams& params, double distance_m,
                          SplitMix64& rng) {
    const double mean = expected_rssi(params, distance_m);
    return mean + params.sigma_db * rng.next_gaussian();
}

inline double sample_rssi(const CompositeScenario& cs, double distance_m,
                          SplitMix64& rng) {
    const auto& seg = cs.segment_at(distance_m);
    const double mean = expected_rssi(seg.params, distance_m) + seg.offset_db;
    return mean + seg.params.sigma_db * rng.next_gaussian();
}

inline double sample_rssi(const Scenario& scenario, double distance_m,
                          SplitMix64& rng) {
    return std::visit(
        [&](const auto& s) { return sample_rssi(s, distance_m, rng); }, scenario);
}

/// Algebraic inverse of the noise-free model: the distance at which the
/// mean RSSI equals the given value.
inline double estimate_distance(const ScenarioParams& params, double rssi_dbm) {
    return params.d0 *
           std::pow(10.0, (params.rssi_at_d0 - rssi_dbm) / (10.0 * params.alpha));
}

/// One received-power measurement.
struct RssiSample {
    double distance_m = 0.0;
    double rssi_dbm = 0.0;
    std::string scenario;
    std::uint32_t trial = 0;
};

/// Result of fitting the model to measurements.
struct PathLossFit {
    double alpha_hat = 0.0;
    double rssi0_hat = 0.0;
    double rmse_db = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares of rssi on -10*log10(d/d0): slope gives the
/// path-loss exponent, intercept the reference RSSI. Both parameters are
/// estimated jointly since neither is known a priori for a measured file.
inline PathLossFit fit_path_loss(std::span<const RssiSample> samples,
                                 double d0 = 1.0) {
    if (!(d0 > 0.0)) {
        throw InvalidDistance("d0 must be > 0, got " + std::to_string(d0));
    }
    if (samples.size() < 2) {
        throw DegenerateInput("need at least 2 samples, got " +
                              std::to_string(samples.size()));
    }

    const std::size_t n = samples.size();
    double x_mean = 0.0;
    double y_mean = 0.0;
    for (const auto& s : samples) {
        if (!(s.distance_m > 0.0)) {
            throw InvalidDistance("sample distance must be > 0, got " +
                                  std::to_string(s.distance_m));
        }
        x_mean += -10.0 * std::log10(s.distance_m / d0);
        y_mean += s.rssi_dbm;
    }
    x_mean /= static_cast<double>(n);
    y_mean /= static_cast<double>(n);

    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& s : samples) {
        const double dx = -10.0 * std::log10(s.distance_m / d0) - x_mean;
        sxx += dx * dx;
        sxy += dx * (s.rssi_dbm - y_mean);
    }
    if (sxx == 0.0) {
        throw DegenerateInput("all samples share one distance; the exponent is unidentifiable");
    }

    PathLossFit fit;
    fit.alpha_hat = sxy / sxx;
    fit.rssi0_hat = y_mean - fit.alpha_hat * x_mean;
    fit.n = n;

    double sq = 0.0;
    for (const auto& s : samples) {
        const double x = -10.0 * std::log10(s.distance_m / d0);
        const double r = s.rssi_dbm - (fit.rssi0_hat + fit.alpha_hat * x);
        sq += r * r;
    }
    fit.rmse_db = std::sqrt(sq / static_cast<double>(n));
    return fit;
}

/// Packet-success probability as a logistic in RSSI: 0.5 at the receiver
/// sensitivity, approaching 1 above it and 0 below, with the transition
/// width set by width_db.
inline double delivery_probability(double rssi_dbm, double sensitivity_dbm,
                                   double width_db) {
    return 1.0 / (1.0 + std::exp((sensitivity_dbm - rssi_dbm) / width_db));
}

} // namespace blepin
