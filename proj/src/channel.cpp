// SPDX-License-Identifier: Apache-2.0
//
// tworay-qmkp: worst-case two-ray link budgets and frequency assignment
// Copyright (C) 2026 The tworay-qmkp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "tworay/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include <fmt/core.h>

namespace tworay {

namespace {

constexpr double kPi = std::numbers::pi;

void require_distance(double distance)
{
    if (!(distance >= 0.0) || !std::isfinite(distance))
        throw std::invalid_argument(fmt::format("distance must be finite and >= 0, got {}", distance));
}

double sin_half_squared(double x)
{
    const double s = std::sin(0.5 * x);
    return s * s;
}

// 1 / (l_los * l_ref) and (1/l_los - 1/l_ref)^2, the two geometric factors of
// the two-ray power expressions.
struct GeometricTerms
{
    double inverse_product;
    double direct_term;
    double path_difference;
};

GeometricTerms geometric_terms(const SceneGeometry& geom, double distance)
{
    require_distance(distance);
    const PathLengths lengths = path_lengths(geom, distance);
    if (lengths.line_of_sight <= 0.0)
        throw std::domain_error("line-of-sight path has zero length (equal heights at distance 0)");
    const double inv = 1.0 / (lengths.line_of_sight * lengths.reflected);
    const double diff = lengths.difference(geom);
    const double gap = diff * inv;
    return {inv, gap * gap, diff};
}

} // namespace

void PhysicalConstants::validate() const
{
    if (!(speed_of_light > 0.0) || !std::isfinite(speed_of_light))
        throw std::invalid_argument("speed of light must be positive");
}

void SceneGeometry::validate() const
{
    if (!(tx_height > 0.0) || !std::isfinite(tx_height))
        throw std::invalid_argument(fmt::format("transmitter height must be > 0, got {}", tx_height));
    if (!(rx_height > 0.0) || !std::isfinite(rx_height))
        throw std::invalid_argument(fmt::format("receiver height must be > 0, got {}", rx_height));
}

CarrierFrequency CarrierFrequency::from_hz(double hz)
{
    if (!(hz > 0.0) || !std::isfinite(hz))
        throw std::invalid_argument(fmt::format("frequency must be > 0 Hz, got {}", hz));
    return CarrierFrequency(hz);
}

CarrierFrequency CarrierFrequency::from_angular(double rad_per_s)
{
    return from_hz(rad_per_s / (2.0 * kPi));
}

FrequencyPair::FrequencyPair(CarrierFrequency a, CarrierFrequency b)
    : lower_(std::min(a, b)), upper_(std::max(a, b))
{
    if (a == b)
        throw std::invalid_argument(fmt::format("frequency pair needs two distinct carriers, got {} Hz twice", a.hz()));
}

CarrierFrequency FrequencyPair::spacing() const
{
    return CarrierFrequency::from_hz(upper_.hz() - lower_.hz());
}

TransmitPower::TransmitPower(double watts) : watts_(watts)
{
    if (!(watts > 0.0) || !std::isfinite(watts))
        throw std::invalid_argument(fmt::format("transmit power must be > 0 W, got {}", watts));
}

double PathLengths::difference(const SceneGeometry& geom) const
{
    // l_ref^2 - l_los^2 = 4 h_tx h_rx
    return 4.0 * geom.tx_height * geom.rx_height / (line_of_sight + reflected);
}

PathLengths path_lengths(const SceneGeometry& geom, double distance)
{
    geom.validate();
    require_distance(distance);
    return {std::hypot(geom.tx_height - geom.rx_height, distance),
            std::hypot(geom.tx_height + geom.rx_height, distance)};
}

double phase_shift(const SceneGeometry& geom, double distance, const CarrierFrequency& freq,
                   const PhysicalConstants& constants)
{
    constants.validate();
    const PathLengths lengths = path_lengths(geom, distance);
    return freq.angular() / constants.speed_of_light * lengths.difference(geom);
}

double max_phase_shift(const SceneGeometry& geom, const CarrierFrequency& freq,
                       const PhysicalConstants& constants)
{
    geom.validate();
    constants.validate();
    return 2.0 * freq.angular() * std::min(geom.tx_height, geom.rx_height) / constants.speed_of_light;
}

std::size_t k_max(const SceneGeometry& geom, const CarrierFrequency& freq,
                  const PhysicalConstants& constants)
{
    return static_cast<std::size_t>(std::floor(max_phase_shift(geom, freq, constants) / (2.0 * kPi)));
}

std::vector<double> null_distances(const SceneGeometry& geom, const CarrierFrequency& freq,
                                   const PhysicalConstants& constants)
{
    const std::size_t count = k_max(geom, freq, constants);
    const double omega = freq.angular();
    const double c = constants.speed_of_light;
    const double wr = omega * geom.rx_height;
    const double wt = omega * geom.tx_height;

    std::vector<double> out;
    out.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) {
        const double ck = c * kPi * static_cast<double>(k);
        // Both factors are <= 0 for k <= k_max; rounding can push the
        // k = k_max product marginally below zero.
        const double product = (ck - wr) * (ck + wr) * (ck - wt) * (ck + wt);
        out.push_back(std::sqrt(std::max(product, 0.0)) / (omega * ck));
    }
    return out;
}

double receive_power_single(const SceneGeometry& geom, double distance,
                            const CarrierFrequency& freq, const TransmitPower& power,
                            const PhysicalConstants& constants)
{
    constants.validate();
    const GeometricTerms g = geometric_terms(geom, distance);
    const double omega = freq.angular();
    const double c = constants.speed_of_light;
    const double dphi = omega / c * g.path_difference;
    const double scale = c / (2.0 * omega);
    // 1/l^2 + 1/lr^2 - 2 cos(dphi)/(l lr) regrouped to stay nonnegative.
    return power.watts() * scale * scale *
           (g.direct_term + 4.0 * g.inverse_product * sin_half_squared(dphi));
}

double sum_power_two(const SceneGeometry& geom, double distance, const FrequencyPair& pair,
                     const TransmitPower& power, const PhysicalConstants& constants)
{
    constants.validate();
    const GeometricTerms g = geometric_terms(geom, distance);
    const double c = constants.speed_of_light;
    const double w1 = pair.lower().angular();
    const double w2 = pair.upper().angular();
    const double a = 1.0 / (w1 * w1);
    const double b = 1.0 / (w2 * w2);
    const double t = g.path_difference / c;
    const double oscillating = a * 2.0 * sin_half_squared(w1 * t) + b * 2.0 * sin_half_squared(w2 * t);
    return 0.5 * power.watts() * (0.25 * c * c) *
           ((a + b) * g.direct_term + 2.0 * g.inverse_product * oscillating);
}

double sum_power_lower_bound(const SceneGeometry& geom, double distance,
                             const FrequencyPair& pair, const TransmitPower& power,
                             const PhysicalConstants& constants)
{
    constants.validate();
    const GeometricTerms g = geometric_terms(geom, distance);
    const double c = constants.speed_of_light;
    const double w1 = pair.lower().angular();
    const double w2 = pair.upper().angular();
    const double a = 1.0 / (w1 * w1);
    const double b = 1.0 / (w2 * w2);
    const double x = pair.spacing_angular() * g.path_difference / c;

    // envelope^2 = a^2 + b^2 + 2ab cos(x) = (a + b)^2 - 4ab sin^2(x/2)
    const double s2 = sin_half_squared(x);
    const double envelope = std::sqrt(std::max((a + b) * (a + b) - 4.0 * a * b * s2, 0.0));
    // (a + b) - envelope without cancellation
    const double deficit = 4.0 * a * b * s2 / (a + b + envelope);
    return 0.5 * power.watts() * (0.25 * c * c) *
           ((a + b) * g.direct_term + 2.0 * g.inverse_product * deficit);
}

double envelope_identity_residual(double omega1, double omega2, double t)
{
    if (!(omega1 > 0.0) || !(omega2 > 0.0))
        throw std::invalid_argument("angular frequencies must be positive");
    const double a = 1.0 / (omega1 * omega1);
    const double b = 1.0 / (omega2 * omega2);
    // Both sides use the same rounded phases; the identity holds for any phase pair.
    const double x1 = omega1 * t;
    const double x2 = omega2 * t;
    const double re = std::cos(x1) * a + std::cos(x2) * b;
    const double im = std::sin(x1) * a + std::sin(x2) * b;
    const double direct = re * re + im * im;
    const double closed = a * a + b * b + 2.0 * a * b * std::cos(x2 - x1);
    const double peak = (a + b) * (a + b);
    return std::abs(direct - closed) / peak;
}

double to_decibel(double power, double reference)
{
    if (!(reference > 0.0))
        throw std::invalid_argument(fmt::format("dB reference must be > 0, got {}", reference));
    if (power < 0.0 || std::isnan(power))
        throw std::invalid_argument(fmt::format("power must be >= 0, got {}", power));
    if (power == 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(power / reference);
}

double from_decibel(double db, double reference)
{
    return reference * std::pow(10.0, db / 10.0);
}

} // namespace tworay
