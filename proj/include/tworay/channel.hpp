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

// Closed-form two-ray ground reflection propagation over a perfectly
// reflecting flat ground. All internal math uses angular frequency; the
// public constructors accept hertz.

#ifndef TWORAY_CHANNEL_HPP
#define TWORAY_CHANNEL_HPP

#include <cstddef>
#include <numbers>
#include <vector>

namespace tworay {

struct PhysicalConstants
{
    double speed_of_light = 299792458.0; // m/s

    void validate() const;
};

/// Transmitter and receiver antenna heights above the ground plane, meters.
struct SceneGeometry
{
    double tx_height = 0.0;
    double rx_height = 0.0;

    void validate() const;
    SceneGeometry swapped() const { return {rx_height, tx_height}; }
};

/// A strictly positive carrier. Constructed from hertz or from rad/s.
class CarrierFrequency
{
  public:
    static CarrierFrequency from_hz(double hz);
    static CarrierFrequency from_angular(double rad_per_s);

    double hz() const { return hz_; }
    double angular() const { return 2.0 * std::numbers::pi * hz_; }

    friend bool operator==(const CarrierFrequency&, const CarrierFrequency&) = default;
    friend auto operator<=>(const CarrierFrequency&, const CarrierFrequency&) = default;

  private:
    explicit CarrierFrequency(double hz) : hz_(hz) {}
    double hz_;
};

/// Two distinct carriers, stored in ascending order so the spacing is positive.
class FrequencyPair
{
  public:
    FrequencyPair(CarrierFrequency a, CarrierFrequency b);

    const CarrierFrequency& lower() const { return lower_; }
    const CarrierFrequency& upper() const { return upper_; }
    double spacing_angular() const { return upper_.angular() - lower_.angular(); }

    /// The spacing as a carrier of its own; its nulls drive the envelope minima.
    CarrierFrequency spacing() const;

  private:
    CarrierFrequency lower_;
    CarrierFrequency upper_;
};

class TransmitPower
{
  public:
    explicit TransmitPower(double watts);
    double watts() const { return watts_; }
    TransmitPower scaled(double factor) const { return TransmitPower(watts_ * factor); }

  private:
    double watts_;
};

struct PathLengths
{
    double line_of_sight = 0.0;
    double reflected = 0.0;

    /// reflected - line_of_sight, evaluated without cancellation.
    double difference(const SceneGeometry& geom) const;
};

PathLengths path_lengths(const SceneGeometry& geom, double distance);

/// (omega / c) * (l_ref - l_los); strictly decreasing in distance.
double phase_shift(const SceneGeometry& geom, double distance, const CarrierFrequency& freq,
                   const PhysicalConstants& constants = {});

/// Limit of the phase shift as the distance goes to zero.
double max_phase_shift(const SceneGeometry& geom, const CarrierFrequency& freq,
                       const PhysicalConstants& constants = {});

/// Number of destructive-interference minima along the ground distance.
std::size_t k_max(const SceneGeometry& geom, const CarrierFrequency& freq,
                  const PhysicalConstants& constants = {});

/// Distances of the receive power minima, index 0 holding k = 1 (the farthest).
std::vector<double> null_distances(const SceneGeometry& geom, const CarrierFrequency& freq,
                                   const PhysicalConstants& constants = {});

double receive_power_single(const SceneGeometry& geom, double distance,
                            const CarrierFrequency& freq, const TransmitPower& power,
                            const PhysicalConstants& constants = {});

/// Received sum power with the transmit power split evenly over both carriers.
double sum_power_two(const SceneGeometry& geom, double distance, const FrequencyPair& pair,
                     const TransmitPower& power, const PhysicalConstants& constants = {});

/// Lower envelope of sum_power_two; oscillates with the carrier spacing only.
double sum_power_lower_bound(const SceneGeometry& geom, double distance,
                             const FrequencyPair& pair, const TransmitPower& power,
                             const PhysicalConstants& constants = {});

/// Relative difference between the squared magnitude of the analytic signal
/// cos(w1 t)/w1^2 + cos(w2 t)/w2^2 evaluated directly and via its closed
/// form 1/w1^4 + 1/w2^4 + 2 cos((w2 - w1) t)/(w1^2 w2^2). Normalized by the
/// peak value (1/w1^2 + 1/w2^2)^2.
double envelope_identity_residual(double omega1, double omega2, double t);

/// 10 log10(p / reference). Zero power maps to negative infinity.
double to_decibel(double power, double reference = 1.0);
double from_decibel(double db, double reference = 1.0);

} // namespace tworay

#endif // TWORAY_CHANNEL_HPP
