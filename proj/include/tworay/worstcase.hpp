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

// Minimum receive power over an uncertain transmitter-receiver distance.
//
// The closed-form routines evaluate only a handful of candidate distances:
// the interval endpoints and the farthest interference null inside the
// interval. grid_min is an independent brute-force scan used to check them.

#ifndef TWORAY_WORSTCASE_HPP
#define TWORAY_WORSTCASE_HPP

#include <functional>
#include <string_view>
#include <variant>

#include "tworay/channel.hpp"

namespace tworay {

class DistanceInterval
{
  public:
    DistanceInterval(double d_min, double d_max);

    double min() const { return min_; }
    double max() const { return max_; }
    double span() const { return max_ - min_; }
    bool contains(double d) const { return min_ <= d && d <= max_; }

  private:
    double min_;
    double max_;
};

enum class CandidateKind
{
    lower_endpoint,
    upper_endpoint,
    interior_null,
};

std::string_view to_string(CandidateKind kind);

struct WorstCaseResult
{
    double power = 0.0;    // watts
    double distance = 0.0; // meters, argmin
    CandidateKind kind = CandidateKind::lower_endpoint;
};

WorstCaseResult worst_case_single(const SceneGeometry& geom, const DistanceInterval& interval,
                                  const CarrierFrequency& freq, const TransmitPower& power,
                                  const PhysicalConstants& constants = {});

/// Minimum of the sum-power lower bound; the nulls come from the carrier spacing.
WorstCaseResult worst_case_pair(const SceneGeometry& geom, const DistanceInterval& interval,
                                const FrequencyPair& pair, const TransmitPower& power,
                                const PhysicalConstants& constants = {});

/// Uniform sampling with a fixed step in meters.
struct FixedStep
{
    double step = 1e-3;
};

/// Sampling whose local step keeps the change of (rate / c) * (l_ref - l_los)
/// below max_phase_step. rate is the fastest angular frequency in the curve.
struct PhaseAdaptiveStep
{
    SceneGeometry geometry;
    double angular_rate = 0.0;
    double max_phase_step = 0.01;
    PhysicalConstants constants{};
};

using ResolutionPolicy = std::variant<FixedStep, PhaseAdaptiveStep>;

/// Exhaustive scan of curve over interval followed by a Brent refinement
/// around the best sample. Ties keep the smallest distance.
WorstCaseResult grid_min(const std::function<double(double)>& curve,
                         const DistanceInterval& interval, const ResolutionPolicy& policy);

} // namespace tworay

#endif // TWORAY_WORSTCASE_HPP
