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

#include "tworay/worstcase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <fmt/core.h>

namespace tworay {

namespace {

// Above this the scan would not finish in reasonable time; the policy is wrong.
constexpr std::size_t kMaxGridSamples = 50'000'000;
constexpr double kMinSamplesPerInterval = 1024.0;

template <class PowerAt>
WorstCaseResult min_over_candidates(const DistanceInterval& interval,
                                    const std::vector<double>& nulls, PowerAt&& power_at)
{
    WorstCaseResult best{power_at(interval.min()), interval.min(), CandidateKind::lower_endpoint};
    auto consider = [&](double d, CandidateKind kind) {
        const double p = power_at(d);
        if (p < best.power)
            best = {p, d, kind};
    };
    consider(interval.max(), CandidateKind::upper_endpoint);
    // nulls are sorted by decreasing distance; the first inside is the farthest
    const auto farthest = std::find_if(nulls.begin(), nulls.end(),
                                       [&](double d) { return interval.contains(d); });
    if (farthest != nulls.end())
        consider(*farthest, CandidateKind::interior_null);
    return best;
}

// |d/dd (l_ref - l_los)|
double path_difference_slope(const SceneGeometry& geom, double d)
{
    const PathLengths l = path_lengths(geom, d);
    return d / l.line_of_sight - d / l.reflected;
}

std::vector<double> sample_points(const DistanceInterval& interval, const ResolutionPolicy& policy)
{
    std::vector<double> xs;
    if (interval.span() == 0.0) {
        xs.push_back(interval.min());
        return xs;
    }
    const double cap = interval.span() / kMinSamplesPerInterval;

    auto step_at = [&](double d) -> double {
        if (const auto* fixed = std::get_if<FixedStep>(&policy)) {
            if (!(fixed->step > 0.0))
                throw std::invalid_argument("grid step must be positive");
            return std::min(fixed->step, cap);
        }
        const auto& adaptive = std::get<PhaseAdaptiveStep>(policy);
        if (!(adaptive.max_phase_step > 0.0) || adaptive.angular_rate < 0.0)
            throw std::invalid_argument("invalid phase-adaptive grid policy");
        const double k = adaptive.angular_rate / adaptive.constants.speed_of_light;
        auto limit = [&](double slope) { return slope > 0.0 ? adaptive.max_phase_step / (k * slope) : cap; };
        const double guess = std::min(limit(path_difference_slope(adaptive.geometry, d)), cap);
        // The slope may grow across the step; bound it using the far end too.
        const double s = std::max({path_difference_slope(adaptive.geometry, d),
                                   path_difference_slope(adaptive.geometry, d + 0.5 * guess),
                                   path_difference_slope(adaptive.geometry, d + guess)});
        return std::min(limit(s), cap);
    };

    double d = interval.min();
    while (d < interval.max()) {
        xs.push_back(d);
        if (xs.size() > kMaxGridSamples)
            throw std::length_error(fmt::format("grid scan exceeds {} samples", kMaxGridSamples));
        d += step_at(d);
    }
    xs.push_back(interval.max());
    return xs;
}

CandidateKind classify(const DistanceInterval& interval, double d)
{
    if (d == interval.min())
        return CandidateKind::lower_endpoint;
    if (d == interval.max())
        return CandidateKind::upper_endpoint;
    return CandidateKind::interior_null;
}

} // namespace

DistanceInterval::DistanceInterval(double d_min, double d_max) : min_(d_min), max_(d_max)
{
    if (!(d_min > 0.0) || !(d_min <= d_max) || !std::isfinite(d_max))
        throw std::invalid_argument(
            fmt::format("distance interval must satisfy 0 < d_min <= d_max, got [{}, {}]", d_min, d_max));
}

std::string_view to_string(CandidateKind kind)
{
    switch (kind) {
    case CandidateKind::lower_endpoint:
        return "lower_endpoint";
    case CandidateKind::upper_endpoint:
        return "upper_endpoint";
    case CandidateKind::interior_null:
        return "interior_null";
    }
    return "unknown";
}

WorstCaseResult worst_case_single(const SceneGeometry& geom, const DistanceInterval& interval,
                                  const CarrierFrequency& freq, const TransmitPower& power,
                                  const PhysicalConstants& constants)
{
    const auto nulls = null_distances(geom, freq, constants);
    return min_over_candidates(interval, nulls, [&](double d) {
        return receive_power_single(geom, d, freq, power, constants);
    });
}

WorstCaseResult worst_case_pair(const SceneGeometry& geom, const DistanceInterval& interval,
                                const FrequencyPair& pair, const TransmitPower& power,
                                const PhysicalConstants& constants)
{
    const auto nulls = null_distances(geom, pair.spacing(), constants);
    return min_over_candidates(interval, nulls, [&](double d) {
        return sum_power_lower_bound(geom, d, pair, power, constants);
    });
}

WorstCaseResult grid_min(const std::function<double(double)>& curve,
                         const DistanceInterval& interval, const ResolutionPolicy& policy)
{
    const std::vector<double> xs = sample_points(interval, policy);
    std::vector<double> vs(xs.size());
    std::transform(xs.begin(), xs.end(), vs.begin(), [&](double x) { return curve(x); });

    const std::size_t best = std::min_element(vs.begin(), vs.end()) - vs.begin();
    WorstCaseResult result{vs[best], xs[best], classify(interval, xs[best])};
    if (xs.size() < 3)
        return result;

    // Every sampled valley gets polished: a narrow deep null can sample above a wide shallow one.
    const std::size_t last = xs.size() - 1;
    for (std::size_t i = 0; i <= last; ++i) {
        const bool left_ok = i == 0 || vs[i] < vs[i - 1];
        const bool right_ok = i == last || vs[i] <= vs[i + 1];
        if (!left_ok || !right_ok)
            continue;
        const double lo = xs[i == 0 ? 0 : i - 1];
        const double hi = xs[std::min(i + 1, last)];
        const auto [x, v] =
            boost::math::tools::brent_find_minima(curve, lo, hi, std::numeric_limits<double>::digits / 2);
        if (v < result.power)
            result = {v, x, classify(interval, x)};
    }
    return result;
}

} // namespace tworay
