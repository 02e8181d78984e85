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

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "tworay/channel.hpp"

using namespace tworay;

namespace {

constexpr double kC = 299792458.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

const SceneGeometry kScene{10.0, 1.5};
const CarrierFrequency kOmegaOverC10 = CarrierFrequency::from_angular(10.0 * kC);
const CarrierFrequency k477MHz = kOmegaOverC10;
const CarrierFrequency k2400MHz = CarrierFrequency::from_hz(2.4e9);
const TransmitPower kUnit{1.0};

// Local minima of P_r counted on a log-spaced grid; independent of the
// k_max / d_k formulas.
std::size_t count_power_minima(const SceneGeometry& geom, const CarrierFrequency& f)
{
    const std::size_t n = 4'000'000;
    const double lo = 1e-3, hi = 1e5;
    const double r = std::log(hi / lo);
    double prev2 = receive_power_single(geom, lo, f, kUnit);
    double prev1 = receive_power_single(geom, lo * std::exp(r / n), f, kUnit);
    std::size_t minima = 0;
    for (std::size_t i = 2; i <= n; ++i) {
        const double cur = receive_power_single(geom, lo * std::exp(r * static_cast<double>(i) / n), f, kUnit);
        if (prev1 < prev2 && prev1 < cur)
            ++minima;
        prev2 = prev1;
        prev1 = cur;
    }
    return minima;
}

} // namespace

TEST_CASE("path lengths")
{
    SUBCASE("zero distance collapses to height difference and sum")
    {
        const auto l = path_lengths(kScene, 0.0);
        CHECK(l.line_of_sight == doctest::Approx(8.5));
        CHECK(l.reflected == doctest::Approx(11.5));
        const auto m = path_lengths({3.0, 4.0}, 0.0);
        CHECK(m.line_of_sight == doctest::Approx(1.0));
        CHECK(m.reflected == doctest::Approx(7.0));
    }
    SUBCASE("difference of squares is 4 h_tx h_rx")
    {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> h(0.5, 30.0), d(0.0, 1000.0);
        for (int i = 0; i < 1000; ++i) {
            const SceneGeometry g{h(rng), h(rng)};
            const auto l = path_lengths(g, d(rng));
            CHECK(l.reflected >= l.line_of_sight);
            CHECK(l.reflected * l.reflected - l.line_of_sight * l.line_of_sight ==
                  doctest::Approx(4.0 * g.tx_height * g.rx_height).epsilon(1e-9));
            CHECK(l.difference(g) == doctest::Approx(l.reflected - l.line_of_sight).epsilon(1e-9));
        }
    }
    SUBCASE("rejects negative distance and bad geometry")
    {
        CHECK_THROWS_AS(path_lengths(kScene, -1.0), std::invalid_argument);
        CHECK_THROWS_AS(path_lengths({0.0, 1.0}, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(path_lengths({1.0, -2.0}, 1.0), std::invalid_argument);
    }
}

TEST_CASE("phase shift")
{
    CHECK(std::abs(phase_shift(kScene, 46.66, kOmegaOverC10) - kTwoPi) < 1e-3);
    CHECK(phase_shift(kScene, 0.0, kOmegaOverC10) == doctest::Approx(30.0));
    CHECK(phase_shift(kScene, 1e9, k2400MHz) < 1e-5);

    SUBCASE("strictly decreasing in distance, bounded by the maximum")
    {
        double prev = phase_shift(kScene, 1e-6, k2400MHz);
        CHECK(prev < max_phase_shift(kScene, k2400MHz));
        for (double d = 0.01; d < 2000.0; d *= 1.01) {
            const double cur = phase_shift(kScene, d, k2400MHz);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("maximum phase shift and number of minima")
{
    CHECK(max_phase_shift(kScene, kOmegaOverC10) == doctest::Approx(30.0));
    CHECK(max_phase_shift({4.0, 4.0}, kOmegaOverC10) == doctest::Approx(2.0 * 10.0 * 4.0));
    // 2 (2 pi 2.4e9 / c) 1.5
    CHECK(max_phase_shift(kScene, k2400MHz) == doctest::Approx(150.9).epsilon(1e-3));

    CHECK(k_max(kScene, kOmegaOverC10) == 4);
    CHECK(k_max(kScene, CarrierFrequency::from_hz(1e6)) == 0);

    SUBCASE("k_max matches the number of power minima found on a grid")
    {
        CHECK(count_power_minima(kScene, kOmegaOverC10) == 4);
        CHECK(count_power_minima(kScene, k2400MHz) == 24);
        CHECK(k_max(kScene, k2400MHz) == 24);
    }
}

TEST_CASE("null distances")
{
    const auto d = null_distances(kScene, kOmegaOverC10);
    REQUIRE(d.size() == 4);
    CHECK(d[0] == doctest::Approx(46.7).epsilon(0.05 / 46.7));
    CHECK(d[1] == doctest::Approx(21.6).epsilon(0.05 / 21.6));
    CHECK(d[2] == doctest::Approx(12.3).epsilon(0.05 / 12.3));
    CHECK(d[3] == doctest::Approx(6.5).epsilon(0.05 / 6.5));

    CHECK(null_distances(kScene, CarrierFrequency::from_hz(1e6)).empty());

    const auto high = null_distances(kScene, k2400MHz);
    REQUIRE(high.size() == 24);
    CHECK(std::abs(high[2] - 79.4) < 0.1);

    SUBCASE("phase round trip and ordering over random geometries")
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> h(0.5, 20.0), f(1e8, 6e9);
        for (int trial = 0; trial < 200; ++trial) {
            const SceneGeometry g{h(rng), h(rng)};
            const auto carrier = CarrierFrequency::from_hz(f(rng));
            const auto nulls = null_distances(g, carrier);
            CHECK(nulls.size() == k_max(g, carrier));
            for (std::size_t k = 0; k < nulls.size(); ++k) {
                if (k > 0)
                    CHECK(nulls[k] < nulls[k - 1]);
                // at d = 0 the phase is bounded by the maximum; skip a clamped root
                if (nulls[k] > 0.0)
                    CHECK(std::abs(phase_shift(g, nulls[k], carrier) - kTwoPi * static_cast<double>(k + 1)) < 1e-9 * (k + 1) * 10);
            }
        }
    }
}

TEST_CASE("single-carrier receive power")
{
    CHECK(oracle::db(receive_power_single(kScene, 30.0, k477MHz, kUnit)) == doctest::Approx(-50.0).epsilon(0.5 / 50));
    CHECK(oracle::db(receive_power_single(kScene, 100.0, k477MHz, kUnit)) == doctest::Approx(-60.0).epsilon(0.5 / 60));
    CHECK(oracle::db(receive_power_single(kScene, 30.0, k2400MHz, kUnit)) == doctest::Approx(-64.0).epsilon(0.5 / 64));
    CHECK(oracle::db(receive_power_single(kScene, 100.0, k2400MHz, kUnit)) == doctest::Approx(-75.0).epsilon(0.5 / 75));
    const double d1 = null_distances(kScene, k477MHz)[0];
    CHECK(to_decibel(receive_power_single(kScene, d1, k477MHz, kUnit)) == doctest::Approx(-97.0).epsilon(0.5 / 97));

    SUBCASE("matches the textbook cosine form away from cancellation")
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> h(0.5, 20.0), d(0.1, 200.0), f(1e8, 6e9);
        for (int i = 0; i < 2000; ++i) {
            const SceneGeometry g{h(rng), h(rng)};
            const double dist = d(rng);
            const auto carrier = CarrierFrequency::from_hz(f(rng));
            const double l = std::hypot(g.tx_height - g.rx_height, dist);
            const double lr = std::hypot(g.tx_height + g.rx_height, dist);
            const double w = carrier.angular();
            const double direct = std::pow(kC / (2 * w), 2) *
                                  (1 / (l * l) + 1 / (lr * lr) - 2 / (l * lr) * std::cos(w / kC * (lr - l)));
            CHECK(receive_power_single(g, dist, carrier, kUnit) == doctest::Approx(direct).epsilon(1e-6));
        }
    }
    SUBCASE("nonnegative, symmetric in heights, linear in transmit power")
    {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> h(0.5, 20.0), d(0.0, 1e4), f(1e8, 6e9);
        for (int i = 0; i < 5000; ++i) {
            const SceneGeometry g{h(rng), h(rng)};
            const double dist = d(rng);
            const auto carrier = CarrierFrequency::from_hz(f(rng));
            const double p = receive_power_single(g, dist, carrier, kUnit);
            CHECK(p >= 0.0);
            CHECK(receive_power_single(g.swapped(), dist, carrier, kUnit) == p);
            CHECK(receive_power_single(g, dist, carrier, TransmitPower(3.5)) == doctest::Approx(3.5 * p));
        }
    }
    SUBCASE("zero distance")
    {
        CHECK(receive_power_single(kScene, 0.0, k477MHz, kUnit) > 0.0);
        CHECK_THROWS_AS(receive_power_single({2.0, 2.0}, 0.0, k477MHz, kUnit), std::domain_error);
    }
}

TEST_CASE("two-carrier sum power")
{
    const FrequencyPair pair(k2400MHz, CarrierFrequency::from_hz(2.65e9));

    SUBCASE("closed form equals two half-power single evaluations")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> h(0.5, 20.0), d(0.1, 1e4), f(1e8, 6e9);
        for (int i = 0; i < 10000; ++i) {
            const SceneGeometry g{h(rng), h(rng)};
            const double dist = d(rng);
            const FrequencyPair p(CarrierFrequency::from_hz(f(rng)), CarrierFrequency::from_hz(f(rng)));
            const TransmitPower half(0.5);
            const double sum = receive_power_single(g, dist, p.lower(), half) + receive_power_single(g, dist, p.upper(), half);
            CHECK(sum_power_two(g, dist, p, kUnit) == doctest::Approx(sum).epsilon(1e-12));
        }
    }
    SUBCASE("equal carriers recombine to the single-carrier power")
    {
        const double half = receive_power_single(kScene, 55.0, k2400MHz, TransmitPower(0.5));
        CHECK(half + half == doctest::Approx(receive_power_single(kScene, 55.0, k2400MHz, kUnit)).epsilon(1e-15));
    }
    SUBCASE("pair ordering is canonical")
    {
        const FrequencyPair swapped(CarrierFrequency::from_hz(2.65e9), k2400MHz);
        CHECK(swapped.lower() == k2400MHz);
        CHECK(swapped.spacing_angular() > 0.0);
        CHECK(sum_power_two(kScene, 42.0, swapped, kUnit) == sum_power_two(kScene, 42.0, pair, kUnit));
        CHECK_THROWS_AS(FrequencyPair(k2400MHz, k2400MHz), std::invalid_argument);
    }
}

TEST_CASE("sum-power lower bound")
{
    const FrequencyPair pair(k2400MHz, CarrierFrequency::from_hz(2.65e9));

    SUBCASE("never exceeds the sum power")
    {
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> h(0.5, 20.0), d(0.1, 1e4), f(1e8, 6e9), pt(0.1, 10.0);
        for (int i = 0; i < 10000; ++i) {
            const SceneGeometry g{h(rng), h(rng)};
            const double dist = d(rng);
            const FrequencyPair p(CarrierFrequency::from_hz(f(rng)), CarrierFrequency::from_hz(f(rng)));
            const TransmitPower power(pt(rng));
            CHECK(sum_power_lower_bound(g, dist, p, power) <= sum_power_two(g, dist, p, power) + 1e-12 * power.watts());
        }
    }
    SUBCASE("minimum over [30, 100] m is -82.9 dB")
    {
        const double m = oracle::scan_min([&](double d) { return sum_power_lower_bound(kScene, d, pair, kUnit); },
                                          30.0, 100.0, 200001);
        CHECK(std::abs(oracle::db(m) - -82.9) < 0.2);
    }
    SUBCASE("bound touches the sum power within every two carrier phase cycles")
    {
        // nulls k and k + 2 of the lower carrier span two full 2 pi cycles;
        // the analytic phase does not advance exactly at the lower carrier rate
        const auto nulls = null_distances(kScene, pair.lower());
        int windows = 0;
        for (std::size_t k = 0; k + 2 < nulls.size() && nulls[k + 2] > 30.0; ++k) {
            const double lo = nulls[k + 2], hi = nulls[k];
            double gap = 1e300;
            double rel = 1e300;
            for (int i = 0; i <= 200000; ++i) {
                const double d = lo + (hi - lo) * i / 200000.0;
                const double ps = sum_power_two(kScene, d, pair, kUnit);
                const double lb = sum_power_lower_bound(kScene, d, pair, kUnit);
                gap = std::min(gap, ps - lb);
                rel = std::min(rel, (ps - lb) / lb);
            }
            CHECK(gap < 1e-6);
            CHECK(rel < 1e-4);
            ++windows;
        }
        CHECK(windows >= 3);
    }
}

TEST_CASE("analytic-signal envelope identity")
{
    CHECK(envelope_identity_residual(1e9, 3e9, 0.0) < 1e-15);
    CHECK(envelope_identity_residual(2e10, 2e10, 1.3e-8) < 1e-12);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> w(2 * std::numbers::pi * 1e8, 2 * std::numbers::pi * 6e9), t(0.0, 1e-7);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i)
        worst = std::max(worst, envelope_identity_residual(w(rng), w(rng), t(rng)));
    CHECK(worst < 1e-12);
    CHECK_THROWS_AS(envelope_identity_residual(0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("decibel conversion")
{
    CHECK(to_decibel(1.0, 1.0) == 0.0);
    CHECK(to_decibel(0.5, 1.0) == doctest::Approx(-3.0103).epsilon(1e-5));
    CHECK(std::isinf(to_decibel(0.0)));
    CHECK(to_decibel(0.0) < 0.0);
    CHECK_THROWS_AS(to_decibel(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(to_decibel(1.0, 0.0), std::invalid_argument);
    CHECK(from_decibel(to_decibel(2.5e-9)) == doctest::Approx(2.5e-9));
}

TEST_CASE("domain types reject invalid values")
{
    CHECK_THROWS_AS(CarrierFrequency::from_hz(0.0), std::invalid_argument);
    CHECK_THROWS_AS(CarrierFrequency::from_hz(-5.0), std::invalid_argument);
    CHECK_THROWS_AS(TransmitPower(0.0), std::invalid_argument);
    CHECK_THROWS_AS((PhysicalConstants{-1.0}.validate()), std::invalid_argument);
    CHECK(CarrierFrequency::from_angular(kTwoPi * 5.0).hz() == doctest::Approx(5.0));
}
