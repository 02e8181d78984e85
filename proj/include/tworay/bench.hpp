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

// Monte-Carlo comparison of the greedy solver against the baseline schemes
// on randomly drawn multi-user scenarios.

#ifndef TWORAY_BENCH_HPP
#define TWORAY_BENCH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tworay/profits.hpp"
#include "tworay/qmkp.hpp"

namespace tworay::bench {

enum class Scheme
{
    greedy,
    random,
    rr_simple,
    rr_block,
    rr_profits,
};

inline constexpr std::array kSchemes{Scheme::greedy, Scheme::random, Scheme::rr_simple, Scheme::rr_block,
                                     Scheme::rr_profits};
inline constexpr std::size_t kSchemeCount = kSchemes.size();

std::string_view to_string(Scheme scheme);
std::optional<Scheme> scheme_from_string(std::string_view name);

/// Runs one scheme on an instance. seed only matters for Scheme::random.
qmkp::Assignment solve(Scheme scheme, const qmkp::Instance& instance, std::uint64_t seed);

struct Range
{
    double lo;
    double hi;
};

enum class FrequencyLayout
{
    iid_uniform, ///< N sorted independent uniform draws in the band
    even_grid,   ///< N cell centres of an even partition of the band
};

struct ScenarioConfig
{
    std::size_t users = 3;
    std::size_t frequencies = 10;
    Range band{2.4e9, 2.5e9};
    double tx_height = 10.0;
    double transmit_power = 1.0;
    Range rx_height{1.0, 3.0};
    Range d_min{20.0, 40.0};
    Range span{10.0, 100.0};
    std::size_t trials = 100;
    std::uint64_t master_seed = 0;
    FrequencyLayout layout = FrequencyLayout::even_grid;

    void validate() const;
    SystemConfig system() const { return {tx_height, TransmitPower(transmit_power), {}}; }
};

struct Scenario
{
    std::vector<UserProfile> users;
    std::vector<CarrierFrequency> frequencies; // ascending
    std::uint64_t random_scheme_seed = 0;
};

/// Deterministic in (config.master_seed, trial_index).
Scenario generate_scenario(const ScenarioConfig& config, std::size_t trial_index);

struct TrialResult
{
    std::array<double, kSchemeCount> objective{}; // watts, summed over users
    std::array<double, kSchemeCount> mean_db{};   // 10 log10(objective / (K P_t))
    std::array<double, kSchemeCount> seconds{};   // wall time of each solve

    double greedy_seconds() const { return seconds[0]; }
};

TrialResult run_trial(const Scenario& scenario, const SystemConfig& system);

struct TimingStats
{
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct BenchReport
{
    ScenarioConfig config;
    std::vector<TrialResult> trials;
    std::array<double, kSchemeCount> mean_db{}; // linear mean of objective / K, then dB
    std::array<TimingStats, kSchemeCount> time{};

    const TimingStats& greedy_time() const { return time[0]; }
};

/// Folds trial results in index order.
BenchReport aggregate(const ScenarioConfig& config, std::vector<TrialResult> trials);

/// threads == 0 picks the hardware concurrency. The result does not depend
/// on the thread count (apart from wall times).
BenchReport run_benchmark(const ScenarioConfig& config, unsigned threads = 0);

enum class ReportFormat
{
    csv,
    json,
};

nlohmann::json to_json(const ScenarioConfig& config);
ScenarioConfig scenario_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const BenchReport& report);
BenchReport report_from_json(const nlohmann::json& doc);

/// Header plus one row per (report, scheme).
std::string reports_to_csv(std::span<const BenchReport> reports);

/// Writes via a temporary file; nothing is left behind on failure.
void export_reports(std::span<const BenchReport> reports, ReportFormat format,
                    const std::filesystem::path& destination);
std::vector<BenchReport> import_reports_json(const std::filesystem::path& source);

/// Atomic text write used by the exporters and the CLI.
void write_file_atomically(const std::filesystem::path& destination, std::string_view contents);

} // namespace tworay::bench

#endif // TWORAY_BENCH_HPP
