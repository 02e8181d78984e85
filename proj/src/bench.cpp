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

#include "tworay/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <system_error>
#include <thread>

#include <fmt/core.h>

namespace tworay::bench {

namespace {

std::mt19937_64 trial_rng(std::uint64_t master_seed, std::size_t trial_index)
{
    const auto index = static_cast<std::uint64_t>(trial_index);
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

void require_range(const Range& r, const char* name, bool strictly_positive)
{
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi || (strictly_positive && !(r.lo > 0.0)))
        throw std::invalid_argument(fmt::format("invalid {} range [{}, {}]", name, r.lo, r.hi));
}

double uniform(std::mt19937_64& rng, const Range& r)
{
    if (r.lo == r.hi)
        return r.lo;
    return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

// JSON has no infinities; an empty objective reports -inf dB as null.
nlohmann::json db_to_json(double db)
{
    return std::isfinite(db) ? nlohmann::json(db) : nlohmann::json(nullptr);
}

double db_from_json(const nlohmann::json& v)
{
    return v.is_null() ? -std::numeric_limits<double>::infinity() : v.get<double>();
}

nlohmann::json range_json(const Range& r) { return nlohmann::json::array({r.lo, r.hi}); }

Range range_from_json(const nlohmann::json& v, const char* name)
{
    if (!v.is_array() || v.size() != 2)
        throw std::invalid_argument(fmt::format("config field '{}' must be a two-element array", name));
    return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

std::string_view to_string(Scheme scheme)
{
    switch (scheme) {
    case Scheme::greedy:
        return "greedy";
    case Scheme::random:
        return "random";
    case Scheme::rr_simple:
        return "rr-simple";
    case Scheme::rr_block:
        return "rr-block";
    case Scheme::rr_profits:
        return "rr-profits";
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_string(std::string_view name)
{
    for (Scheme s : kSchemes)
        if (to_string(s) == name)
            return s;
    return std::nullopt;
}

qmkp::Assignment solve(Scheme scheme, const qmkp::Instance& instance, std::uint64_t seed)
{
    switch (scheme) {
    case Scheme::greedy:
        return qmkp::greedy_construct(instance, qmkp::Assignment::empty(instance.knapsacks())).normalize();
    case Scheme::random:
        return qmkp::assign_random(instance, seed);
    case Scheme::rr_simple:
        return qmkp::assign_rr_simple(instance);
    case Scheme::rr_block:
        return qmkp::assign_rr_block(instance);
    case Scheme::rr_profits:
        return qmkp::assign_rr_profits(instance).normalize();
    }
    throw std::invalid_argument("unknown scheme");
}

void ScenarioConfig::validate() const
{
    if (users == 0)
        throw std::invalid_argument("need at least one user (K >= 1)");
    if (frequencies == 0)
        throw std::invalid_argument("need at least one frequency (N >= 1)");
    if (frequencies < users)
        throw std::invalid_argument(
            fmt::format("RR-simple needs N >= K, got K = {} and N = {}", users, frequencies));
    if (trials == 0)
        throw std::invalid_argument("need at least one trial");
    require_range(band, "band", true);
    if (!(band.lo < band.hi))
        throw std::invalid_argument("band must satisfy f_lo < f_hi");
    require_range(rx_height, "receiver height", true);
    require_range(d_min, "d_min", true);
    require_range(span, "interval span", false);
    if (span.lo < 0.0)
        throw std::invalid_argument("interval span must be >= 0");
    if (!(tx_height > 0.0))
        throw std::invalid_argument("transmitter height must be > 0");
    if (!(transmit_power > 0.0))
        throw std::invalid_argument("transmit power must be > 0");
}

Scenario generate_scenario(const ScenarioConfig& config, std::size_t trial_index)
{
    config.validate();
    auto rng = trial_rng(config.master_seed, trial_index);
    const std::size_t n = config.frequencies;

    std::vector<double> hz(n);
    if (config.layout == FrequencyLayout::even_grid) {
        const double width = (config.band.hi - config.band.lo) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            hz[i] = config.band.lo + (static_cast<double>(i) + 0.5) * width;
    } else {
        for (double& f : hz)
            f = uniform(rng, config.band);
        std::sort(hz.begin(), hz.end());
        // redraw collisions until all carriers are distinct
        for (auto dup = std::adjacent_find(hz.begin(), hz.end()); dup != hz.end();
             dup = std::adjacent_find(hz.begin(), hz.end())) {
            *dup = uniform(rng, config.band);
            std::sort(hz.begin(), hz.end());
        }
    }

    Scenario scenario;
    scenario.frequencies.reserve(n);
    for (double f : hz)
        scenario.frequencies.push_back(CarrierFrequency::from_hz(f));

    scenario.users.reserve(config.users);
    for (std::size_t u = 0; u < config.users; ++u) {
        const double h = uniform(rng, config.rx_height);
        const double d_min = uniform(rng, config.d_min);
        const double d_max = d_min + uniform(rng, config.span);
        scenario.users.push_back({h, DistanceInterval(d_min, d_max)});
    }
    scenario.random_scheme_seed = rng();
    return scenario;
}

TrialResult run_trial(const Scenario& scenario, const SystemConfig& system)
{
    const ProfitTable table = build_profit_table(scenario.users, scenario.frequencies, system);
    const qmkp::Instance instance = qmkp::frequency_assignment_instance(table);
    const double users = static_cast<double>(scenario.users.size());

    TrialResult result;
    for (std::size_t s = 0; s < kSchemeCount; ++s) {
        const auto start = std::chrono::steady_clock::now();
        const qmkp::Assignment assignment = solve(kSchemes[s], instance, scenario.random_scheme_seed);
        const auto stop = std::chrono::steady_clock::now();
        result.seconds[s] = std::chrono::duration<double>(stop - start).count();
        result.objective[s] = qmkp::objective(instance, assignment);
        result.mean_db[s] = to_decibel(std::max(result.objective[s], 0.0) / users, system.power.watts());
    }
    return result;
}

BenchReport aggregate(const ScenarioConfig& config, std::vector<TrialResult> trials)
{
    if (trials.empty())
        throw std::invalid_argument("cannot aggregate zero trials");
    BenchReport report;
    report.config = config;
    const double count = static_cast<double>(trials.size());
    for (std::size_t s = 0; s < kSchemeCount; ++s) {
        double objective = 0.0;
        TimingStats t{0.0, std::numeric_limits<double>::infinity(), 0.0};
        for (const auto& trial : trials) {
            objective += trial.objective[s];
            t.mean += trial.seconds[s];
            t.min = std::min(t.min, trial.seconds[s]);
            t.max = std::max(t.max, trial.seconds[s]);
        }
        t.mean /= count;
        report.time[s] = t;
        const double per_user = objective / count / static_cast<double>(config.users);
        report.mean_db[s] = to_decibel(std::max(per_user, 0.0), config.transmit_power);
    }
    report.trials = std::move(trials);
    return report;
}

BenchReport run_benchmark(const ScenarioConfig& config, unsigned threads)
{
    config.validate();
    const SystemConfig system = config.system();
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.trials));

    std::vector<TrialResult> trials(config.trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < config.trials && !failed; i = next++) {
            try {
                trials[i] = run_trial(generate_scenario(config, i), system);
            } catch (...) {
                if (!failed.exchange(true))
                    failure = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t)
            pool.emplace_back(worker);
        worker();
    }
    if (failure)
        std::rethrow_exception(failure);
    return aggregate(config, std::move(trials));
}

nlohmann::json to_json(const ScenarioConfig& config)
{
    return {
        {"K", config.users},
        {"N", config.frequencies},
        {"band_hz", range_json(config.band)},
        {"h_tx_m", config.tx_height},
        {"p_t_w", config.transmit_power},
        {"h_rx_range_m", range_json(config.rx_height)},
        {"d_min_range_m", range_json(config.d_min)},
        {"span_range_m", range_json(config.span)},
        {"trials", config.trials},
        {"seed", config.master_seed},
        {"layout", config.layout == FrequencyLayout::even_grid ? "even-grid" : "iid-uniform"},
    };
}

ScenarioConfig scenario_config_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object())
        throw std::invalid_argument("bench config must be a JSON object");
    static constexpr std::array kKeys{"K",           "N",     "band_hz", "h_tx_m", "p_t_w",  "h_rx_range_m",
                                      "d_min_range_m", "span_range_m", "trials",  "seed",   "layout"};
    for (const auto& [key, value] : doc.items())
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
            throw std::invalid_argument(fmt::format("bench config: unknown field '{}'", key));
    ScenarioConfig config;
    try {
        if (doc.contains("K"))
            config.users = doc.at("K").get<std::size_t>();
        if (doc.contains("N"))
            config.frequencies = doc.at("N").get<std::size_t>();
        if (doc.contains("band_hz"))
            config.band = range_from_json(doc.at("band_hz"), "band_hz");
        if (doc.contains("h_tx_m"))
            config.tx_height = doc.at("h_tx_m").get<double>();
        if (doc.contains("p_t_w"))
            config.transmit_power = doc.at("p_t_w").get<double>();
        if (doc.contains("h_rx_range_m"))
            config.rx_height = range_from_json(doc.at("h_rx_range_m"), "h_rx_range_m");
        if (doc.contains("d_min_range_m"))
            config.d_min = range_from_json(doc.at("d_min_range_m"), "d_min_range_m");
        if (doc.contains("span_range_m"))
            config.span = range_from_json(doc.at("span_range_m"), "span_range_m");
        if (doc.contains("trials"))
            config.trials = doc.at("trials").get<std::size_t>();
        if (doc.contains("seed"))
            config.master_seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("layout")) {
            const auto layout = doc.at("layout").get<std::string>();
            if (layout == "even-grid")
                config.layout = FrequencyLayout::even_grid;
            else if (layout == "iid-uniform")
                config.layout = FrequencyLayout::iid_uniform;
            else
                throw std::invalid_argument(fmt::format("config field 'layout': unknown value '{}'", layout));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(fmt::format("bench config: {}", e.what()));
    }
    config.validate();
    return config;
}

nlohmann::json to_json(const BenchReport& report)
{
    nlohmann::json schemes = nlohmann::json::object();
    for (std::size_t s = 0; s < kSchemeCount; ++s) {
        schemes[std::string(to_string(kSchemes[s]))] = {
            {"mean_db", db_to_json(report.mean_db[s])},
            {"time_mean_s", report.time[s].mean},
            {"time_min_s", report.time[s].min},
            {"time_max_s", report.time[s].max},
        };
    }
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : report.trials) {
        nlohmann::json row = nlohmann::json::object();
        for (std::size_t s = 0; s < kSchemeCount; ++s)
            row[std::string(to_string(kSchemes[s]))] = {
                {"objective_w", t.objective[s]}, {"mean_db", db_to_json(t.mean_db[s])}, {"seconds", t.seconds[s]}};
        trials.push_back(std::move(row));
    }
    return {{"config", to_json(report.config)}, {"schemes", std::move(schemes)}, {"trials", std::move(trials)}};
}

BenchReport report_from_json(const nlohmann::json& doc)
{
    BenchReport report;
    report.config = scenario_config_from_json(doc.at("config"));
    const auto& schemes = doc.at("schemes");
    for (std::size_t s = 0; s < kSchemeCount; ++s) {
        const auto& e = schemes.at(std::string(to_string(kSchemes[s])));
        report.mean_db[s] = db_from_json(e.at("mean_db"));
        report.time[s] = {e.at("time_mean_s").get<double>(), e.at("time_min_s").get<double>(),
                          e.at("time_max_s").get<double>()};
    }
    for (const auto& row : doc.at("trials")) {
        TrialResult t;
        for (std::size_t s = 0; s < kSchemeCount; ++s) {
            const auto& e = row.at(std::string(to_string(kSchemes[s])));
            t.objective[s] = e.at("objective_w").get<double>();
            t.mean_db[s] = db_from_json(e.at("mean_db"));
            t.seconds[s] = e.at("seconds").get<double>();
        }
        report.trials.push_back(t);
    }
    return report;
}

std::string reports_to_csv(std::span<const BenchReport> reports)
{
    std::string out = "K,N,scheme,mean_db,time_mean_s,time_min_s,time_max_s\n";
    for (const auto& r : reports)
        for (std::size_t s = 0; s < kSchemeCount; ++s)
            out += fmt::format("{},{},{},{:.6g},{:.6g},{:.6g},{:.6g}\n", r.config.users, r.config.frequencies,
                               to_string(kSchemes[s]), r.mean_db[s], r.time[s].mean, r.time[s].min, r.time[s].max);
    return out;
}

void write_file_atomically(const std::filesystem::path& destination, std::string_view contents)
{
    std::filesystem::path tmp = destination;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error(fmt::format("cannot open '{}' for writing", destination.string()));
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.close();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw std::runtime_error(fmt::format("write to '{}' failed", destination.string()));
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, destination, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw std::runtime_error(fmt::format("cannot move output into '{}': {}", destination.string(), ec.message()));
    }
}

void export_reports(std::span<const BenchReport> reports, ReportFormat format,
                    const std::filesystem::path& destination)
{
    if (format == ReportFormat::csv) {
        write_file_atomically(destination, reports_to_csv(reports));
        return;
    }
    nlohmann::json doc = {{"reports", nlohmann::json::array()}};
    for (const auto& r : reports)
        doc["reports"].push_back(to_json(r));
    write_file_atomically(destination, doc.dump(2) + "\n");
}

std::vector<BenchReport> import_reports_json(const std::filesystem::path& source)
{
    std::ifstream in(source);
    if (!in)
        throw std::runtime_error(fmt::format("cannot open '{}'", source.string()));
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(fmt::format("'{}': {}", source.string(), e.what()));
    }
    std::vector<BenchReport> out;
    for (const auto& r : doc.at("reports"))
        out.push_back(report_from_json(r));
    return out;
}

} // namespace tworay::bench
