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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "tworay/bench.hpp"

using namespace tworay;
using namespace tworay::bench;

namespace {

ScenarioConfig small_config(std::size_t trials = 12)
{
    ScenarioConfig c;
    c.trials = trials;
    c.master_seed = 99;
    return c;
}

void check_same_numbers(const BenchReport& a, const BenchReport& b)
{
    REQUIRE(a.trials.size() == b.trials.size());
    for (std::size_t s = 0; s < kSchemeCount; ++s)
        CHECK(a.mean_db[s] == b.mean_db[s]);
    for (std::size_t t = 0; t < a.trials.size(); ++t)
        for (std::size_t s = 0; s < kSchemeCount; ++s) {
            CHECK(a.trials[t].objective[s] == b.trials[t].objective[s]);
            CHECK(a.trials[t].mean_db[s] == b.trials[t].mean_db[s]);
        }
}

std::filesystem::path scratch_dir()
{
    const auto dir = std::filesystem::temp_directory_path() / "tworay_test_bench";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("scheme names")
{
    for (Scheme s : kSchemes)
        CHECK(scheme_from_string(to_string(s)) == s);
    CHECK_FALSE(scheme_from_string("best").has_value());
    CHECK(to_string(Scheme::rr_block) == "rr-block");
}

TEST_CASE("config validation")
{
    ScenarioConfig c;
    CHECK_NOTHROW(c.validate());
    c.users = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.frequencies = 2;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.band = {2.5e9, 2.4e9};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.rx_height = {3.0, 1.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("scenario generation")
{
    for (FrequencyLayout layout : {FrequencyLayout::iid_uniform, FrequencyLayout::even_grid}) {
        ScenarioConfig c = small_config();
        c.layout = layout;
        c.users = 5;
        c.frequencies = 12;
        const Scenario a = generate_scenario(c, 3);
        const Scenario b = generate_scenario(c, 3);
        CHECK(a.frequencies == b.frequencies);
        CHECK(a.random_scheme_seed == b.random_scheme_seed);
        REQUIRE(a.users.size() == 5);
        REQUIRE(a.frequencies.size() == 12);
        for (std::size_t i = 0; i < a.users.size(); ++i) {
            CHECK(a.users[i].rx_height == b.users[i].rx_height);
            CHECK(a.users[i].interval.min() == b.users[i].interval.min());
        }
        for (std::size_t i = 0; i < a.frequencies.size(); ++i) {
            CHECK(a.frequencies[i].hz() >= 2.4e9);
            CHECK(a.frequencies[i].hz() <= 2.5e9);
            if (i > 0)
                CHECK(a.frequencies[i - 1].hz() < a.frequencies[i].hz());
        }
        const Scenario other = generate_scenario(c, 4);
        CHECK(other.users[0].rx_height != a.users[0].rx_height);
    }

    SUBCASE("distribution of users")
    {
        ScenarioConfig c = small_config();
        c.users = 100;
        c.frequencies = 100;
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t t = 0; t < 100; ++t) {
            for (const auto& u : generate_scenario(c, t).users) {
                CHECK(u.rx_height >= 1.0);
                CHECK(u.rx_height <= 3.0);
                CHECK(u.interval.min() >= 20.0);
                CHECK(u.interval.min() <= 40.0);
                CHECK(u.interval.span() >= 10.0 - 1e-9);
                CHECK(u.interval.span() <= 100.0 + 1e-9);
                sum += u.rx_height;
                ++count;
            }
        }
        CHECK(count == 10000);
        CHECK(std::abs(sum / static_cast<double>(count) - 2.0) <= 0.05);
    }

    SUBCASE("even grid uses cell centres")
    {
        ScenarioConfig c = small_config();
        c.frequencies = 4;
        const Scenario s = generate_scenario(c, 0);
        CHECK(s.frequencies[0].hz() == doctest::Approx(2.4125e9));
        CHECK(s.frequencies[3].hz() == doctest::Approx(2.4875e9));
    }
}

TEST_CASE("single trial")
{
    const ScenarioConfig c = small_config();
    const Scenario s = generate_scenario(c, 0);
    const SystemConfig sys = c.system();
    const TrialResult r = run_trial(s, sys);
    const ProfitTable table = build_profit_table(s.users, s.frequencies, sys);
    const qmkp::Instance inst = qmkp::frequency_assignment_instance(table);
    for (std::size_t k = 0; k < kSchemeCount; ++k) {
        const auto a = solve(kSchemes[k], inst, s.random_scheme_seed);
        CHECK(qmkp::feasible(inst, a));
        CHECK(r.objective[k] == doctest::Approx(oracle::table_objective(table, a.knapsacks)).epsilon(1e-12));
        CHECK(std::isfinite(r.mean_db[k]));
        CHECK(r.mean_db[k] == doctest::Approx(oracle::db(r.objective[k] / 3.0)));
        CHECK(r.seconds[k] >= 0.0);
    }
}

TEST_CASE("benchmark aggregation")
{
    SUBCASE("one trial reports that trial")
    {
        const BenchReport r = run_benchmark(small_config(1), 1);
        REQUIRE(r.trials.size() == 1);
        for (std::size_t s = 0; s < kSchemeCount; ++s) {
            CHECK(r.mean_db[s] == doctest::Approx(r.trials[0].mean_db[s]).epsilon(1e-14));
            CHECK(r.time[s].mean == r.trials[0].seconds[s]);
            CHECK(r.time[s].min == r.time[s].max);
        }
    }
    SUBCASE("linear averaging")
    {
        const BenchReport r = run_benchmark(small_config(), 2);
        for (std::size_t s = 0; s < kSchemeCount; ++s) {
            double total = 0.0;
            for (const auto& t : r.trials)
                total += t.objective[s];
            CHECK(r.mean_db[s] == doctest::Approx(oracle::db(total / 12.0 / 3.0)));
            CHECK(r.time[s].min <= r.time[s].mean);
            CHECK(r.time[s].mean <= r.time[s].max);
        }
    }
    SUBCASE("reproducible and independent of thread count")
    {
        const BenchReport serial = run_benchmark(small_config(), 1);
        check_same_numbers(serial, run_benchmark(small_config(), 1));
        check_same_numbers(serial, run_benchmark(small_config(), 4));
        ScenarioConfig other = small_config();
        other.master_seed = 100;
        CHECK(run_benchmark(other, 1).mean_db[0] != serial.mean_db[0]);
    }
}

TEST_CASE("export")
{
    const auto dir = scratch_dir();
    ScenarioConfig big = small_config(3);
    big.users = 4;
    big.frequencies = 9;
    big.layout = FrequencyLayout::iid_uniform;
    const std::vector<BenchReport> reports{run_benchmark(small_config(4), 2), run_benchmark(big, 2)};

    SUBCASE("csv")
    {
        const std::string csv = reports_to_csv(reports);
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        CHECK(line == "K,N,scheme,mean_db,time_mean_s,time_min_s,time_max_s");
        int rows = 0;
        while (std::getline(in, line))
            ++rows;
        CHECK(rows == 2 * static_cast<int>(kSchemeCount));
        CHECK(csv.find("\n4,9,rr-profits,") != std::string::npos);
        CHECK(reports_to_csv({}) == "K,N,scheme,mean_db,time_mean_s,time_min_s,time_max_s\n");
    }
    SUBCASE("json round trip")
    {
        const auto path = dir / "r.json";
        export_reports(reports, ReportFormat::json, path);
        const auto back = import_reports_json(path);
        REQUIRE(back.size() == 2);
        for (std::size_t i = 0; i < 2; ++i) {
            check_same_numbers(reports[i], back[i]);
            CHECK(back[i].config.users == reports[i].config.users);
            CHECK(back[i].config.layout == reports[i].config.layout);
            CHECK(back[i].config.master_seed == reports[i].config.master_seed);
            for (std::size_t s = 0; s < kSchemeCount; ++s) {
                CHECK(back[i].time[s].mean == reports[i].time[s].mean);
                for (std::size_t t = 0; t < back[i].trials.size(); ++t)
                    CHECK(back[i].trials[t].seconds[s] == reports[i].trials[t].seconds[s]);
            }
        }
        CHECK(to_json(back[1]) == to_json(reports[1]));
    }
    SUBCASE("config json")
    {
        const ScenarioConfig c = scenario_config_from_json(nlohmann::json::parse(R"({"K": 20, "N": 50, "seed": 7})"));
        CHECK(c.users == 20);
        CHECK(c.frequencies == 50);
        CHECK(c.master_seed == 7);
        CHECK(c.trials == 100);
        CHECK(c.layout == FrequencyLayout::even_grid);
        CHECK_THROWS_AS(scenario_config_from_json(nlohmann::json::parse(R"({"K": 0})")), std::invalid_argument);
        CHECK_THROWS_AS(scenario_config_from_json(nlohmann::json::parse(R"({"layout": "random"})")),
                        std::invalid_argument);
        CHECK_THROWS_AS(scenario_config_from_json(nlohmann::json::parse(R"({"users": 3})")), std::invalid_argument);
        CHECK_THROWS_AS(scenario_config_from_json(nlohmann::json::parse(R"({"band_hz": [1]})")),
                        std::invalid_argument);
    }
    SUBCASE("failed write leaves nothing behind")
    {
        const auto target = dir / "missing" / "r.csv";
        CHECK_THROWS_AS(export_reports(reports, ReportFormat::csv, target), std::runtime_error);
        CHECK_FALSE(std::filesystem::exists(target));
        CHECK_FALSE(std::filesystem::exists(dir / "missing"));
        try {
            export_reports(reports, ReportFormat::csv, target);
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("r.csv") != std::string::npos);
        }
    }
    SUBCASE("import errors name the file")
    {
        std::ofstream(dir / "bad.json") << "{not json";
        try {
            import_reports_json(dir / "bad.json");
            FAIL("expected an error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("bad.json") != std::string::npos);
        }
    }
    std::filesystem::remove_all(dir);
}
