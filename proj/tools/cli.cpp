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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "tworay/bench.hpp"
#include "tworay/channel.hpp"
#include "tworay/profits.hpp"
#include "tworay/qmkp.hpp"
#include "tworay/worstcase.hpp"

namespace tworay::cli {

namespace {

// Input file problem; reported with exit code 1 rather than as a usage error.
struct InputError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::string g6(double v) { return fmt::format("{:.6g}", v); }

void emit(const std::string& contents, const std::string& destination, std::ostream& out)
{
    if (destination.empty() || destination == "-")
        out << contents;
    else
        bench::write_file_atomically(destination, contents);
}

nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError(fmt::format("{}: cannot open file", path));
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        // the message carries line and column
        throw InputError(fmt::format("{}: {}", path, e.what()));
    }
}

std::vector<UserProfile> read_users(const std::string& path)
{
    const nlohmann::json doc = read_json_file(path);
    if (!doc.is_array() || doc.empty())
        throw InputError(fmt::format("{}: expected a non-empty JSON array of users", path));
    std::vector<UserProfile> users;
    for (std::size_t u = 0; u < doc.size(); ++u) {
        try {
            users.push_back(user_from_json(doc[u]));
        } catch (const std::exception& e) {
            throw InputError(fmt::format("{}: users[{}]: {}", path, u, e.what()));
        }
    }
    return users;
}

std::vector<double> read_frequencies(const std::string& path)
{
    const nlohmann::json doc = read_json_file(path);
    if (!doc.is_array() || doc.empty())
        throw InputError(fmt::format("{}: expected a non-empty JSON array of frequencies in Hz", path));
    std::vector<double> hz;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        if (!doc[i].is_number() || !(doc[i].get<double>() > 0.0))
            throw InputError(fmt::format("{}: frequencies[{}]: expected a positive number of Hz", path, i));
        hz.push_back(doc[i].get<double>());
    }
    return hz;
}

struct Geometry
{
    double htx = 10.0;
    double hrx = 1.5;
    double pt = 1.0;
};

void add_geometry(CLI::App& cmd, Geometry& g)
{
    cmd.add_option("--htx", g.htx, "Transmitter height [m]")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--hrx", g.hrx, "Receiver height [m]")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--pt", g.pt, "Transmit power [W]; also the dB reference")->capture_default_str()->check(CLI::PositiveNumber);
}

std::string power_curve(const Geometry& g, double freq, std::optional<double> freq2, double dmin, double dmax,
                        std::size_t samples)
{
    const SceneGeometry geom{g.htx, g.hrx};
    const TransmitPower pt(g.pt);
    const auto f1 = CarrierFrequency::from_hz(freq);
    std::optional<FrequencyPair> pair;
    if (freq2)
        pair.emplace(f1, CarrierFrequency::from_hz(*freq2));

    std::string csv = fmt::format("# dB reference: P_t = {} W\n", g6(g.pt));
    csv += pair ? "distance,power_sum_db,lower_bound_db\n" : "distance,power_db\n";
    const double ratio = std::log(dmax / dmin);
    for (std::size_t i = 0; i < samples; ++i) {
        const double d = (i + 1 == samples) ? dmax
                                            : dmin * std::exp(ratio * static_cast<double>(i) /
                                                              static_cast<double>(samples - 1));
        if (pair) {
            csv += fmt::format("{},{},{}\n", g6(d), g6(to_decibel(sum_power_two(geom, d, *pair, pt), g.pt)),
                               g6(to_decibel(sum_power_lower_bound(geom, d, *pair, pt), g.pt)));
        } else {
            csv += fmt::format("{},{}\n", g6(d), g6(to_decibel(receive_power_single(geom, d, f1, pt), g.pt)));
        }
    }
    return csv;
}

std::string minima_table(const Geometry& g, double freq, std::ostream& err)
{
    const SceneGeometry geom{g.htx, g.hrx};
    const auto f = CarrierFrequency::from_hz(freq);
    const auto nulls = null_distances(geom, f);
    std::string csv = fmt::format("# dB reference: P_t = {} W\nk,distance_m,power_db\n", g6(g.pt));
    for (std::size_t k = 0; k < nulls.size(); ++k) {
        // d_k can be 0 at k = k_max for equal heights; the power is singular there
        const double p = nulls[k] > 0.0 || g.htx != g.hrx
                             ? to_decibel(receive_power_single(geom, nulls[k], f, TransmitPower(g.pt)), g.pt)
                             : -std::numeric_limits<double>::infinity();
        csv += fmt::format("{},{},{}\n", k + 1, g6(nulls[k]), g6(p));
    }
    if (nulls.empty())
        err << fmt::format("note: maximum phase shift {} rad < 2 pi, no interference minima\n",
                           g6(max_phase_shift(geom, f)));
    return csv;
}

std::string worst_case_report(const Geometry& g, double freq, std::optional<double> freq2, double dmin,
                              double dmax, bool verify)
{
    const SceneGeometry geom{g.htx, g.hrx};
    const TransmitPower pt(g.pt);
    const DistanceInterval interval(dmin, dmax);
    const auto f1 = CarrierFrequency::from_hz(freq);

    WorstCaseResult result;
    std::function<double(double)> curve;
    double rate = f1.angular();
    std::vector<double> nulls;
    if (freq2) {
        const FrequencyPair pair(f1, CarrierFrequency::from_hz(*freq2));
        result = worst_case_pair(geom, interval, pair, pt);
        curve = [=](double d) { return sum_power_lower_bound(geom, d, pair, pt); };
        rate = pair.spacing_angular();
        nulls = null_distances(geom, pair.spacing());
    } else {
        result = worst_case_single(geom, interval, f1, pt);
        curve = [=](double d) { return receive_power_single(geom, d, f1, pt); };
        nulls = null_distances(geom, f1);
    }

    std::string report;
    report += fmt::format("mode: {}\n", freq2 ? "pair (sum-power lower bound)" : "single");
    report += fmt::format("reference_w: {}\n", g6(g.pt));
    report += fmt::format("worst_case_db: {}\n", g6(to_decibel(result.power, g.pt)));
    report += fmt::format("worst_case_w: {}\n", g6(result.power));
    report += fmt::format("argmin_m: {}\n", g6(result.distance));
    report += fmt::format("candidate: {}\n", to_string(result.kind));
    std::string list;
    for (double d : nulls)
        if (interval.contains(d))
            list += (list.empty() ? "" : " ") + g6(d);
    report += fmt::format("nulls_in_interval_m: {}\n", list.empty() ? "none" : list);
    if (verify) {
        const auto oracle = grid_min(curve, interval, PhaseAdaptiveStep{geom, rate});
        const double gap = std::abs(to_decibel(result.power, g.pt) - to_decibel(oracle.power, g.pt));
        report += fmt::format("grid_db: {}\n", g6(to_decibel(oracle.power, g.pt)));
        report += fmt::format("grid_argmin_m: {}\n", g6(oracle.distance));
        report += fmt::format("discrepancy_db: {}\n", g6(gap));
    }
    return report;
}

struct AssignOptions
{
    std::string users_file;
    std::string freqs_file;
    double band_lo = 2.4e9;
    double band_hi = 2.5e9;
    std::size_t n = 0;
    std::string scheme = "greedy";
    std::uint64_t seed = 0;
    std::string layout = "even-grid";
    double htx = 10.0;
    double pt = 1.0;
};

std::string assign_report(const AssignOptions& opt)
{
    const std::vector<UserProfile> users = read_users(opt.users_file);
    std::vector<double> hz;
    if (!opt.freqs_file.empty()) {
        hz = read_frequencies(opt.freqs_file);
    } else {
        if (opt.n == 0)
            throw CLI::ValidationError("--n", "either --freqs or --n (with --band-lo/--band-hi) is required");
        bench::ScenarioConfig cfg;
        cfg.users = 1;
        cfg.frequencies = opt.n;
        cfg.band = {opt.band_lo, opt.band_hi};
        cfg.master_seed = opt.seed;
        cfg.layout = opt.layout == "iid-uniform" ? bench::FrequencyLayout::iid_uniform
                                                 : bench::FrequencyLayout::even_grid;
        for (const auto& f : bench::generate_scenario(cfg, 0).frequencies)
            hz.push_back(f.hz());
    }
    std::sort(hz.begin(), hz.end());
    if (const auto dup = std::adjacent_find(hz.begin(), hz.end()); dup != hz.end())
        throw InputError(fmt::format("duplicate frequency {} Hz", *dup));
    std::vector<CarrierFrequency> freqs;
    for (double f : hz)
        freqs.push_back(CarrierFrequency::from_hz(f));

    std::vector<bench::Scheme> schemes;
    if (opt.scheme == "all") {
        schemes.assign(bench::kSchemes.begin(), bench::kSchemes.end());
    } else if (const auto s = bench::scheme_from_string(opt.scheme)) {
        schemes.push_back(*s);
    } else {
        throw CLI::ValidationError("--scheme", fmt::format("unknown scheme '{}'", opt.scheme));
    }

    const SystemConfig system{opt.htx, TransmitPower(opt.pt), {}};
    const ProfitTable table = build_profit_table(users, freqs, system);
    const qmkp::Instance instance = qmkp::frequency_assignment_instance(table);

    nlohmann::json doc;
    doc["reference_w"] = opt.pt;
    doc["h_tx_m"] = opt.htx;
    doc["frequencies_hz"] = hz;
    doc["users"] = nlohmann::json::array();
    for (const auto& u : users)
        doc["users"].push_back(to_json(u));
    doc["results"] = nlohmann::json::array();
    for (bench::Scheme s : schemes) {
        const qmkp::Assignment a = bench::solve(s, instance, opt.seed);
        const double total = qmkp::objective(instance, a);
        nlohmann::json per_user = nlohmann::json::array();
        nlohmann::json carriers = nlohmann::json::array();
        for (std::size_t u = 0; u < a.knapsacks.size(); ++u) {
            const double p = qmkp::knapsack_profit(instance, u, a.knapsacks[u]);
            per_user.push_back(a.knapsacks[u].empty() ? nlohmann::json(nullptr)
                                                      : nlohmann::json(to_decibel(std::max(p, 0.0), opt.pt)));
            nlohmann::json f = nlohmann::json::array();
            for (auto i : a.knapsacks[u])
                f.push_back(hz[i]);
            carriers.push_back(std::move(f));
        }
        const double avg = total / static_cast<double>(users.size());
        doc["results"].push_back({
            {"scheme", bench::to_string(s)},
            {"assignment", qmkp::to_json(a)["knapsacks"]},
            {"assigned_hz", std::move(carriers)},
            {"objective_w", total},
            {"per_user_db", std::move(per_user)},
            {"average_db", avg > 0.0 ? nlohmann::json(to_decibel(avg, opt.pt)) : nlohmann::json(nullptr)},
        });
    }
    return doc.dump(2) + "\n";
}

} // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Worst-case two-ray receive power and frequency assignment", "tworay"};
    app.require_subcommand(1);

    Geometry geo;
    double freq = 0.0;
    double freq2 = 0.0;
    double dmin = 1.0;
    double dmax = 1000.0;
    std::size_t samples = 1000;
    bool verify = false;
    std::string out_path;

    auto* curve = app.add_subcommand("power-curve", "Receive power versus distance as CSV");
    add_geometry(*curve, geo);
    curve->add_option("--freq", freq, "Carrier frequency [Hz]")->required()->check(CLI::PositiveNumber);
    auto* curve_f2 = curve->add_option("--freq2", freq2, "Second carrier [Hz]; switches to pair mode")->check(CLI::PositiveNumber);
    curve->add_option("--dmin", dmin, "Smallest distance [m]")->capture_default_str()->check(CLI::PositiveNumber);
    curve->add_option("--dmax", dmax, "Largest distance [m]")->capture_default_str()->check(CLI::PositiveNumber);
    curve->add_option("--samples", samples, "Number of log-spaced samples (>= 2)")->capture_default_str()->check(CLI::Range(std::size_t{2}, std::size_t{10'000'000}));
    curve->add_option("--out", out_path, "Output file (default: stdout)");

    auto* minima = app.add_subcommand("minima", "Distances of the interference minima");
    add_geometry(*minima, geo);
    minima->add_option("--freq", freq, "Carrier frequency [Hz]")->required()->check(CLI::PositiveNumber);
    minima->add_option("--out", out_path, "Output file (default: stdout)");

    auto* worst = app.add_subcommand("worst-case", "Worst-case receive power over a distance interval");
    add_geometry(*worst, geo);
    worst->add_option("--freq", freq, "Carrier frequency [Hz]")->required()->check(CLI::PositiveNumber);
    auto* worst_f2 = worst->add_option("--freq2", freq2, "Second carrier [Hz]")->check(CLI::PositiveNumber);
    worst->add_option("--dmin", dmin, "Interval start [m]")->required()->check(CLI::PositiveNumber);
    worst->add_option("--dmax", dmax, "Interval end [m]")->required()->check(CLI::PositiveNumber);
    worst->add_flag("--verify-grid", verify, "Cross-check against a dense grid search");
    worst->add_option("--out", out_path, "Output file (default: stdout)");

    AssignOptions assign_opt;
    auto* assign = app.add_subcommand("assign", "Assign carrier pairs to users");
    assign->add_option("--users", assign_opt.users_file, "JSON array of {h_rx_m, d_min_m, d_max_m}")->required();
    auto* assign_freqs = assign->add_option("--freqs", assign_opt.freqs_file, "JSON array of frequencies [Hz]");
    assign->add_option("--band-lo", assign_opt.band_lo, "Band start [Hz] when drawing frequencies")->capture_default_str();
    assign->add_option("--band-hi", assign_opt.band_hi, "Band end [Hz] when drawing frequencies")->capture_default_str();
    assign->add_option("--n", assign_opt.n, "Number of frequencies to draw")->excludes(assign_freqs);
    assign->add_option("--layout", assign_opt.layout, "Layout of drawn frequencies: even-grid or iid-uniform")
        ->capture_default_str()
        ->check(CLI::IsMember({"iid-uniform", "even-grid"}));
    assign->add_option("--scheme", assign_opt.scheme, "greedy, random, rr-simple, rr-block, rr-profits or all")->capture_default_str();
    assign->add_option("--seed", assign_opt.seed, "Seed for drawn frequencies and the random scheme")->capture_default_str();
    assign->add_option("--htx", assign_opt.htx, "Transmitter height [m]")->capture_default_str()->check(CLI::PositiveNumber);
    assign->add_option("--pt", assign_opt.pt, "Transmit power [W]")->capture_default_str()->check(CLI::PositiveNumber);
    assign->add_option("--out", out_path, "Output file (default: stdout)");

    std::string config_file;
    std::optional<std::size_t> k_opt, n_opt, trials_opt;
    std::optional<std::uint64_t> seed_opt;
    std::optional<std::string> layout_opt;
    unsigned threads = 0;
    std::string format = "both";
    auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo comparison of all schemes");
    bench_cmd->add_option("--config", config_file, "JSON scenario config");
    bench_cmd->add_option("--k", k_opt, "Number of users");
    bench_cmd->add_option("--n", n_opt, "Number of frequencies");
    bench_cmd->add_option("--trials", trials_opt, "Number of trials");
    bench_cmd->add_option("--seed", seed_opt, "Master seed");
    bench_cmd->add_option("--layout", layout_opt, "Frequency layout: even-grid (default) or iid-uniform")
        ->check(CLI::IsMember({"iid-uniform", "even-grid"}));
    bench_cmd->add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
    bench_cmd->add_option("--format", format, "csv, json or both")->capture_default_str()->check(CLI::IsMember({"csv", "json", "both"}));
    bench_cmd->add_option("--out", out_path, "Output path prefix; .csv/.json are appended (default: CSV to stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (curve->parsed()) {
            if (!(dmin < dmax))
                throw CLI::ValidationError("--dmin/--dmax", "need dmin < dmax");
            emit(power_curve(geo, freq, curve_f2->count() ? std::optional(freq2) : std::nullopt, dmin, dmax, samples),
                 out_path, out);
        } else if (minima->parsed()) {
            emit(minima_table(geo, freq, err), out_path, out);
        } else if (worst->parsed()) {
            emit(worst_case_report(geo, freq, worst_f2->count() ? std::optional(freq2) : std::nullopt, dmin, dmax,
                                   verify),
                 out_path, out);
        } else if (assign->parsed()) {
            emit(assign_report(assign_opt), out_path, out);
        } else if (bench_cmd->parsed()) {
            bench::ScenarioConfig config;
            if (!config_file.empty()) {
                try {
                    config = bench::scenario_config_from_json(read_json_file(config_file));
                } catch (const std::invalid_argument& e) {
                    throw InputError(fmt::format("{}: {}", config_file, e.what()));
                }
            }
            if (k_opt)
                config.users = *k_opt;
            if (n_opt)
                config.frequencies = *n_opt;
            if (trials_opt)
                config.trials = *trials_opt;
            if (seed_opt)
                config.master_seed = *seed_opt;
            if (layout_opt)
                config.layout = *layout_opt == "even-grid" ? bench::FrequencyLayout::even_grid
                                                           : bench::FrequencyLayout::iid_uniform;
            try {
                config.validate();
            } catch (const std::invalid_argument& e) {
                throw CLI::ValidationError("bench", e.what());
            }
            const bench::BenchReport report = bench::run_benchmark(config, threads);
            const std::span<const bench::BenchReport> one(&report, 1);
            if (out_path.empty() || out_path == "-") {
                if (format == "json") {
                    out << nlohmann::json{{"reports", {bench::to_json(report)}}}.dump(2) << "\n";
                } else {
                    out << bench::reports_to_csv(one);
                }
            } else {
                if (format != "json")
                    bench::export_reports(one, bench::ReportFormat::csv, out_path + ".csv");
                if (format != "csv")
                    bench::export_reports(one, bench::ReportFormat::json, out_path + ".json");
            }
        }
    } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace tworay::cli
