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

#include "tworay/profits.hpp"

#include <stdexcept>

#include <fmt/core.h>

namespace tworay {

double single_profit(const UserProfile& user, const CarrierFrequency& freq, const SystemConfig& system)
{
    return worst_case_single(system.geometry_for(user), user.interval, freq, system.power, system.constants).power;
}

double pair_profit(const UserProfile& user, const CarrierFrequency& f_i, const CarrierFrequency& f_j,
                   const SystemConfig& system)
{
    if (f_i == f_j)
        throw std::invalid_argument(fmt::format("pair profit needs distinct carriers, got {} Hz twice", f_i.hz()));
    const FrequencyPair pair(f_i, f_j);
    const double total =
        worst_case_pair(system.geometry_for(user), user.interval, pair, system.power, system.constants).power;
    // subtract in canonical order so (i, j) and (j, i) round identically
    return total - single_profit(user, pair.lower(), system) - single_profit(user, pair.upper(), system);
}

ProfitTable::ProfitTable(std::size_t users, std::size_t frequencies)
    : users_(users), frequencies_(frequencies), single_(users * frequencies, 0.0),
      pair_(users * frequencies * frequencies, 0.0)
{
}

void ProfitTable::set_pair(std::size_t u, std::size_t i, std::size_t j, double value)
{
    pair_[index(u, i, j)] = value;
    pair_[index(u, j, i)] = value;
}

ProfitTable build_profit_table(std::span<const UserProfile> users,
                               std::span<const CarrierFrequency> freqs, const SystemConfig& system)
{
    if (users.empty())
        throw std::invalid_argument("profit table needs at least one user");
    for (std::size_t i = 0; i < freqs.size(); ++i)
        for (std::size_t j = i + 1; j < freqs.size(); ++j)
            if (freqs[i] == freqs[j])
                throw std::invalid_argument(
                    fmt::format("duplicate frequency {} Hz at positions {} and {}", freqs[i].hz(), i, j));

    ProfitTable table(users.size(), freqs.size());
    for (std::size_t u = 0; u < users.size(); ++u) {
        const SceneGeometry geom = system.geometry_for(users[u]);
        for (std::size_t i = 0; i < freqs.size(); ++i)
            table.set_single(u, i, single_profit(users[u], freqs[i], system));
        for (std::size_t i = 0; i < freqs.size(); ++i) {
            for (std::size_t j = i + 1; j < freqs.size(); ++j) {
                const FrequencyPair pair(freqs[i], freqs[j]);
                const double total =
                    worst_case_pair(geom, users[u].interval, pair, system.power, system.constants).power;
                // same association order as pair_profit (lower carrier first)
                const bool ordered = freqs[i] < freqs[j];
                const double lo = table.single(u, ordered ? i : j);
                const double hi = table.single(u, ordered ? j : i);
                table.set_pair(u, i, j, total - lo - hi);
            }
        }
    }
    return table;
}

nlohmann::json to_json(const UserProfile& user)
{
    return {{"h_rx_m", user.rx_height}, {"d_min_m", user.interval.min()}, {"d_max_m", user.interval.max()}};
}

UserProfile user_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object())
        throw std::invalid_argument("user entry must be an object with h_rx_m, d_min_m, d_max_m");
    auto field = [&](const char* name) {
        const auto it = doc.find(name);
        if (it == doc.end() || !it->is_number())
            throw std::invalid_argument(fmt::format("user entry: field '{}' missing or not a number", name));
        return it->get<double>();
    };
    const double h = field("h_rx_m");
    if (!(h > 0.0))
        throw std::invalid_argument(fmt::format("user entry: field 'h_rx_m' must be > 0, got {}", h));
    return {h, DistanceInterval(field("d_min_m"), field("d_max_m"))};
}

nlohmann::json profit_table_to_json(const ProfitTable& table, std::span<const UserProfile> users,
                                    std::span<const CarrierFrequency> freqs)
{
    if (users.size() != table.users() || freqs.size() != table.frequencies())
        throw std::invalid_argument("profit table shape does not match users/frequencies");
    nlohmann::json doc;
    doc["users"] = nlohmann::json::array();
    for (const auto& user : users)
        doc["users"].push_back(to_json(user));
    doc["frequencies_hz"] = nlohmann::json::array();
    for (const auto& f : freqs)
        doc["frequencies_hz"].push_back(f.hz());
    doc["single"] = nlohmann::json::array();
    doc["pair"] = nlohmann::json::array();
    for (std::size_t u = 0; u < table.users(); ++u) {
        nlohmann::json row = nlohmann::json::array();
        nlohmann::json block = nlohmann::json::array();
        for (std::size_t i = 0; i < table.frequencies(); ++i) {
            row.push_back(table.single(u, i));
            nlohmann::json pair_row = nlohmann::json::array();
            for (std::size_t j = 0; j < table.frequencies(); ++j)
                pair_row.push_back(i == j ? 0.0 : table.pair(u, i, j));
            block.push_back(std::move(pair_row));
        }
        doc["single"].push_back(std::move(row));
        doc["pair"].push_back(std::move(block));
    }
    return doc;
}

ProfitTable profit_table_from_json(const nlohmann::json& doc)
{
    const auto& single = doc.at("single");
    const auto& pair = doc.at("pair");
    const std::size_t k = single.size();
    const std::size_t n = k == 0 ? 0 : single.at(0).size();
    if (pair.size() != k)
        throw std::invalid_argument("profit table: 'pair' and 'single' disagree on user count");
    ProfitTable table(k, n);
    for (std::size_t u = 0; u < k; ++u) {
        if (single[u].size() != n || pair[u].size() != n)
            throw std::invalid_argument(fmt::format("profit table: ragged row for user {}", u));
        for (std::size_t i = 0; i < n; ++i) {
            table.set_single(u, i, single[u][i].get<double>());
            if (pair[u][i].size() != n)
                throw std::invalid_argument(fmt::format("profit table: ragged pair row ({}, {})", u, i));
            for (std::size_t j = i + 1; j < n; ++j) {
                const double a = pair[u][i][j].get<double>();
                if (a != pair[u][j][i].get<double>())
                    throw std::invalid_argument(
                        fmt::format("profit table: pair profits not symmetric at user {} ({}, {})", u, i, j));
                table.set_pair(u, i, j, a);
            }
        }
    }
    return table;
}

} // namespace tworay
