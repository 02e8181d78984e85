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

// Per-user knapsack profits derived from worst-case receive powers.
//
// A user holding one carrier transmits at full power and earns the
// single-carrier worst case. A user holding two carriers earns the worst case
// of the sum-power lower bound; the joint profit is whatever must be added to
// the two single profits to reach it. Joint profits can be negative.

#ifndef TWORAY_PROFITS_HPP
#define TWORAY_PROFITS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

#include "tworay/channel.hpp"
#include "tworay/worstcase.hpp"

namespace tworay {

struct UserProfile
{
    double rx_height;
    DistanceInterval interval;
};

struct SystemConfig
{
    double tx_height = 10.0;
    TransmitPower power{1.0};
    PhysicalConstants constants{};

    SceneGeometry geometry_for(const UserProfile& user) const { return {tx_height, user.rx_height}; }
};

double single_profit(const UserProfile& user, const CarrierFrequency& freq, const SystemConfig& system);

/// worst_case_pair - single_profit(f_i) - single_profit(f_j). Symmetric.
double pair_profit(const UserProfile& user, const CarrierFrequency& f_i, const CarrierFrequency& f_j,
                   const SystemConfig& system);

/// Dense K x N single profits and K x N x N symmetric joint profits, in watts.
class ProfitTable
{
  public:
    ProfitTable(std::size_t users, std::size_t frequencies);

    std::size_t users() const { return users_; }
    std::size_t frequencies() const { return frequencies_; }

    double single(std::size_t u, std::size_t i) const { return single_[u * frequencies_ + i]; }
    double pair(std::size_t u, std::size_t i, std::size_t j) const { return pair_[index(u, i, j)]; }

    void set_single(std::size_t u, std::size_t i, double value) { single_[u * frequencies_ + i] = value; }
    /// Writes both (i, j) and (j, i).
    void set_pair(std::size_t u, std::size_t i, std::size_t j, double value);

    friend bool operator==(const ProfitTable&, const ProfitTable&) = default;

  private:
    std::size_t index(std::size_t u, std::size_t i, std::size_t j) const
    {
        return (u * frequencies_ + i) * frequencies_ + j;
    }

    std::size_t users_;
    std::size_t frequencies_;
    std::vector<double> single_;
    std::vector<double> pair_;
};

/// Frequencies must be pairwise distinct; they are used in the given order.
ProfitTable build_profit_table(std::span<const UserProfile> users,
                               std::span<const CarrierFrequency> freqs, const SystemConfig& system);

// JSON: {"users":[{h_rx_m,d_min_m,d_max_m}], "frequencies_hz":[...],
//        "single":[[...]], "pair":[[[...]]]}
nlohmann::json profit_table_to_json(const ProfitTable& table, std::span<const UserProfile> users,
                                    std::span<const CarrierFrequency> freqs);
ProfitTable profit_table_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const UserProfile& user);
UserProfile user_from_json(const nlohmann::json& doc);

} // namespace tworay

#endif // TWORAY_PROFITS_HPP
