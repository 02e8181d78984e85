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

// Quadratic multiple knapsack problem with heterogeneous profits.
//
// Item i placed in knapsack u earns profit(u, i); every unordered pair of
// items sharing knapsack u additionally earns joint(u, i, j). Profits of
// either kind may be negative.

#ifndef TWORAY_QMKP_HPP
#define TWORAY_QMKP_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

namespace tworay {

class ProfitTable;

namespace qmkp {

using Item = std::size_t;
using ItemSet = std::vector<Item>;

class Instance
{
  public:
    Instance(std::vector<double> weights, std::vector<double> capacities);

    std::size_t items() const { return weights_.size(); }
    std::size_t knapsacks() const { return capacities_.size(); }

    double weight(Item i) const { return weights_[i]; }
    double capacity(std::size_t u) const { return capacities_[u]; }
    std::span<const double> weights() const { return weights_; }
    std::span<const double> capacities() const { return capacities_; }

    double profit(std::size_t u, Item i) const { return profit_[u * items() + i]; }
    double joint(std::size_t u, Item i, Item j) const { return joint_[(u * items() + i) * items() + j]; }

    void set_profit(std::size_t u, Item i, double value);
    /// Symmetric: sets (i, j) and (j, i). i == j is rejected.
    void set_joint(std::size_t u, Item i, Item j, double value);

    /// Unit weights and capacity 2 everywhere.
    bool is_pair_assignment() const;

  private:
    std::vector<double> weights_;
    std::vector<double> capacities_;
    std::vector<double> profit_;
    std::vector<double> joint_;
};

/// Unit weights, capacity 2 per user, profits copied from the table.
Instance frequency_assignment_instance(const ProfitTable& table);

struct Assignment
{
    std::vector<ItemSet> knapsacks;

    static Assignment empty(std::size_t knapsacks) { return {std::vector<ItemSet>(knapsacks)}; }
    /// Sorts each knapsack's items ascending.
    Assignment& normalize();
    std::size_t assigned_count() const;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Throws std::out_of_range for bad indices or a knapsack count mismatch.
bool feasible(const Instance& instance, const Assignment& assignment);

/// Profit of one knapsack holding items; each unordered pair counted once.
double knapsack_profit(const Instance& instance, std::size_t u, std::span<const Item> items);

/// Throws std::invalid_argument for infeasible assignments.
double objective(const Instance& instance, const Assignment& assignment);

/// (profit(u, i) + sum over j in context, j != i, of joint(u, i, j)) / w_i.
double value_density(const Instance& instance, std::size_t u, Item i, std::span<const Item> context);

/// Row-major items x knapsacks.
class ValueDensityMatrix
{
  public:
    ValueDensityMatrix(std::size_t items, std::size_t knapsacks)
        : items_(items), knapsacks_(knapsacks), values_(items * knapsacks, 0.0)
    {
    }

    std::size_t rows() const { return items_; }
    std::size_t cols() const { return knapsacks_; }
    double& at(Item i, std::size_t u) { return values_[i * knapsacks_ + u]; }
    double at(Item i, std::size_t u) const { return values_[i * knapsacks_ + u]; }

  private:
    std::size_t items_;
    std::size_t knapsacks_;
    std::vector<double> values_;
};

ValueDensityMatrix value_density_matrix(const Instance& instance, std::span<const Item> context);

struct GreedyStep
{
    Item item;
    std::size_t knapsack;
    double density;
};

/// Constructive value-density procedure. Completes `initial`, which is kept
/// untouched. If trace is non-null, every assignment step is appended to it.
Assignment greedy_construct(const Instance& instance, const Assignment& initial,
                            std::vector<GreedyStep>* trace = nullptr);

/// Largest (knapsacks + 1)^items the exhaustive search accepts.
inline constexpr double kExhaustiveLimit = 1e7;

/// Optimal assignment by enumeration. Among equal objectives the
/// lexicographically smallest per-item label vector wins (label 0 means
/// unassigned, u + 1 means knapsack u).
Assignment exhaustive_solve(const Instance& instance);

// Baselines for the pair-assignment instantiation (unit weights, capacity 2).
// Items are taken to be ordered by ascending frequency.

Assignment assign_random(const Instance& instance, std::uint64_t seed);
Assignment assign_rr_simple(const Instance& instance);
Assignment assign_rr_block(const Instance& instance);
Assignment assign_rr_profits(const Instance& instance);

nlohmann::json to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Assignment& assignment);
Assignment assignment_from_json(const nlohmann::json& doc);

} // namespace qmkp
} // namespace tworay

#endif // TWORAY_QMKP_HPP
