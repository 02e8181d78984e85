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

#include "tworay/qmkp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

#include <fmt/core.h>
#include <fmt/ranges.h>

#include "tworay/profits.hpp"

namespace tworay::qmkp {

namespace {

void require_pair_assignment(const Instance& instance, const char* scheme)
{
    if (!instance.is_pair_assignment())
        throw std::invalid_argument(fmt::format("{} requires unit weights and capacity 2", scheme));
}

std::vector<double> remaining_capacity(const Instance& instance, const Assignment& assignment)
{
    std::vector<double> cap(instance.capacities().begin(), instance.capacities().end());
    for (std::size_t u = 0; u < assignment.knapsacks.size(); ++u)
        for (Item i : assignment.knapsacks[u])
            cap[u] -= instance.weight(i);
    return cap;
}

} // namespace

Instance::Instance(std::vector<double> weights, std::vector<double> capacities)
    : weights_(std::move(weights)), capacities_(std::move(capacities)),
      profit_(weights_.size() * capacities_.size(), 0.0),
      joint_(weights_.size() * weights_.size() * capacities_.size(), 0.0)
{
    for (double w : weights_)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument(fmt::format("item weights must be finite and >= 0, got {}", w));
    for (double c : capacities_)
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::invalid_argument(fmt::format("capacities must be finite and >= 0, got {}", c));
}

void Instance::set_profit(std::size_t u, Item i, double value)
{
    if (u >= knapsacks() || i >= items())
        throw std::out_of_range(fmt::format("profit index ({}, {}) out of range", u, i));
    profit_[u * items() + i] = value;
}

void Instance::set_joint(std::size_t u, Item i, Item j, double value)
{
    if (u >= knapsacks() || i >= items() || j >= items())
        throw std::out_of_range(fmt::format("joint profit index ({}, {}, {}) out of range", u, i, j));
    if (i == j)
        throw std::invalid_argument("joint profit needs two distinct items");
    joint_[(u * items() + i) * items() + j] = value;
    joint_[(u * items() + j) * items() + i] = value;
}

bool Instance::is_pair_assignment() const
{
    return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 1.0; }) &&
           std::all_of(capacities_.begin(), capacities_.end(), [](double c) { return c == 2.0; });
}

Instance frequency_assignment_instance(const ProfitTable& table)
{
    Instance instance(std::vector<double>(table.frequencies(), 1.0), std::vector<double>(table.users(), 2.0));
    for (std::size_t u = 0; u < table.users(); ++u) {
        for (Item i = 0; i < table.frequencies(); ++i) {
            instance.set_profit(u, i, table.single(u, i));
            for (Item j = i + 1; j < table.frequencies(); ++j)
                instance.set_joint(u, i, j, table.pair(u, i, j));
        }
    }
    return instance;
}

Assignment& Assignment::normalize()
{
    for (auto& items : knapsacks)
        std::sort(items.begin(), items.end());
    return *this;
}

std::size_t Assignment::assigned_count() const
{
    std::size_t n = 0;
    for (const auto& items : knapsacks)
        n += items.size();
    return n;
}

bool feasible(const Instance& instance, const Assignment& assignment)
{
    if (assignment.knapsacks.size() != instance.knapsacks())
        throw std::out_of_range(fmt::format("assignment has {} knapsacks, instance has {}",
                                            assignment.knapsacks.size(), instance.knapsacks()));
    std::vector<bool> used(instance.items(), false);
    bool ok = true;
    for (std::size_t u = 0; u < instance.knapsacks(); ++u) {
        double load = 0.0;
        for (Item i : assignment.knapsacks[u]) {
            if (i >= instance.items())
                throw std::out_of_range(fmt::format("item {} out of range (N = {})", i, instance.items()));
            if (used[i])
                ok = false;
            used[i] = true;
            load += instance.weight(i);
        }
        if (load > instance.capacity(u))
            ok = false;
    }
    return ok;
}

double knapsack_profit(const Instance& instance, std::size_t u, std::span<const Item> items)
{
    double total = 0.0;
    for (std::size_t a = 0; a < items.size(); ++a) {
        total += instance.profit(u, items[a]);
        for (std::size_t b = a + 1; b < items.size(); ++b)
            total += instance.joint(u, items[a], items[b]);
    }
    return total;
}

double objective(const Instance& instance, const Assignment& assignment)
{
    if (!feasible(instance, assignment))
        throw std::invalid_argument("objective of an infeasible assignment");
    double total = 0.0;
    for (std::size_t u = 0; u < instance.knapsacks(); ++u)
        total += knapsack_profit(instance, u, assignment.knapsacks[u]);
    return total;
}

double value_density(const Instance& instance, std::size_t u, Item i, std::span<const Item> context)
{
    if (u >= instance.knapsacks() || i >= instance.items())
        throw std::out_of_range(fmt::format("value density index ({}, {}) out of range", u, i));
    const double w = instance.weight(i);
    if (w == 0.0)
        throw std::domain_error(fmt::format("value density undefined for zero-weight item {}", i));
    double sum = instance.profit(u, i);
    for (Item j : context)
        if (j != i)
            sum += instance.joint(u, i, j);
    return sum / w;
}

ValueDensityMatrix value_density_matrix(const Instance& instance, std::span<const Item> context)
{
    ValueDensityMatrix v(instance.items(), instance.knapsacks());
    for (Item i = 0; i < instance.items(); ++i)
        for (std::size_t u = 0; u < instance.knapsacks(); ++u)
            v.at(i, u) = value_density(instance, u, i, context);
    return v;
}

Assignment greedy_construct(const Instance& instance, const Assignment& initial, std::vector<GreedyStep>* trace)
{
    if (!feasible(instance, initial))
        throw std::invalid_argument("initial assignment is infeasible");

    Assignment result = initial;
    std::vector<double> cap = remaining_capacity(instance, initial);

    std::vector<bool> taken(instance.items(), false);
    for (const auto& items : initial.knapsacks)
        for (Item i : items)
            taken[i] = true;
    ItemSet unassigned;
    for (Item i = 0; i < instance.items(); ++i)
        if (!taken[i])
            unassigned.push_back(i);

    // Initial densities use the whole unassigned set as context; after the
    // first assignment each knapsack's own contents are the context.
    ValueDensityMatrix v(instance.items(), instance.knapsacks());
    for (Item i : unassigned)
        for (std::size_t u = 0; u < instance.knapsacks(); ++u)
            v.at(i, u) = value_density(instance, u, i, unassigned);

    struct Candidate
    {
        double density;
        Item item;
        std::size_t knapsack;
    };
    std::vector<Candidate> order;

    while (!unassigned.empty()) {
        order.clear();
        for (Item i : unassigned)
            for (std::size_t u = 0; u < instance.knapsacks(); ++u)
                order.push_back({v.at(i, u), i, u});
        std::sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
            if (a.density != b.density)
                return a.density > b.density;
            return std::tie(a.item, a.knapsack) < std::tie(b.item, b.knapsack);
        });

        const auto pick = std::find_if(order.begin(), order.end(), [&](const Candidate& c) {
            return instance.weight(c.item) <= cap[c.knapsack];
        });
        if (pick == order.end())
            break;

        result.knapsacks[pick->knapsack].push_back(pick->item);
        cap[pick->knapsack] -= instance.weight(pick->item);
        unassigned.erase(std::find(unassigned.begin(), unassigned.end(), pick->item));
        if (trace)
            trace->push_back({pick->item, pick->knapsack, pick->density});

        for (Item i : unassigned)
            for (std::size_t u = 0; u < instance.knapsacks(); ++u)
                v.at(i, u) = value_density(instance, u, i, result.knapsacks[u]);
    }
    return result;
}

Assignment exhaustive_solve(const Instance& instance)
{
    const std::size_t n = instance.items();
    const std::size_t k = instance.knapsacks();
    if (std::pow(static_cast<double>(k + 1), static_cast<double>(n)) > kExhaustiveLimit)
        throw std::length_error(
            fmt::format("exhaustive search over ({} + 1)^{} allocations exceeds the limit", k, n));

    Assignment current = Assignment::empty(k);
    std::vector<double> cap(instance.capacities().begin(), instance.capacities().end());
    Assignment best = current;
    double best_value = 0.0;
    bool have_best = false;

    // Depth-first over items in label order 0 (unassigned), 1..k, so leaves
    // are visited in lexicographic order and a strict > keeps the first optimum.
    auto search = [&](auto&& self, Item i, double value) -> void {
        if (i == n) {
            if (!have_best || value > best_value) {
                best = current;
                best_value = value;
                have_best = true;
            }
            return;
        }
        self(self, i + 1, value);
        for (std::size_t u = 0; u < k; ++u) {
            if (instance.weight(i) > cap[u])
                continue;
            double gain = instance.profit(u, i);
            for (Item j : current.knapsacks[u])
                gain += instance.joint(u, i, j);
            current.knapsacks[u].push_back(i);
            cap[u] -= instance.weight(i);
            self(self, i + 1, value + gain);
            cap[u] += instance.weight(i);
            current.knapsacks[u].pop_back();
        }
    };
    search(search, 0, 0.0);
    return best;
}

Assignment assign_random(const Instance& instance, std::uint64_t seed)
{
    require_pair_assignment(instance, "random assignment");
    const std::size_t k = instance.knapsacks();
    Assignment out = Assignment::empty(k);
    if (k == 0)
        return out;
    ItemSet items(instance.items());
    std::iota(items.begin(), items.end(), Item{0});
    std::mt19937_64 rng(seed);
    std::shuffle(items.begin(), items.end(), rng);
    const std::size_t take = std::min(2 * k, items.size());
    for (std::size_t n = 0; n < take; ++n)
        out.knapsacks[n % k].push_back(items[n]);
    return out.normalize();
}

Assignment assign_rr_simple(const Instance& instance)
{
    require_pair_assignment(instance, "RR-simple");
    const std::size_t k = instance.knapsacks();
    const std::size_t n = instance.items();
    if (n < k)
        throw std::invalid_argument(fmt::format("RR-simple needs at least one item per knapsack (N = {}, K = {})", n, k));
    Assignment out = Assignment::empty(k);
    for (std::size_t u = 0; u < k; ++u) {
        out.knapsacks[u].push_back(u);
        if (u + k < n)
            out.knapsacks[u].push_back(u + k);
    }
    return out;
}

Assignment assign_rr_block(const Instance& instance)
{
    require_pair_assignment(instance, "RR-block");
    const std::size_t k = instance.knapsacks();
    const std::size_t n = instance.items();
    Assignment out = Assignment::empty(k);
    for (std::size_t u = 0; u < k; ++u)
        for (Item i : {2 * u, 2 * u + 1})
            if (i < n)
                out.knapsacks[u].push_back(i);
    return out;
}

Assignment assign_rr_profits(const Instance& instance)
{
    require_pair_assignment(instance, "RR-profits");
    const std::size_t k = instance.knapsacks();
    Assignment out = Assignment::empty(k);
    std::vector<bool> taken(instance.items(), false);
    std::size_t left = instance.items();
    for (int round = 0; round < 2; ++round) {
        for (std::size_t u = 0; u < k && left > 0; ++u) {
            Item best = instance.items();
            double best_density = 0.0;
            for (Item i = 0; i < instance.items(); ++i) {
                if (taken[i])
                    continue;
                const double d = value_density(instance, u, i, out.knapsacks[u]);
                if (best == instance.items() || d > best_density) {
                    best = i;
                    best_density = d;
                }
            }
            out.knapsacks[u].push_back(best);
            taken[best] = true;
            --left;
        }
    }
    return out;
}

nlohmann::json to_json(const Instance& instance)
{
    nlohmann::json doc;
    doc["weights"] = std::vector<double>(instance.weights().begin(), instance.weights().end());
    doc["capacities"] = std::vector<double>(instance.capacities().begin(), instance.capacities().end());
    doc["profit"] = nlohmann::json::array();
    doc["joint"] = nlohmann::json::array();
    for (std::size_t u = 0; u < instance.knapsacks(); ++u) {
        nlohmann::json row = nlohmann::json::array();
        nlohmann::json block = nlohmann::json::array();
        for (Item i = 0; i < instance.items(); ++i) {
            row.push_back(instance.profit(u, i));
            nlohmann::json joint_row = nlohmann::json::array();
            for (Item j = 0; j < instance.items(); ++j)
                joint_row.push_back(i == j ? 0.0 : instance.joint(u, i, j));
            block.push_back(std::move(joint_row));
        }
        doc["profit"].push_back(std::move(row));
        doc["joint"].push_back(std::move(block));
    }
    return doc;
}

Instance instance_from_json(const nlohmann::json& doc)
{
    Instance instance(doc.at("weights").get<std::vector<double>>(), doc.at("capacities").get<std::vector<double>>());
    const std::size_t n = instance.items();
    const std::size_t k = instance.knapsacks();
    const auto& profit = doc.at("profit");
    if (profit.size() != k)
        throw std::invalid_argument(fmt::format("instance: 'profit' has {} rows, expected {}", profit.size(), k));
    const auto joint = doc.contains("joint") ? doc.at("joint") : nlohmann::json::array();
    if (!joint.empty() && joint.size() != k)
        throw std::invalid_argument(fmt::format("instance: 'joint' has {} blocks, expected {}", joint.size(), k));
    for (std::size_t u = 0; u < k; ++u) {
        if (profit[u].size() != n)
            throw std::invalid_argument(fmt::format("instance: profit row {} has {} entries, expected {}", u, profit[u].size(), n));
        for (Item i = 0; i < n; ++i)
            instance.set_profit(u, i, profit[u][i].get<double>());
        if (joint.empty())
            continue;
        if (joint[u].size() != n)
            throw std::invalid_argument(fmt::format("instance: joint block {} has {} rows, expected {}", u, joint[u].size(), n));
        for (Item i = 0; i < n; ++i) {
            if (joint[u][i].size() != n)
                throw std::invalid_argument(fmt::format("instance: joint row ({}, {}) has wrong length", u, i));
            for (Item j = i + 1; j < n; ++j) {
                const double a = joint[u][i][j].get<double>();
                if (a != joint[u][j][i].get<double>())
                    throw std::invalid_argument(fmt::format("instance: joint profit not symmetric at ({}, {}, {})", u, i, j));
                instance.set_joint(u, i, j, a);
            }
        }
    }
    return instance;
}

nlohmann::json to_json(const Assignment& assignment)
{
    return {{"knapsacks", assignment.knapsacks}};
}

Assignment assignment_from_json(const nlohmann::json& doc)
{
    return {doc.at("knapsacks").get<std::vector<ItemSet>>()};
}

} // namespace tworay::qmkp
