// Copyright 2026 The Iceberg Compiler Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "iceberg/matching.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>

using namespace iceberg;

namespace {

int64_t brute(int n, const std::vector<WeightedEdge> &edges) {
    std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, 0));
    for (const auto &e : edges) w[e.u][e.v] = w[e.v][e.u] = std::max(w[e.u][e.v], e.w);
    std::vector<bool> used(n, false);
    std::function<int64_t(int)> rec = [&](int v) -> int64_t {
        while (v < n && used[v]) ++v;
        if (v >= n) return 0;
        used[v] = true;
        int64_t best = rec(v + 1);
        for (int u = v + 1; u < n; ++u) {
            if (!used[u] && w[v][u] > 0) {
                used[u] = true;
                best = std::max(best, w[v][u] + rec(v + 1));
                used[u] = false;
            }
        }
        used[v] = false;
        return best;
    };
    return rec(0);
}

bool is_matching(const std::vector<int> &mate, const std::vector<WeightedEdge> &edges) {
    for (size_t v = 0; v < mate.size(); ++v) {
        if (mate[v] < 0) continue;
        if (mate[mate[v]] != static_cast<int>(v)) return false;
        bool found = false;
        for (const auto &e : edges) {
            found |= e.w > 0 && ((e.u == static_cast<int>(v) && e.v == mate[v]) ||
                                 (e.v == static_cast<int>(v) && e.u == mate[v]));
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace

TEST(matching, small_cases) {
    EXPECT_EQ(max_weight_matching(2, {{0, 1, 5}}), (std::vector<int>{1, 0}));
    // Path a-b-c-d with a heavy middle edge.
    std::vector<WeightedEdge> path{{0, 1, 2}, {1, 2, 5}, {2, 3, 2}};
    EXPECT_EQ(matching_weight(max_weight_matching(4, path), path), 5);
    std::vector<WeightedEdge> path2{{0, 1, 3}, {1, 2, 5}, {2, 3, 3}};
    EXPECT_EQ(matching_weight(max_weight_matching(4, path2), path2), 6);
    EXPECT_EQ(max_weight_matching(3, {}), (std::vector<int>{-1, -1, -1}));
}

TEST(matching, odd_cycle_blossom) {
    std::vector<WeightedEdge> e{{0, 1, 4}, {1, 2, 4}, {2, 0, 4}, {2, 3, 1}, {0, 4, 1}};
    EXPECT_EQ(matching_weight(max_weight_matching(5, e), e), 5);
}

TEST(matching, agrees_with_brute_force) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 3000; ++trial) {
        int n = 2 + rng() % 11;
        std::vector<WeightedEdge> edges;
        double p = (rng() % 100) / 100.0;
        int wmax = 1 + rng() % 20;
        for (int u = 0; u < n; ++u) {
            for (int v = u + 1; v < n; ++v) {
                if ((rng() % 1000) / 1000.0 < p) edges.push_back({u, v, static_cast<int64_t>(1 + rng() % wmax)});
            }
        }
        auto mate = max_weight_matching(n, edges);
        ASSERT_TRUE(is_matching(mate, edges)) << "trial " << trial;
        ASSERT_EQ(matching_weight(mate, edges), brute(n, edges)) << "trial " << trial;
    }
}
