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

#include "iceberg/qaoa.hpp"

#include <gtest/gtest.h>

using namespace iceberg;

namespace {

Distribution uniform(int k) {
    Distribution d;
    for (Bitstring x = 0; x < (Bitstring{1} << k); ++x) d[x] = 1.0 / (1 << k);
    return d;
}

}  // namespace

TEST(qaoa, known_max_cuts) {
    EXPECT_EQ(brute_force_optimum(petersen_graph()), 12.0);
    EXPECT_EQ(brute_force_optimum(cycle_graph(4)), 4.0);
    EXPECT_EQ(brute_force_optimum(cycle_graph(5)), 4.0);
    EXPECT_EQ(brute_force_optimum(complete_graph(4)), 4.0);
    EXPECT_EQ(brute_force_optimum(complete_graph(3)), 2.0);
}

TEST(qaoa, cut_of_alternating_string) {
    auto c4 = cycle_graph(4);
    EXPECT_EQ(cut_value(c4, 0b0101), 4.0);
    EXPECT_EQ(cut_value(c4, 0b0011), 2.0);
    EXPECT_EQ(energy(c4, 0b0101), -4.0);
    EXPECT_EQ(hamiltonian_value(c4, 0b0000), 4.0);
    EXPECT_EQ(hamiltonian_value(c4, 0b0101), -4.0);
}

TEST(qaoa, uniform_distribution_metrics) {
    auto c4 = cycle_graph(4);
    // Expected cut of a uniform string is |E|/2 = 2; f_max = 4.
    EXPECT_NEAR(approximation_ratio(uniform(4), c4), 0.5, 1e-12);
    EXPECT_NEAR(success_probability(uniform(4), c4), 2.0 / 16.0, 1e-12);
}

TEST(qaoa, regular_graph_generation) {
    for (int k : {4, 8, 10, 22}) {
        for (uint64_t seed : {1u, 2u, 3u}) {
            auto g = generate_instance(GraphKind::REGULAR_3, k, std::nullopt, seed);
            EXPECT_EQ(g.edges.size(), static_cast<size_t>(3 * k / 2));
            EXPECT_NO_THROW(g.validate());
            EXPECT_EQ(g, generate_instance(GraphKind::REGULAR_3, k, std::nullopt, seed));
        }
    }
    EXPECT_THROW(generate_instance(GraphKind::REGULAR_3, 5, std::nullopt, 1), GraphError);
}

TEST(qaoa, erdos_renyi_extremes) {
    EXPECT_EQ(generate_instance(GraphKind::ERDOS_RENYI, 10, 0.0, 7).edges.size(), 0u);
    EXPECT_EQ(generate_instance(GraphKind::ERDOS_RENYI, 10, 1.0, 7).edges.size(), 45u);
    auto g = generate_instance(GraphKind::ERDOS_RENYI, 22, 0.5, 7);
    EXPECT_GT(g.edges.size(), 80u);
    EXPECT_LT(g.edges.size(), 160u);
}

TEST(qaoa, rotation_counts) {
    auto g = generate_instance(GraphKind::REGULAR_3, 22, std::nullopt, 1);
    auto lc = build_qaoa(g, ramp_params(10));
    EXPECT_EQ(lc.count(RotationKind::ZZ), 330u);
    EXPECT_EQ(lc.count(RotationKind::X), 220u);
    EXPECT_EQ(lc.components.size(), 20u);
    EXPECT_EQ(lc.components[0].rotations[0].i, g.edges[0].u + 1);
}

TEST(qaoa, graph_and_params_round_trip) {
    auto g = generate_instance(GraphKind::ERDOS_RENYI, 12, 0.4, 99);
    g.edges[0].w = 2.5;
    EXPECT_EQ(read_graph(write_graph(g)), g);
    auto p = ramp_params(3);
    auto q = read_params(write_params(p));
    EXPECT_EQ(q.gammas, p.gammas);
    EXPECT_EQ(q.betas, p.betas);
    auto r = read_params("p 2\ngammas: [0.1, 0.2]\nbetas: [0.3, 0.4]\n");
    EXPECT_EQ(r.p, 2);
    EXPECT_EQ(r.betas[1], 0.4);
    EXPECT_THROW(read_params("p: 2\ngammas: [0.1]\nbetas: [0.3, 0.4]\n"), ParseError);
    EXPECT_THROW(read_graph("graph 3 1\nedge 0 0\n"), ParseError);
    EXPECT_THROW(read_graph("graph 3 2\nedge 0 1\n"), ParseError);
}
