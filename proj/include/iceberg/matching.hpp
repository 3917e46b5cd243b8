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


#ifndef ICEBERG_MATCHING_HPP
#define ICEBERG_MATCHING_HPP

#include <cstdint>
#include <vector>

namespace iceberg {

struct WeightedEdge {
    int u = 0;
    int v = 0;
    int64_t w = 0;
};

// Maximum-weight (not necessarily perfect) matching on a general graph.
// Edges with non-positive weight are ignored; parallel edges keep the heaviest.
// Returns mate[v], or -1 for unmatched vertices.
std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge> &edges);

int64_t matching_weight(const std::vector<int> &mate, const std::vector<WeightedEdge> &edges);

}  // namespace iceberg

#endif  // ICEBERG_MATCHING_HPP
