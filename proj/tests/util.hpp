// Copyright 2026 The bsap Authors
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
#pragma once

// Conversions between library states and Eigen vectors for the tests.

#include <vector>

#include "bsap/statevector.hpp"
#include "oracles.hpp"

namespace bsap::testing {

inline oracle::Vec to_vec(const StateVector &s) {
    oracle::Vec v(static_cast<Eigen::Index>(s.dimension()));
    for (Index i = 0; i < s.dimension(); ++i) v[static_cast<Eigen::Index>(i)] = s[i];
    return v;
}

inline StateVector from_vec(int L, const oracle::Vec &v) {
    return {L, std::vector<cplx>(v.data(), v.data() + v.size())};
}

inline StateVector random_state(int L, std::mt19937_64 &rng) {
    return from_vec(L, oracle::random_state(Eigen::Index{1} << L, rng));
}

} // namespace bsap::testing
