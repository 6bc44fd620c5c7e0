// Copyright 2026 the qbattery authors
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

#include <cstdint>
#include <string>
#include <vector>

namespace qb {

struct InvariantResult {
    std::string name;
    bool pass = false;
    std::string detail;  // worst deviation or failure reason
};

// Named invariant suites: Majorana algebra, Hermiticity, Bhatia-Davis,
// cumulant consistency, the on-site sandwich identity, closed-form charging
// oracles, correlation-matrix cross-check, and scaling self-checks.
std::vector<InvariantResult> run_verification(int n_max = 4, std::uint64_t seed = 1,
                                              int realizations = 50);

}  // namespace qb
