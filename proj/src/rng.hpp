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

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qb {

// splitmix64 finalizer; used both as a stream generator and as the seed
// mixing function of the ensemble module.
inline std::uint64_t splitmix64_step(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based disorder stream. Deliberately avoids std::*_distribution so
// that draws are identical on every platform and standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // Warm up so that nearby seeds decorrelate.
        splitmix64_step(state_);
        splitmix64_step(state_);
    }

    std::uint64_t next_u64() { return splitmix64_step(state_); }

    // Uniform in (0, 1].
    double uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() <= p; }

    // Standard normal via Box-Muller; stateless between calls (the second
    // Box-Muller variate is discarded to keep the draw count predictable).
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::uint64_t state_;
};

}  // namespace qb
