// SPDX-License-Identifier: Apache-2.0
//
// gsmimo: link-level simulation of uplink multiuser GSM-MIMO
// Copyright (C) 2026 The gsmimo Authors
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

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "gsmimo/common.hpp"

namespace gsmimo {

using Rng = std::mt19937_64;

// Role tags separate the random streams used inside one trial so that,
// e.g., changing the detector never perturbs the channel or noise draws.
enum class StreamRole : std::uint64_t {
    channel = 1,
    bits = 2,
    noise = 3,
    pilot_noise = 4,
    misc = 5,
};

// Identifies one independent random stream. Streams are a pure function of
// the key, so trials can run in any order or on any worker.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    StreamRole role = StreamRole::misc;
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t stream_seed(const StreamKey& key);

Rng make_rng(const StreamKey& key);

inline Rng make_rng(std::uint64_t seed) { return make_rng(StreamKey{seed, 0, StreamRole::misc}); }

// Circularly-symmetric complex Gaussian sampler, E|z|^2 = variance.
// Keep one instance per stream: the underlying normal distribution caches
// its second variate.
class ComplexNormal {
  public:
    cplx operator()(Rng& rng, double variance)
    {
        const double scale = std::sqrt(0.5 * variance);
        const double re = normal_(rng);
        const double im = normal_(rng);
        return {scale * re, scale * im};
    }

  private:
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace gsmimo
