// Copyright 2026 The xebstats Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace xebstats {

/// Identifies one reproducible random stream: a base seed plus a replicate index.
struct SeedSpec {
    std::uint64_t base_seed = 0;
    std::uint64_t stream_index = 0;

    /// Derives an independent stream for a different purpose (e.g. generation vs. sampling)
    /// while keeping the same replicate index.
    SeedSpec purpose(std::uint64_t tag) const;

    bool operator==(const SeedSpec &) const = default;
};

/// Philox4x32-10 block function. Maps (counter, key) to 128 random bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Counter-based generator over Philox4x32-10. The key comes from the base seed, the upper
/// half of the counter from the stream index, and the lower half counts 128-bit blocks, so
/// distinct stream indices never share a counter value.
///
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
   public:
    using result_type = std::uint64_t;

    explicit CounterRng(SeedSpec seed);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// The 64-bit word at absolute position `index` in this stream. Independent of the
    /// generator's current position.
    result_type at(std::uint64_t index) const;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1].
    double uniform_open_closed() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

    /// Repositions the generator at absolute word `index`.
    void seek(std::uint64_t index);

   private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 2;  // 64-bit words consumed from buffer_
};

}  // namespace xebstats
