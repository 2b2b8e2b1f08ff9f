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

#include "xebstats/rng.hpp"

namespace xebstats {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

SeedSpec SeedSpec::purpose(std::uint64_t tag) const {
    return SeedSpec{splitmix64(base_seed ^ splitmix64(tag + 0x632BE59BD9B4E019ull)), stream_index};
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kPhiloxW0;
            k[1] += kPhiloxW1;
        }
        std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
        std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
        auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        auto lo0 = static_cast<std::uint32_t>(p0);
        auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        auto lo1 = static_cast<std::uint32_t>(p1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

CounterRng::CounterRng(SeedSpec seed)
    : key_{static_cast<std::uint32_t>(seed.base_seed), static_cast<std::uint32_t>(seed.base_seed >> 32)},
      stream_(seed.stream_index) {}

CounterRng::result_type CounterRng::operator()() {
    if (used_ == 2) {
        buffer_ = philox4x32_10(
            {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
             static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
            key_);
        ++block_;
        used_ = 0;
    }
    std::uint64_t r = static_cast<std::uint64_t>(buffer_[2 * used_]) |
                      (static_cast<std::uint64_t>(buffer_[2 * used_ + 1]) << 32);
    ++used_;
    return r;
}

CounterRng::result_type CounterRng::at(std::uint64_t index) const {
    std::uint64_t block = index >> 1;
    auto out = philox4x32_10(
        {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
         static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
        key_);
    int word = static_cast<int>(index & 1);
    return static_cast<std::uint64_t>(out[2 * word]) | (static_cast<std::uint64_t>(out[2 * word + 1]) << 32);
}

void CounterRng::seek(std::uint64_t index) {
    block_ = index >> 1;
    used_ = 2;
    if (index & 1) {
        (*this)();
    }
}

}  // namespace xebstats
