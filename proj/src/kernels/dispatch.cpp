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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "xebstats/kernels.hpp"

namespace xebstats::kernels {

#if defined(XEBSTATS_HAVE_AVX2_KERNELS)
namespace detail {
const KernelTable &avx2_table_impl();
}
#endif

const KernelTable *avx2_table() {
#if defined(XEBSTATS_HAVE_AVX2_KERNELS)
    static const bool supported = __builtin_cpu_supports("avx2");
    if (supported) {
        return &detail::avx2_table_impl();
    }
#endif
    return nullptr;
}

namespace {

const KernelTable *select_default() {
    const char *env = std::getenv("XEBSTATS_SIMD");
    std::string_view choice = env ? env : "";
    if (choice == "scalar") {
        return &scalar_table();
    }
    if (const KernelTable *t = avx2_table()) {
        return t;
    }
    return &scalar_table();
}

std::atomic<const KernelTable *> &slot() {
    static std::atomic<const KernelTable *> current{select_default()};
    return current;
}

}  // namespace

const KernelTable &active() { return *slot().load(std::memory_order_acquire); }

void set_active(const KernelTable &table) { slot().store(&table, std::memory_order_release); }

}  // namespace xebstats::kernels
