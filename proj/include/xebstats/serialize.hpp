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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "xebstats/estimators.hpp"
#include "xebstats/gof.hpp"
#include "xebstats/prediction.hpp"
#include "xebstats/uncertainty.hpp"

namespace xebstats {

/// Run context recorded with every estimate.
struct EstimateContext {
    unsigned n = 0;
    std::uint64_t N = 0;
    std::optional<std::uint64_t> seed;
};

/// {method, value | values, variance, iterations, n, N, seed, provenance, ...aux}.
nlohmann::json to_json(const Estimate &e, const EstimateContext &ctx);
nlohmann::json to_json(const ChiSquareResult &r);
nlohmann::json to_json(const ConfidenceInterval &ci);
nlohmann::json to_json(const VarianceReport &r);
nlohmann::json to_json(const HistogramSpec &h);

/// Columns: bin_center,count,overlay.
std::string histogram_csv(const HistogramSpec &h);
/// Columns: index,expected,observed.
std::string scatter_csv(std::span<const FreqPoint> points);

/// Parses {"e_g1": [...], "e_g2": [...], "e_q": [...]}; missing lists are empty. Throws UsageError
/// on malformed input.
CircuitErrorProfile profile_from_json(std::string_view text);

}  // namespace xebstats
