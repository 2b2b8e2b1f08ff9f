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

#include "xebstats/serialize.hpp"

#include <fmt/format.h>

#include "xebstats/errors.hpp"

namespace xebstats {

using nlohmann::json;

json to_json(const Estimate &e, const EstimateContext &ctx) {
    json j;
    j["method"] = std::string(method_name(e.method));
    const std::size_t k = e.value.size();
    if (k == 1) {
        j["value"] = e.value[0];
    } else {
        j["values"] = e.value;
    }
    if (e.variance.empty()) {
        j["variance"] = nullptr;
    } else if (k == 1) {
        j["variance"] = e.variance[0];
    } else {
        json rows = json::array();
        for (std::size_t r = 0; r < k; ++r) {
            rows.push_back(std::vector<double>(e.variance.begin() + r * k, e.variance.begin() + (r + 1) * k));
        }
        j["variance"] = rows;
    }
    j["iterations"] = e.iterations ? json(*e.iterations) : json(nullptr);
    j["n"] = ctx.n;
    j["N"] = ctx.N;
    j["seed"] = ctx.seed ? json(*ctx.seed) : json(nullptr);
    if (!e.provenance.empty()) {
        j["provenance"] = e.provenance;
    }
    for (const auto &[key, value] : e.aux) {
        j[key] = value;
    }
    return j;
}

json to_json(const ChiSquareResult &r) {
    return {{"statistic", r.statistic}, {"df", r.df},           {"cells", r.cells},
            {"cells_merged", r.cells_merged}, {"p_value", r.p_value}, {"log_p_value", r.log_p_value}};
}

json to_json(const ConfidenceInterval &ci) {
    return {{"center", ci.center}, {"half_width", ci.half_width}, {"level", ci.level},
            {"kind", std::string(ci_kind_name(ci.kind))}, {"lower", ci.lower()}, {"upper", ci.upper()}};
}

json to_json(const VarianceReport &r) {
    json inputs = {{"phi", r.phi}, {"M", r.M}, {"N", r.N}};
    if (r.w2) {
        inputs["w2"] = *r.w2;
    }
    if (r.w3) {
        inputs["w3"] = *r.w3;
    }
    return {{"method", std::string(method_name(r.method))},
            {"conditional", r.conditional ? json(*r.conditional) : json(nullptr)},
            {"unconditional", r.unconditional ? json(*r.unconditional) : json(nullptr)},
            {"inputs", inputs}};
}

json to_json(const HistogramSpec &h) {
    return {{"bins", h.bins},
            {"scale", h.scale == HistogramScale::Z ? "z" : "w"},
            {"range", {0.0, h.t_max}},
            {"edges", h.edges},
            {"counts", h.counts},
            {"overlay", h.overlay},
            {"density", h.density}};
}

std::string histogram_csv(const HistogramSpec &h) {
    std::string out = "bin_center,count,overlay\n";
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
        out += fmt::format("{:.10g},{},{:.10g}\n", (h.edges[k] + h.edges[k + 1]) / 2, h.counts[k], h.overlay[k]);
    }
    return out;
}

std::string scatter_csv(std::span<const FreqPoint> points) {
    std::string out = "index,expected,observed\n";
    for (const auto &p : points) {
        out += fmt::format("{},{:.10g},{}\n", p.index, p.expected, p.observed);
    }
    return out;
}

CircuitErrorProfile profile_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw UsageError(fmt::format("malformed profile JSON: {}", e.what()));
    }
    if (!j.is_object()) {
        throw UsageError("profile JSON must be an object");
    }
    CircuitErrorProfile p;
    auto read_list = [&j](const char *key, std::vector<double> &out) {
        if (!j.contains(key)) {
            return;
        }
        const auto &v = j.at(key);
        if (!v.is_array()) {
            throw UsageError(fmt::format("profile field '{}' must be an array of numbers", key));
        }
        for (const auto &x : v) {
            if (!x.is_number()) {
                throw UsageError(fmt::format("profile field '{}' contains a non-number", key));
            }
            out.push_back(x.get<double>());
        }
    };
    read_list("e_g1", p.e_g1);
    read_list("e_g2", p.e_g2);
    read_list("e_q", p.e_q);
    for (const auto &[key, value] : j.items()) {
        if (key != "e_g1" && key != "e_g2" && key != "e_q") {
            throw UsageError(fmt::format("unknown profile field '{}'", key));
        }
    }
    return p;
}

}  // namespace xebstats
