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

#include <charconv>
#include <string>

#include <fmt/format.h>

#include "xebstats/errors.hpp"
#include "xebstats/io.hpp"
#include "xebstats/noise.hpp"

namespace xebstats {

std::string encode_sample_text(const Sample &sample) {
    const unsigned n = sample.n;
    std::string out = fmt::format("n={}\nN={}\n", n, sample.total());
    out.reserve(out.size() + sample.total() * (n + 1));
    for (std::uint32_t x : sample.indices) {
        for (unsigned b = n; b-- > 0;) {
            out.push_back(((x >> b) & 1u) ? '1' : '0');
        }
        out.push_back('\n');
    }
    return out;
}

Sample decode_sample_text(std::string_view text) {
    std::size_t line_no = 0;
    auto next_line = [&]() -> std::string_view {
        auto pos = text.find('\n');
        std::string_view line = text.substr(0, pos);
        text = pos == std::string_view::npos ? std::string_view{} : text.substr(pos + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        ++line_no;
        return line;
    };
    auto header = [&](std::string_view key) {
        std::string_view line = next_line();
        std::size_t value = 0;
        if (!line.starts_with(key) ||
            std::from_chars(line.data() + key.size(), line.data() + line.size(), value).ec != std::errc{}) {
            throw FormatError(fmt::format("sample line {}: expected '{}<int>'", line_no, key));
        }
        return value;
    };
    const std::size_t n = header("n=");
    const std::size_t N = header("N=");
    if (n < 1 || n > kMaxQubits) {
        throw DimensionError(fmt::format("sample declares n={}", n));
    }
    std::vector<std::uint32_t> indices;
    indices.reserve(N);
    while (!text.empty()) {
        std::string_view line = next_line();
        if (line.empty()) {
            continue;
        }
        if (line.size() != n) {
            throw FormatError(fmt::format("sample line {}: bitstring of length {}, expected {}", line_no, line.size(), n));
        }
        std::uint32_t x = 0;
        for (char c : line) {
            if (c != '0' && c != '1') {
                throw FormatError(fmt::format("sample line {}: invalid character '{}'", line_no, c));
            }
            x = (x << 1) | static_cast<std::uint32_t>(c == '1');
        }
        indices.push_back(x);
    }
    if (indices.size() != N) {
        throw FormatError(fmt::format("sample header says N={}, found {} bitstrings", N, indices.size()));
    }
    return make_sample(static_cast<unsigned>(n), std::move(indices));
}

void write_sample(const std::filesystem::path &path, const Sample &sample) {
    write_file_atomic(path, encode_sample_text(sample));
}

Sample read_sample(const std::filesystem::path &path) {
    try {
        return decode_sample_text(read_file_text(path));
    } catch (const FormatError &e) {
        std::string_view msg = e.what();
        msg.remove_prefix(std::string_view("FormatError: ").size());
        throw FormatError(fmt::format("'{}': {}", path.string(), msg));
    }
}

}  // namespace xebstats
