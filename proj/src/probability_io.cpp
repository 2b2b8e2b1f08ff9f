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

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <string>

#include <fmt/format.h>

#include "xebstats/errors.hpp"
#include "xebstats/io.hpp"
#include "xebstats/probmodel.hpp"

namespace xebstats {

namespace {

constexpr unsigned char kMagic[4] = {'P', 'T', 'P', 'V'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kHeaderSize = 8;

static_assert(std::endian::native == std::endian::little, "binary probability files assume a little-endian host");

void put_u16(unsigned char *p, std::uint16_t v) {
    p[0] = static_cast<unsigned char>(v & 0xff);
    p[1] = static_cast<unsigned char>(v >> 8);
}

std::uint16_t get_u16(const unsigned char *p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

}  // namespace

std::vector<unsigned char> encode_probabilities_binary(const ProbabilityVector &pv) {
    auto w = pv.weights();
    std::vector<unsigned char> out(kHeaderSize + w.size() * sizeof(double));
    std::memcpy(out.data(), kMagic, 4);
    put_u16(out.data() + 4, kVersion);
    put_u16(out.data() + 6, static_cast<std::uint16_t>(pv.n()));
    std::memcpy(out.data() + kHeaderSize, w.data(), w.size() * sizeof(double));
    return out;
}

ProbabilityVector decode_probabilities_binary(std::span<const unsigned char> bytes) {
    if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw FormatError("missing PTPV header");
    }
    std::uint16_t version = get_u16(bytes.data() + 4);
    if (version != kVersion) {
        throw FormatError(fmt::format("unsupported PTPV version {}", version));
    }
    unsigned n = get_u16(bytes.data() + 6);
    if (n < 1 || n > kMaxQubits) {
        throw DimensionError(fmt::format("PTPV header declares n={}", n));
    }
    std::size_t M = std::size_t{1} << n;
    if (bytes.size() != kHeaderSize + M * sizeof(double)) {
        throw FormatError(fmt::format("PTPV payload has {} bytes, expected {} for n={}", bytes.size() - kHeaderSize,
                                      M * sizeof(double), n));
    }
    std::vector<double> w(M);
    std::memcpy(w.data(), bytes.data() + kHeaderSize, M * sizeof(double));
    return ProbabilityVector(n, std::move(w));
}

void write_probabilities_binary(const std::filesystem::path &path, const ProbabilityVector &pv) {
    write_file_atomic(path, encode_probabilities_binary(pv));
}

void write_probabilities_text(const std::filesystem::path &path, const ProbabilityVector &pv) {
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "n={}\n", pv.n());
    for (double w : pv.weights()) {
        fmt::format_to(std::back_inserter(buf), "{:.17g}\n", w);
    }
    write_file_atomic(path, std::string_view(buf.data(), buf.size()));
}

ProbabilityVector read_probabilities(const std::filesystem::path &path) {
    auto bytes = read_file_bytes(path);
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) {
        return decode_probabilities_binary(bytes);
    }
    std::string_view text(reinterpret_cast<const char *>(bytes.data()), bytes.size());
    auto next_line = [&text]() -> std::string_view {
        auto pos = text.find('\n');
        std::string_view line = text.substr(0, pos);
        text = pos == std::string_view::npos ? std::string_view{} : text.substr(pos + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        return line;
    };
    std::string_view header = next_line();
    unsigned n = 0;
    if (!header.starts_with("n=") ||
        std::from_chars(header.data() + 2, header.data() + header.size(), n).ec != std::errc{}) {
        throw FormatError(fmt::format("'{}': expected PTPV binary or a text file starting with n=<int>", path.string()));
    }
    if (n < 1 || n > kMaxQubits) {
        throw DimensionError(fmt::format("'{}' declares n={}", path.string(), n));
    }
    std::vector<double> w;
    w.reserve(std::size_t{1} << n);
    std::size_t line_no = 1;
    while (!text.empty()) {
        std::string_view line = next_line();
        ++line_no;
        if (line.empty()) {
            continue;
        }
        double x = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), x);
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            throw FormatError(fmt::format("'{}' line {}: cannot parse '{}'", path.string(), line_no, line));
        }
        w.push_back(x);
    }
    return ProbabilityVector(n, std::move(w));
}

}  // namespace xebstats
