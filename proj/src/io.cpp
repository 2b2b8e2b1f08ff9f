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

#include "xebstats/io.hpp"

#include <atomic>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

#include <fmt/format.h>
#include <unistd.h>

#include "xebstats/errors.hpp"

namespace xebstats {

namespace {

std::filesystem::path temp_sibling(const std::filesystem::path &path) {
    static std::atomic<unsigned> counter{0};
    auto name = fmt::format(".{}.tmp.{}.{}", path.filename().string(), ::getpid(), counter.fetch_add(1));
    return path.parent_path() / name;
}

}  // namespace

void write_file_atomic(const std::filesystem::path &path, std::span<const unsigned char> data) {
    auto tmp = temp_sibling(path);
    std::FILE *f = std::fopen(tmp.c_str(), "wb");
    if (f == nullptr) {
        throw IoError(fmt::format("cannot open '{}' for writing: {}", path.string(), std::strerror(errno)));
    }
    bool ok = std::fwrite(data.data(), 1, data.size(), f) == data.size();
    ok = (std::fflush(f) == 0) && ok;
    ok = (std::fclose(f) == 0) && ok;
    if (!ok) {
        std::remove(tmp.c_str());
        throw IoError(fmt::format("failed writing '{}'", path.string()));
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw IoError(fmt::format("cannot move output into '{}': {}", path.string(), ec.message()));
    }
}

void write_file_atomic(const std::filesystem::path &path, std::string_view text) {
    write_file_atomic(path, std::span(reinterpret_cast<const unsigned char *>(text.data()), text.size()));
}

std::vector<unsigned char> read_file_bytes(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file_text(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace xebstats
