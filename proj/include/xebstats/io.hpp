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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xebstats {

/// Writes `data` to a temporary file beside `path` and renames it into place, so readers never
/// observe a partially written file. Errors raise IoError naming the path.
void write_file_atomic(const std::filesystem::path &path, std::span<const unsigned char> data);
void write_file_atomic(const std::filesystem::path &path, std::string_view text);

std::vector<unsigned char> read_file_bytes(const std::filesystem::path &path);
std::string read_file_text(const std::filesystem::path &path);

}  // namespace xebstats
