// Copyright 2026 The ffg Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace ffg {

// Lowercase hex SHA-256 of `bytes`, prefixed "sha256:".
std::string sha256_digest(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);

// 64-bit FNV-1a; stable across platforms, used to derive per-item seeds.
std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed = 0);

}  // namespace ffg
