/*
   Copyright 2026 The cpa Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <filesystem>

#include "cpa/translator.hpp"

namespace cpa {

/// Binary f0 table, little-endian:
///
///   "CPA1"  u32 version
///   u8 partition kind, u32 n, per dimension: u32 k, f64[k] breakpoints
///   i32 U.lo U.hi V.lo V.hi, f64 tau, u64 seed
///   u8 sampling mode, u32 c, u64[c] per-site counts, u64 joint count
///   u32 len + bytes model name, u64 image values, u64 clamped values
///   u64 |E|, u64 preimage count, u64 explored rows
///   per explored row: u64 preimage, u32 k, k x (u64 image, f64 probability)
///   u32 CRC-32 of all preceding bytes
void save_f0_binary(const LocalFunction& f0, const std::filesystem::path& path);

/// JSON form of the same fields; "checksum" is the CRC-32 of the compact
/// dump of the document without that key.
void save_f0_json(const LocalFunction& f0, const std::filesystem::path& path);

/// Picks the binary or JSON writer from the extension (".json" means JSON).
void save_f0(const LocalFunction& f0, const std::filesystem::path& path);

/// Reads either format, detected from the leading bytes. When `expected` is
/// given, a table built on another partition is rejected with FormatError.
/// Throws IoError when the file cannot be read.
LocalFunction load_f0(const std::filesystem::path& path, const Partition* expected = nullptr);

}  // namespace cpa
