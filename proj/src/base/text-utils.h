// base/text-utils.h

// Copyright 2026  The gemspoof Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef GEM_BASE_TEXT_UTILS_H_
#define GEM_BASE_TEXT_UTILS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gem {

std::string_view Trim(std::string_view s);
std::string ToLower(std::string_view s);

/// Splits on every occurrence of `delim`; empty fields are kept.
std::vector<std::string> SplitString(std::string_view s, char delim);

/// Whole-string parse; rejects trailing garbage, "nan", "inf" and empty input.
std::optional<double> ParseFiniteDouble(std::string_view s);
std::optional<std::int64_t> ParseInt(std::string_view s);
std::optional<std::uint64_t> ParseUint(std::string_view s);

/// printf-style %.{digits}g.  9 digits for data files, 17 for model files
/// (17 significant digits round-trip any double exactly).
std::string FormatReal(double x, int digits);

/// Reads a text file into lines, stripping a trailing '\r' from each.
std::vector<std::string> ReadLines(const std::filesystem::path &path);

std::string ReadFileToString(const std::filesystem::path &path);

/// Writes to "<path>.tmp" and renames over `path`, so a failed run never
/// leaves a torn output file.  Parent directories are created.
void WriteFileAtomic(const std::filesystem::path &path,
                     std::string_view contents);

std::uint64_t Fnv1a64(std::string_view data);

}  // namespace gem

#endif  // GEM_BASE_TEXT_UTILS_H_
