/* Copyright 2026 The AGL Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef AGL_IO_HPP_
#define AGL_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace agl::io {

// Throws Error(kIo) when the file cannot be opened or read.
std::string ReadFile(const std::filesystem::path& path);

// Writes to a sibling temporary file, fsyncs it and renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view content);

// Non-blank lines with any trailing '\r' removed, paired with their 1-based
// line numbers.
struct Line {
  std::size_t number;
  std::string text;
};
std::vector<Line> ReadLines(const std::filesystem::path& path);
std::vector<Line> SplitLines(std::string_view text);

// RFC 4180 style rows: comma separated, double-quoted fields may contain
// commas and doubled quotes. Blank lines are skipped.
using CsvRow = std::vector<std::string>;
std::vector<CsvRow> ParseCsv(std::string_view text);
std::string CsvEscape(std::string_view field);

// Shortest decimal form that round-trips to the same double.
std::string FormatShortest(double value);
// Fixed-point with the given number of decimals.
std::string FormatFixed(double value, int decimals);

}  // namespace agl::io

#endif  // AGL_IO_HPP_
