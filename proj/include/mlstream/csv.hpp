#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mls {

/// Fixed output format for every real written by the library: 12
/// significant digits, "%.12g".
std::string format_number(double x);

/// Splits one CSV record on `delim`, honouring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line, char delim = ',');

/// Splits on runs of blanks (spaces and tabs).
std::vector<std::string> split_whitespace(std::string_view line);

std::string_view trim(std::string_view s);

/// Writes through a temporary file in the same directory, then renames it
/// over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer);

std::string read_file(const std::filesystem::path& path);

}  // namespace mls
