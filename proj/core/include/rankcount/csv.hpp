#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rankcount::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based file line of each row, for error messages.
  std::vector<std::size_t> line_numbers;
};

/// Parses comma-separated text. Double-quoted fields may contain commas and
/// doubled quotes. A trailing CR on a line is tolerated on read.
Table parse(std::string_view text);

/// Reads a file and checks that its header is exactly `expected_header`.
/// Throws IoError naming the path on any mismatch.
Table read_file(const std::filesystem::path& path,
                const std::vector<std::string>& expected_header);

/// Reads a file without header validation.
Table read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

/// Writes header and rows with LF line endings.
void write_file(const std::filesystem::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

double parse_double(std::string_view text);

long long parse_int(std::string_view text);

std::string read_text(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace rankcount::csv
