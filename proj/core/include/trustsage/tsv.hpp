#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace trustsage::tsv {

/// Splits on `sep` without collapsing empty fields.
std::vector<std::string_view> split(std::string_view line, char sep = '\t');

/// Shortest text that parses back to the same double.
std::string format_double(double value);

/// Strict parse of the whole field; throws InputError mentioning `context`.
double parse_double(std::string_view field, const std::string& context);
long long parse_int(std::string_view field, const std::string& context);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

/// Calls `row(fields, line_number)` for every non-blank line that does not
/// start with '#'. Trailing '\r' is stripped.
void for_each_row(const std::filesystem::path& path, char sep,
                  const std::function<void(const std::vector<std::string_view>&,
                                           std::size_t)>& row);

}  // namespace trustsage::tsv
