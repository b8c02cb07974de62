#include "trustsage/tsv.hpp"

#include <charconv>
#include <cmath>

#include "trustsage/error.hpp"

namespace trustsage::tsv {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

double parse_double(std::string_view field, const std::string& context) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty() ||
      !std::isfinite(value)) {
    throw InputError(context + ": cannot parse number '" + std::string(field) + "'");
  }
  return value;
}

long long parse_int(std::string_view field, const std::string& context) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw InputError(context + ": cannot parse integer '" + std::string(field) + "'");
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  return out;
}

void for_each_row(const std::filesystem::path& path, char sep,
                  const std::function<void(const std::vector<std::string_view>&,
                                           std::size_t)>& row) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;
    row(split(view, sep), line_number);
  }
  if (in.bad()) throw InputError("read failure on " + path.string());
}

}  // namespace trustsage::tsv
