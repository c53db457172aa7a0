#include "recmle/csv.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "recmle/error.hpp"
#include "recmle/format.hpp"

namespace recmle {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  if (text.empty()) {
    return std::nullopt;
  }
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return v;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    lines.push_back(line);
    start = end + 1;
  }
  // Tolerate trailing blank lines only.
  while (!lines.empty() && lines.back().empty()) {
    lines.pop_back();
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string to_csv(const IndexedValues& rows) {
  std::string out = "index,value\n";
  for (std::size_t i = 0; i < rows.value.size(); ++i) {
    out += std::to_string(rows.index[i]);
    out += ',';
    out += format_double(rows.value[i]);
    out += '\n';
  }
  return out;
}

std::string to_csv(const Sample& sample) {
  IndexedValues rows;
  rows.value = sample.values;
  rows.index.resize(sample.values.size());
  for (std::size_t i = 0; i < rows.index.size(); ++i) {
    rows.index[i] = i;
  }
  return to_csv(rows);
}

std::string to_csv(const RecordSequence& records) {
  return to_csv(IndexedValues{records.indices, records.values});
}

IndexedValues parse_index_value_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines.front() != "index,value") {
    throw ArgumentError("csv: expected header 'index,value'");
  }
  IndexedValues out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != 2) {
      throw ArgumentError("csv: line " + std::to_string(i + 1) + " does not have two fields");
    }
    std::size_t idx = 0;
    const auto res = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), idx);
    const auto v = parse_double(fields[1]);
    if (res.ec != std::errc() || res.ptr != fields[0].data() + fields[0].size() || !v) {
      throw ArgumentError("csv: malformed row on line " + std::to_string(i + 1));
    }
    out.index.push_back(idx);
    out.value.push_back(*v);
  }
  return out;
}

std::vector<double> parse_value_column(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw ArgumentError("csv: input is empty");
  }
  const auto header = split_fields(lines.front());
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "value") {
      col = i;
    }
  }
  if (col == header.size()) {
    throw ArgumentError("csv: header has no 'value' column");
  }
  std::vector<double> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != header.size()) {
      throw ArgumentError("csv: line " + std::to_string(i + 1) + " has " +
                          std::to_string(fields.size()) + " fields, expected " +
                          std::to_string(header.size()));
    }
    const auto v = parse_double(fields[col]);
    if (!v) {
      throw ArgumentError("csv: non-numeric value on line " + std::to_string(i + 1));
    }
    out.push_back(*v);
  }
  return out;
}

}  // namespace recmle
