#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recmle/records.hpp"

namespace recmle {

// Samples and record sequences serialize as
//   index,value\n
//   0,1.25\n ...
// with shortest round-trip decimals and LF line endings.
struct IndexedValues {
  std::vector<std::size_t> index;
  std::vector<double> value;
};

std::string to_csv(const Sample& sample);
std::string to_csv(const RecordSequence& records);
std::string to_csv(const IndexedValues& rows);

// Parses an index,value table. Throws ArgumentError on malformed rows.
IndexedValues parse_index_value_csv(std::string_view text);

// Reads the `value` column of any CSV with a header row containing it.
std::vector<double> parse_value_column(std::string_view text);

}  // namespace recmle
