#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace wmload {

// printf "%.6g": six significant digits, shortest of fixed/exponent form.
std::string format_number(double value);

// Quotes a field holding a comma, quote or newline.
std::string csv_field(std::string_view text);

// Reads a small numeric CSV with a header row. Every requested column must be
// present in the header; rows are returned column-major in request order.
// Throws IngestError (1-based line) on a malformed row.
std::vector<std::vector<double>> read_numeric_csv(std::istream& in,
                                                  const std::vector<std::string>& columns);

}  // namespace wmload
