// CSV output helpers.  Numbers are always formatted with 17 significant
// digits so identical runs produce byte-identical files.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace omsq {

// shortest-round-trip-free, fixed formatting: %.17g
std::string format_double(double v);

// RFC-4180: quote fields containing comma, quote or newline; double quotes.
std::string csv_escape(const std::string& field);

std::string csv_row(const std::vector<std::string>& fields);

// nullopt -> empty field
std::string csv_row_values(const std::vector<std::optional<double>>& values);

} // namespace omsq
