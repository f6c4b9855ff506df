#pragma once

#include "riskfp/types.hpp"

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace riskfp {

/// Malformed input text; the message starts with "source:line:column:".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& what);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ParsedMatrix {
  Matrix matrix;            ///< already symmetrized as (M + M') / 2
  double asymmetry = 0.0;   ///< max |M_ij - M_ji| before symmetrizing
  bool header_skipped = false;
};

inline constexpr double kAsymmetryWarning = 1e-8;

/// N rows of N comma-separated numbers. A first row that does not parse as
/// numbers is treated as a header. Blank lines are ignored.
ParsedMatrix parse_matrix_csv(std::istream& in, const std::string& source);
ParsedMatrix read_matrix_csv(const std::filesystem::path& path);

/// "0.2, 0.3,0.5": numbers separated by commas and/or whitespace.
Vector parse_number_list(std::string_view text, const std::string& source = "<list>");

/// One weight per line, or a single comma-separated line. Lines starting with
/// '#' are comments. With several fields per line the weight is the column
/// headed "weight" if a header names one, the last field otherwise.
Vector read_weights_file(const std::filesystem::path& path);

}  // namespace riskfp
