#include "riskfp/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <vector>

namespace riskfp {

namespace {

struct Field {
  std::string text;
  std::size_t column;  // 1-based
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<Field> split(const std::string& line, char sep) {
  std::vector<Field> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    const auto raw = std::string_view(line).substr(start, pos == std::string::npos
                                                              ? std::string::npos
                                                              : pos - start);
    const auto lead = raw.find_first_not_of(" \t");
    out.push_back({trim(raw), start + 1 + (lead == std::string_view::npos ? 0 : lead)});
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool blank(const std::string& line) { return trim(line).empty(); }

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column,
                       const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

ParsedMatrix parse_matrix_csv(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;
  ParsedMatrix result;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto fields = split(line, ',');
    std::vector<double> values;
    std::optional<Field> bad;
    for (const auto& f : fields) {
      if (auto v = to_number(f.text)) {
        values.push_back(*v);
      } else if (!bad) {
        bad = f;
      }
    }
    if (bad) {
      if (first && !bad->text.empty()) {
        result.header_skipped = true;
        first = false;
        continue;
      }
      throw ParseError(source, lineno, bad->column,
                       bad->text.empty() ? "empty field" : "not a number: '" + bad->text + "'");
    }
    first = false;
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw ParseError(source, lineno, 1,
                       "expected " + std::to_string(rows.front().size()) + " fields, found " +
                           std::to_string(values.size()));
    }
    rows.push_back(std::move(values));
    row_lines.push_back(lineno);
  }
  if (rows.empty()) throw ParseError(source, lineno + 1, 1, "no numeric rows");
  const auto n = rows.front().size();
  if (rows.size() != n) {
    throw ParseError(source, row_lines.back(), 1,
                     "matrix is not square: " + std::to_string(rows.size()) + " rows of " +
                         std::to_string(n) + " columns");
  }

  Matrix m(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  result.asymmetry = (m - m.transpose()).cwiseAbs().maxCoeff();
  result.matrix = 0.5 * (m + m.transpose());
  return result;
}

ParsedMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_matrix_csv(in, path.string());
}

Vector parse_number_list(std::string_view text, const std::string& source) {
  std::string normalized(text);
  for (char& c : normalized)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    const auto b = normalized.find_first_not_of(" ,", pos);
    if (b == std::string::npos) break;
    auto e = normalized.find_first_of(" ,", b);
    if (e == std::string::npos) e = normalized.size();
    const std::string tok = normalized.substr(b, e - b);
    const auto v = to_number(tok);
    if (!v) throw ParseError(source, 1, b + 1, "not a number: '" + tok + "'");
    values.push_back(*v);
    pos = e;
  }
  if (values.empty()) throw ParseError(source, 1, 1, "empty list");
  return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

Vector read_weights_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<std::pair<std::string, std::size_t>> lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    lines.emplace_back(line, lineno);
  }
  if (lines.empty()) throw ParseError(path.string(), lineno + 1, 1, "no weights");
  if (lines.size() == 1) return parse_number_list(lines.front().first, path.string());

  // A header naming a "weight" column selects that column.
  std::optional<std::size_t> column;
  std::size_t body = 0;
  {
    const auto head = split(lines.front().first, ',');
    if (!to_number(head.back().text)) {
      body = 1;
      for (std::size_t j = 0; j < head.size(); ++j)
        if (head[j].text == "weight") column = j;
    }
  }

  std::vector<double> values;
  for (std::size_t r = body; r < lines.size(); ++r) {
    const auto& [text, no] = lines[r];
    const auto fields = split(text, ',');
    const std::size_t j = column.value_or(fields.size() - 1);
    if (j >= fields.size()) {
      throw ParseError(path.string(), no, text.size() + 1,
                       "missing field " + std::to_string(j + 1));
    }
    const Field& f = fields[j];
    const auto v = to_number(f.text);
    if (!v) throw ParseError(path.string(), no, f.column, "not a number: '" + f.text + "'");
    values.push_back(*v);
  }
  if (values.empty()) throw ParseError(path.string(), lineno + 1, 1, "no weights");
  return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace riskfp
