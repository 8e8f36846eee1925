#ifndef MOMCOS_TABLES_HPP
#define MOMCOS_TABLES_HPP

// Reference tables stored as tab-separated text: '#' lines carry metadata
// ("# id: N", "# caption: ...", "# kind: ..."), the first other line holds the
// row-label header and column labels, and each further line holds a row label
// followed by cells. A cell is a decimal string as printed, "--" for a gap,
// optionally suffixed with "u" for an underlined (contested) value.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace momcos {

/// A decimal exactly as printed, e.g. "-5.73436e-10", "0.4178", "1.".
struct PrintedDecimal {
  bool negative = false;
  std::string integer_digits;
  bool has_point = false;
  std::string fraction_digits;
  std::optional<int> exponent;

  static PrintedDecimal parse(const std::string& text) {
    PrintedDecimal d;
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      d.negative = text[i] == '-';
      ++i;
    }
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      d.integer_digits += text[i++];
    }
    if (i < text.size() && text[i] == '.') {
      d.has_point = true;
      ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        d.fraction_digits += text[i++];
      }
    }
    if (d.integer_digits.empty() && d.fraction_digits.empty()) {
      throw std::invalid_argument("not a decimal: '" + text + "'");
    }
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
      ++i;
      std::size_t used = 0;
      const std::string rest = text.substr(i);
      int e = 0;
      try {
        e = std::stoi(rest, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad exponent in '" + text + "'");
      }
      if (used != rest.size()) {
        throw std::invalid_argument("trailing characters in '" + text + "'");
      }
      d.exponent = e;
      i = text.size();
    }
    if (i != text.size()) {
      throw std::invalid_argument("trailing characters in '" + text + "'");
    }
    return d;
  }

  std::string format() const {
    std::string s = negative ? "-" : "";
    s += integer_digits;
    if (has_point) {
      s += '.';
      s += fraction_digits;
    }
    if (exponent) {
      s += 'e' + std::to_string(*exponent);
    }
    return s;
  }

  double value() const { return std::strtod(format().c_str(), nullptr); }

  /// Place value of the last printed digit.
  double last_digit_unit() const {
    return std::pow(10.0, exponent.value_or(0) -
                              static_cast<int>(fraction_digits.size()));
  }

  /// Place value of the given significant digit (1-based) of the value.
  double significant_digit_unit(int digit) const {
    const double v = std::fabs(value());
    if (v == 0) {
      return last_digit_unit();
    }
    const int lead = static_cast<int>(std::floor(std::log10(v)));
    return std::pow(10.0, lead - (digit - 1));
  }
};

struct ReferenceCell {
  bool gap = false;
  bool underlined = false;
  std::string text;  // as stored, without the underline suffix
  PrintedDecimal decimal;
};

struct ReferenceTable {
  int id = 0;
  std::string caption;
  std::string kind;
  std::string row_header;
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  std::vector<std::vector<ReferenceCell>> cells;  // [row][column]

  std::size_t rows() const { return row_labels.size(); }
  std::size_t columns() const { return column_labels.size(); }
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, '\t')) {
    out.push_back(field);
  }
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline ReferenceCell parse_reference_cell(const std::string& raw) {
  ReferenceCell cell;
  std::string text = detail::trim(raw);
  if (text == "--") {
    cell.gap = true;
    cell.text = text;
    return cell;
  }
  if (!text.empty() && text.back() == 'u') {
    cell.underlined = true;
    text.pop_back();
  }
  cell.text = text;
  cell.decimal = PrintedDecimal::parse(text);
  return cell;
}

inline ReferenceTable parse_reference_table(std::istream& in,
                                            const std::string& source = "table") {
  ReferenceTable t;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (detail::trim(line).empty()) {
      continue;
    }
    if (line[0] == '#') {
      const std::string body = detail::trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon != std::string::npos) {
        const std::string key = detail::trim(body.substr(0, colon));
        const std::string val = detail::trim(body.substr(colon + 1));
        if (key == "id") {
          t.id = std::stoi(val);
        } else if (key == "caption") {
          t.caption = val;
        } else if (key == "kind") {
          t.kind = val;
        }
      }
      continue;
    }
    auto fields = detail::split_tabs(line);
    if (!header_seen) {
      if (fields.size() < 2) {
        throw std::runtime_error(source + ":" + std::to_string(line_no) +
                                 ": header needs at least one column");
      }
      t.row_header = detail::trim(fields[0]);
      for (std::size_t i = 1; i < fields.size(); ++i) {
        t.column_labels.push_back(detail::trim(fields[i]));
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != t.column_labels.size() + 1) {
      throw std::runtime_error(source + ":" + std::to_string(line_no) +
                               ": expected " +
                               std::to_string(t.column_labels.size() + 1) +
                               " fields, got " + std::to_string(fields.size()));
    }
    t.row_labels.push_back(detail::trim(fields[0]));
    std::vector<ReferenceCell> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      try {
        row.push_back(parse_reference_cell(fields[i]));
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error(source + ":" + std::to_string(line_no) + ": " +
                                 e.what());
      }
    }
    t.cells.push_back(std::move(row));
  }
  if (!header_seen) {
    throw std::runtime_error(source + ": no header row");
  }
  if (t.id != 8 && t.id != 9) {
    for (const auto& row : t.cells) {
      for (const auto& c : row) {
        if (c.underlined) {
          throw std::runtime_error(source +
                                   ": underline flags only valid in tables 8 and 9");
        }
      }
    }
  }
  return t;
}

inline std::string table_path(const std::string& data_dir, int id) {
  return data_dir + "/table" + std::to_string(id) + ".tsv";
}

inline ReferenceTable load_reference_table(const std::string& data_dir, int id) {
  if (id < 1 || id > 9) {
    throw std::out_of_range("table id must be in 1..9, got " + std::to_string(id));
  }
  const std::string path = table_path(data_dir, id);
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open reference table " + path);
  }
  ReferenceTable t = parse_reference_table(in, path);
  if (t.id != id) {
    throw std::runtime_error(path + ": id mismatch");
  }
  return t;
}

#ifdef MOMCOS_DEFAULT_DATA_DIR
inline constexpr const char* kDefaultDataDir = MOMCOS_DEFAULT_DATA_DIR;
#else
inline constexpr const char* kDefaultDataDir = "data/tables";
#endif

}  // namespace momcos

#endif  // MOMCOS_TABLES_HPP
