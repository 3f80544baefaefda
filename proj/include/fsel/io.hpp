#pragma once

// File ingestion and serialization: flat ARFF subset (@relation, @attribute
// numeric/nominal, @data, '?' missing) and RFC-4180-style CSV with header row.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsel/dataset.hpp"

namespace fsel {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class FileFormat { Auto, Arff, Csv };

struct LoadOptions {
  // Class column by name; empty selects the last column.
  std::string class_column;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline bool parse_number(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

inline std::string format_number(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

// Splits an ARFF token list, honoring single-quoted tokens.
inline std::vector<std::string> split_arff_row(const std::string& line,
                                               const std::string& source,
                                               std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '\\' && i + 1 < line.size()) {
        cur += line[++i];
      } else if (c == '\'') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '\'') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError(source, lineno, "unterminated quote");
  out.push_back(trim(cur));
  return out;
}

inline std::string quote_arff(const std::string& s) {
  if (s.find_first_of(" ,'{}%\t") == std::string::npos && !s.empty()) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

inline std::vector<std::string> split_csv_row(const std::string& line,
                                              const std::string& source,
                                              std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw ParseError(source, lineno, "unterminated quote");
  out.push_back(cur);
  return out;
}

inline std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline int find_class_index(const std::vector<std::string>& names,
                            const LoadOptions& options, const std::string& source) {
  if (options.class_column.empty()) return static_cast<int>(names.size()) - 1;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == options.class_column) return static_cast<int>(i);
  throw std::runtime_error(source + ": class column '" + options.class_column +
                           "' not found");
}

}  // namespace detail

inline Dataset load_arff(std::istream& in, const LoadOptions& options = {},
                         const std::string& source = "<arff>") {
  using namespace detail;
  std::string relation = "dataset";
  std::vector<FeatureInfo> attrs;
  std::vector<std::string> raw_lines;
  std::string line;
  std::size_t lineno = 0;
  bool in_data = false;
  std::vector<std::size_t> data_linenos;

  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    if (!in_data) {
      std::string low = lower(t);
      if (low.rfind("@relation", 0) == 0) {
        relation = trim(t.substr(9));
        if (relation.size() >= 2 && relation.front() == '\'' && relation.back() == '\'')
          relation = relation.substr(1, relation.size() - 2);
        if (relation.empty()) relation = "dataset";
      } else if (low.rfind("@attribute", 0) == 0) {
        std::string rest = trim(t.substr(10));
        std::string name;
        std::size_t pos = 0;
        if (!rest.empty() && rest[0] == '\'') {
          std::size_t end = rest.find('\'', 1);
          if (end == std::string::npos)
            throw ParseError(source, lineno, "unterminated attribute name quote");
          name = rest.substr(1, end - 1);
          pos = end + 1;
        } else {
          pos = rest.find_first_of(" \t");
          if (pos == std::string::npos)
            throw ParseError(source, lineno, "attribute declaration without a type");
          name = rest.substr(0, pos);
        }
        std::string type = trim(rest.substr(pos));
        FeatureInfo info;
        info.name = name;
        std::string typelow = lower(type);
        if (typelow == "numeric" || typelow == "real" || typelow == "integer") {
          info.kind = FeatureKind::Numeric;
        } else if (!type.empty() && type.front() == '{' && type.back() == '}') {
          info.kind = FeatureKind::Nominal;
          info.values = split_arff_row(type.substr(1, type.size() - 2), source, lineno);
          if (info.values.empty() || (info.values.size() == 1 && info.values[0].empty()))
            throw ParseError(source, lineno, "empty nominal value list");
        } else {
          throw ParseError(source, lineno, "unsupported attribute type: " + type);
        }
        attrs.push_back(std::move(info));
      } else if (low.rfind("@data", 0) == 0) {
        if (attrs.empty()) throw ParseError(source, lineno, "@data before any @attribute");
        in_data = true;
      } else {
        throw ParseError(source, lineno, "unrecognized header line: " + t);
      }
    } else {
      if (!t.empty() && t.front() == '{')
        throw ParseError(source, lineno, "sparse ARFF rows are not supported");
      raw_lines.push_back(t);
      data_linenos.push_back(lineno);
    }
  }
  if (!in_data) throw std::runtime_error(source + ": missing @data section");

  std::vector<std::string> names;
  names.reserve(attrs.size());
  for (const auto& a : attrs) names.push_back(a.name);
  const int class_idx = find_class_index(names, options, source);
  if (attrs[static_cast<std::size_t>(class_idx)].kind != FeatureKind::Nominal)
    throw std::runtime_error(source + ": class attribute '" +
                             attrs[static_cast<std::size_t>(class_idx)].name +
                             "' must be nominal");

  FeatureSchema schema;
  schema.class_name = attrs[static_cast<std::size_t>(class_idx)].name;
  schema.class_values = attrs[static_cast<std::size_t>(class_idx)].values;
  for (int i = 0; i < static_cast<int>(attrs.size()); ++i)
    if (i != class_idx) schema.features.push_back(attrs[static_cast<std::size_t>(i)]);

  std::vector<Instance> rows;
  rows.reserve(raw_lines.size());
  for (std::size_t r = 0; r < raw_lines.size(); ++r) {
    auto cells = split_arff_row(raw_lines[r], source, data_linenos[r]);
    if (cells.size() != attrs.size())
      throw ParseError(source, data_linenos[r],
                       "row has " + std::to_string(cells.size()) + " values, expected " +
                           std::to_string(attrs.size()));
    Instance inst;
    inst.values.reserve(attrs.size() - 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const FeatureInfo& a = attrs[c];
      const std::string& cell = cells[c];
      double v;
      if (cell == "?") {
        if (static_cast<int>(c) == class_idx)
          throw ParseError(source, data_linenos[r], "missing class label");
        v = missing_value();
      } else if (a.kind == FeatureKind::Numeric) {
        if (!parse_number(cell, v))
          throw ParseError(source, data_linenos[r],
                           "cannot parse numeric value '" + cell + "' for " + a.name);
      } else {
        auto it = std::find(a.values.begin(), a.values.end(), cell);
        if (it == a.values.end())
          throw ParseError(source, data_linenos[r],
                           "unknown nominal value '" + cell + "' for " + a.name);
        v = static_cast<double>(it - a.values.begin());
      }
      if (static_cast<int>(c) == class_idx)
        inst.class_label = static_cast<int>(v);
      else
        inst.values.push_back(v);
    }
    rows.push_back(std::move(inst));
  }
  return Dataset(std::move(schema), std::move(rows), relation);
}

inline Dataset load_csv(std::istream& in, const LoadOptions& options = {},
                        const std::string& source = "<csv>") {
  using namespace detail;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw std::runtime_error(source + ": empty file");
  ++lineno;
  auto header = split_csv_row(line, source, lineno);
  for (auto& h : header) h = trim(h);
  if (header.empty() || (header.size() == 1 && header[0].empty()))
    throw ParseError(source, lineno, "empty header row");

  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> linenos;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto row = split_csv_row(line, source, lineno);
    if (row.size() != header.size())
      throw ParseError(source, lineno,
                       "row has " + std::to_string(row.size()) + " values, expected " +
                           std::to_string(header.size()));
    cells.push_back(std::move(row));
    linenos.push_back(lineno);
  }

  const int class_idx = find_class_index(header, options, source);
  const std::size_t ncols = header.size();

  // Column type sniffing: numeric when every non-empty cell parses as a
  // number; otherwise nominal with values in first-appearance order. The
  // class column is always nominal.
  std::vector<FeatureInfo> cols(ncols);
  for (std::size_t c = 0; c < ncols; ++c) {
    cols[c].name = header[c];
    bool numeric = static_cast<int>(c) != class_idx;
    if (numeric) {
      for (const auto& row : cells) {
        const std::string cell = trim(row[c]);
        double v;
        if (!cell.empty() && !parse_number(cell, v)) {
          numeric = false;
          break;
        }
      }
    }
    if (numeric) {
      cols[c].kind = FeatureKind::Numeric;
    } else {
      cols[c].kind = FeatureKind::Nominal;
      for (const auto& row : cells) {
        const std::string cell = trim(row[c]);
        if (cell.empty()) continue;
        if (std::find(cols[c].values.begin(), cols[c].values.end(), cell) ==
            cols[c].values.end())
          cols[c].values.push_back(cell);
      }
      if (cols[c].values.empty())
        throw std::runtime_error(source + ": column '" + header[c] +
                                 "' has no usable values");
    }
  }

  FeatureSchema schema;
  schema.class_name = cols[static_cast<std::size_t>(class_idx)].name;
  schema.class_values = cols[static_cast<std::size_t>(class_idx)].values;
  for (std::size_t c = 0; c < ncols; ++c)
    if (static_cast<int>(c) != class_idx) schema.features.push_back(cols[c]);

  std::vector<Instance> rows;
  rows.reserve(cells.size());
  for (std::size_t r = 0; r < cells.size(); ++r) {
    Instance inst;
    inst.values.reserve(ncols - 1);
    for (std::size_t c = 0; c < ncols; ++c) {
      const std::string cell = trim(cells[r][c]);
      double v;
      if (cell.empty()) {
        if (static_cast<int>(c) == class_idx)
          throw ParseError(source, linenos[r], "missing class label");
        v = missing_value();
      } else if (cols[c].kind == FeatureKind::Numeric) {
        if (!parse_number(cell, v))
          throw ParseError(source, linenos[r],
                           "cannot parse numeric value '" + cell + "'");
      } else {
        auto it = std::find(cols[c].values.begin(), cols[c].values.end(), cell);
        v = static_cast<double>(it - cols[c].values.begin());
      }
      if (static_cast<int>(c) == class_idx)
        inst.class_label = static_cast<int>(v);
      else
        inst.values.push_back(v);
    }
    rows.push_back(std::move(inst));
  }
  return Dataset(std::move(schema), std::move(rows), "dataset");
}

inline Dataset load_dataset(const std::string& path, FileFormat format = FileFormat::Auto,
                            const LoadOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  if (format == FileFormat::Auto) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : detail::lower(path.substr(dot + 1));
    format = ext == "csv" ? FileFormat::Csv : FileFormat::Arff;
  }
  return format == FileFormat::Arff ? load_arff(in, options, path)
                                    : load_csv(in, options, path);
}

// ARFF serialization; the class attribute is written last so a default-option
// reload reproduces the dataset exactly.
inline void save_arff(const Dataset& d, std::ostream& out) {
  using namespace detail;
  out << "@relation " << quote_arff(d.name()) << "\n\n";
  auto write_attr = [&out](const FeatureInfo& f) {
    out << "@attribute " << quote_arff(f.name) << " ";
    if (f.kind == FeatureKind::Numeric) {
      out << "numeric\n";
    } else {
      out << "{";
      for (std::size_t v = 0; v < f.values.size(); ++v) {
        if (v) out << ",";
        out << quote_arff(f.values[v]);
      }
      out << "}\n";
    }
  };
  for (const auto& f : d.schema().features) write_attr(f);
  FeatureInfo cls;
  cls.name = d.schema().class_name;
  cls.kind = FeatureKind::Nominal;
  cls.values = d.schema().class_values;
  write_attr(cls);
  out << "\n@data\n";
  for (const auto& inst : d.instances()) {
    for (std::size_t f = 0; f < inst.values.size(); ++f) {
      double v = inst.values[f];
      if (is_missing(v))
        out << "?";
      else if (d.schema().features[f].kind == FeatureKind::Numeric)
        out << format_number(v);
      else
        out << quote_arff(d.schema().features[f].values[static_cast<std::size_t>(v)]);
      out << ",";
    }
    out << quote_arff(d.schema().class_values[static_cast<std::size_t>(inst.class_label)])
        << "\n";
  }
}

inline void save_csv(const Dataset& d, std::ostream& out) {
  using namespace detail;
  for (const auto& f : d.schema().features) out << quote_csv(f.name) << ",";
  out << quote_csv(d.schema().class_name) << "\n";
  for (const auto& inst : d.instances()) {
    for (std::size_t f = 0; f < inst.values.size(); ++f) {
      double v = inst.values[f];
      if (is_missing(v))
        ;  // empty field
      else if (d.schema().features[f].kind == FeatureKind::Numeric)
        out << format_number(v);
      else
        out << quote_csv(d.schema().features[f].values[static_cast<std::size_t>(v)]);
      out << ",";
    }
    out << quote_csv(d.schema().class_values[static_cast<std::size_t>(inst.class_label)])
        << "\n";
  }
}

inline void save_dataset(const Dataset& d, const std::string& path,
                         FileFormat format = FileFormat::Auto) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  if (format == FileFormat::Auto) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : detail::lower(path.substr(dot + 1));
    format = ext == "csv" ? FileFormat::Csv : FileFormat::Arff;
  }
  if (format == FileFormat::Arff)
    save_arff(d, out);
  else
    save_csv(d, out);
}

}  // namespace fsel
