#ifndef CASCADE_IO_HPP
#define CASCADE_IO_HPP

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <unistd.h>
#include <vector>

#include "json.hpp"

#include "cascade/error.hpp"

namespace cascade {

using Json = nlohmann::ordered_json;

/// Shortest decimal form that still carries 17 significant digits.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  require(res.ec == std::errc() && res.ptr == end, ErrorKind::invalid_input,
          "not a number: '" + std::string(s) + "'");
  return v;
}

/// Writes `content` to a temporary sibling and renames it over `path`.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot rename into " + path.string());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Numeric table with named columns and a '#'-comment preamble.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;

  void add_row(std::vector<double> row) {
    require(row.size() == columns.size(), ErrorKind::invalid_input, "row width differs from the header");
    rows.push_back(std::move(row));
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (columns[c] == name) return c;
    throw Error(ErrorKind::invalid_input, "missing column '" + name + "'");
  }

  bool has_column(const std::string& name) const {
    for (const auto& c : columns)
      if (c == name) return true;
    return false;
  }
};

/// Embeds a config document as comment lines, one JSON line per key.
inline std::vector<std::string> config_comments(const Json& config) {
  std::vector<std::string> out{"config:"};
  for (auto it = config.begin(); it != config.end(); ++it) out.push_back("  " + it.key() + " = " + it.value().dump());
  return out;
}

/// Inverse of config_comments; other comment lines are ignored.
inline Json config_from_comments(const std::vector<std::string>& comments) {
  Json out = Json::object();
  bool inside = false;
  for (const auto& line : comments) {
    if (line == "config:") {
      inside = true;
      continue;
    }
    if (!inside || line.rfind("  ", 0) != 0) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    try {
      out[line.substr(2, eq - 2)] = Json::parse(line.substr(eq + 3));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::invalid_input, "malformed config comment: " + line);
    }
  }
  return out;
}

inline std::string to_csv(const CsvTable& table) {
  std::string s;
  for (const auto& c : table.comments) s += "# " + c + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) s += ',';
    s += table.columns[c];
  }
  s += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += ',';
      s += format_double(row[c]);
    }
    s += '\n';
  }
  return s;
}

inline void emit_csv(const std::filesystem::path& path, const CsvTable& table) { write_atomic(path, to_csv(table)); }

inline CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (!header) {
      table.columns = fields;
      header = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(parse_double(f));
    table.add_row(std::move(row));
  }
  require(header, ErrorKind::invalid_input, "CSV has no header row");
  return table;
}

inline CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

inline void emit_json(const std::filesystem::path& path, const Json& doc) { write_atomic(path, doc.dump(2) + "\n"); }

inline Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::invalid_input, path.string() + ": " + e.what());
  }
}

}  // namespace cascade

#endif  // CASCADE_IO_HPP
