#include "gaborset/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gaborset/config.hpp"
#include "gaborset/error.hpp"

namespace fs = std::filesystem;

namespace gaborset::csv {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

namespace {

double parse_double(const std::string& s, const fs::path& file) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw Error(ErrorCode::IoError, file.string() + ": bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const fs::path& file) {
  int v = 0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw Error(ErrorCode::IoError, file.string() + ": bad integer '" + s + "'");
  return v;
}

std::vector<std::vector<std::string>> read_rows(const fs::path& file) {
  std::istringstream in(read_text(file));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_line(line));
  }
  return rows;
}

}  // namespace

void write_features(const fs::path& file, const std::vector<FeatureRow>& rows) {
  std::string text;
  for (const auto& row : rows) {
    text += escape(row.path);
    for (double v : row.features.values) text += "," + format_double(v);
    text += "\n";
  }
  write_text(file, text);
}

std::vector<FeatureRow> read_features(const fs::path& file) {
  std::vector<FeatureRow> out;
  for (const auto& fields : read_rows(file)) {
    if (fields.size() < 2) throw Error(ErrorCode::IoError, file.string() + ": feature row without values");
    FeatureRow row{fields[0], {}};
    for (std::size_t i = 1; i < fields.size(); ++i) row.features.values.push_back(parse_double(fields[i], file));
    if (!out.empty() && row.features.size() != out.front().features.size()) {
      throw Error(ErrorCode::IoError, file.string() + ": rows have differing feature counts");
    }
    out.push_back(std::move(row));
  }
  return out;
}

void write_labels(const fs::path& file, const std::map<std::string, int>& labels) {
  std::string text = "path,label\n";
  for (const auto& [path, label] : labels) text += escape(path) + "," + std::to_string(label) + "\n";
  write_text(file, text);
}

std::map<std::string, int> read_labels(const fs::path& file) {
  std::map<std::string, int> out;
  const auto rows = read_rows(file);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (i == 0 && !f.empty() && f[0] == "path") continue;
    if (f.size() != 2) throw Error(ErrorCode::IoError, file.string() + ": label rows need 2 columns");
    out[f[0]] = parse_int(f[1], file);
  }
  return out;
}

void write_decisions(const fs::path& file, const std::vector<DecisionRow>& rows) {
  const std::size_t n = rows.empty() ? 0 : rows.front().decision.outputs.size();
  std::string text = "path";
  for (std::size_t i = 0; i < n; ++i) text += ",output_" + std::to_string(i);
  for (std::size_t i = 0; i < n; ++i) text += ",factor_" + std::to_string(i);
  text += ",verdict\n";
  for (const auto& row : rows) {
    text += escape(row.path);
    for (double v : row.decision.outputs) text += "," + format_double(v);
    for (int f : row.decision.detection_factors) text += "," + std::to_string(f);
    text += std::string(",") + to_string(row.decision.verdict) + "\n";
  }
  write_text(file, text);
}

std::vector<DecisionRow> read_decisions(const fs::path& file) {
  const auto rows = read_rows(file);
  if (rows.empty()) throw Error(ErrorCode::IoError, file.string() + ": missing header");
  const std::size_t columns = rows.front().size();
  if (columns < 2 || (columns - 2) % 2 != 0) throw Error(ErrorCode::IoError, file.string() + ": bad header");
  const std::size_t n = (columns - 2) / 2;

  std::vector<DecisionRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != columns) throw Error(ErrorCode::IoError, file.string() + ": ragged decision row");
    DecisionRow row;
    row.path = f[0];
    auto& d = row.decision;
    for (std::size_t i = 0; i < n; ++i) d.outputs.push_back(parse_double(f[1 + i], file));
    for (std::size_t i = 0; i < n; ++i) d.detection_factors.push_back(parse_int(f[1 + n + i], file));
    const std::string& verdict = f.back();
    if (verdict != "matched" && verdict != "unmatched") {
      throw Error(ErrorCode::IoError, file.string() + ": bad verdict '" + verdict + "'");
    }
    d.verdict = verdict == "matched" ? Verdict::Matched : Verdict::Unmatched;
    d.overall_matching = d.verdict == Verdict::Matched ? 1 : 0;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace gaborset::csv
