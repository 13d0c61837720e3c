// Copyright 2026 The ensemblefuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ensemblefuse/model_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include "ensemblefuse/errors.hpp"

namespace ensemblefuse {

// --- matrix.hpp out-of-line members --------------------------------------

ClassList::ClassList(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw ValidationError("class list is empty");
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw ValidationError("class list contains an empty name");
    if (n.find(',') != std::string::npos) {
      throw ValidationError("class name \"" + n + "\" contains a comma");
    }
    if (!seen.insert(n).second) {
      throw ValidationError("duplicate class name \"" + n + "\"");
    }
  }
}

std::optional<std::size_t> ClassList::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

PredictionMatrix::PredictionMatrix(ClassList classes, Matrix<double> values)
    : classes_(std::move(classes)), values_(std::move(values)) {
  if (values_.rows() == 0) throw ValidationError("no samples");
  if (values_.cols() != classes_.size()) {
    throw ValidationError("prediction matrix has " + std::to_string(values_.cols()) +
                          " columns but " + std::to_string(classes_.size()) + " classes");
  }
  for (std::size_t r = 0; r < values_.rows(); ++r) {
    for (std::size_t c = 0; c < values_.cols(); ++c) {
      const double v = values_(r, c);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw ValidationError("row " + std::to_string(r + 1) + ", class \"" + classes_[c] +
                              "\": value " + io::format_double(v) + " outside [0,1]");
      }
    }
  }
}

PredictionMatrix PredictionMatrix::select_rows(std::span<const std::size_t> indices) const {
  return PredictionMatrix(classes_, values_.select_rows(indices));
}

LabelMatrix::LabelMatrix(ClassList classes, Matrix<std::uint8_t> values)
    : classes_(std::move(classes)), values_(std::move(values)) {
  if (values_.rows() == 0) throw ValidationError("no samples");
  if (values_.cols() != classes_.size()) {
    throw ValidationError("label matrix has " + std::to_string(values_.cols()) +
                          " columns but " + std::to_string(classes_.size()) + " classes");
  }
  for (std::size_t r = 0; r < values_.rows(); ++r) {
    for (std::size_t c = 0; c < values_.cols(); ++c) {
      if (values_(r, c) > 1) {
        throw ValidationError("row " + std::to_string(r + 1) + ", class \"" + classes_[c] +
                              "\": label is not 0 or 1");
      }
    }
  }
}

LabelMatrix LabelMatrix::select_rows(std::span<const std::size_t> indices) const {
  return LabelMatrix(classes_, values_.select_rows(indices));
}

namespace io {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Reads one logical line, stripping a trailing CR. Returns false at EOF.
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string_view>> rows;
  std::vector<std::string> storage;
};

// Splits a CSV stream into header and rows, checking only arity. Blank
// trailing lines are ignored; blank lines in the middle are an error.
RawTable read_raw(std::istream& in, const std::string& source) {
  RawTable t;
  std::string line;
  if (!next_line(in, line) || trim(line).empty()) {
    throw ValidationError(source + ": missing header row");
  }
  for (auto f : split_fields(line)) t.header.emplace_back(trim(f));
  std::vector<std::string> lines;
  while (next_line(in, line)) lines.push_back(line);
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ValidationError(source + ": no samples");
  t.storage = std::move(lines);
  t.rows.reserve(t.storage.size());
  for (std::size_t r = 0; r < t.storage.size(); ++r) {
    auto fields = split_fields(t.storage[r]);
    if (fields.size() != t.header.size()) {
      throw ValidationError(source + ": row " + std::to_string(r + 1) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(t.header.size()));
    }
    for (auto& f : fields) f = trim(f);
    t.rows.push_back(std::move(fields));
  }
  return t;
}

ClassList make_classes(std::vector<std::string> names, const std::string& source) {
  try {
    return ClassList(std::move(names));
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": header: " + e.what());
  }
}

std::string where(const std::string& source, std::size_t row, const std::string& column) {
  return source + ": row " + std::to_string(row + 1) + ", class \"" + column + "\"";
}

double parse_number(std::string_view field, const std::string& source, std::size_t row,
                    const std::string& column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw ValidationError(where(source, row, column) + ": non-numeric field \"" +
                          std::string(field) + "\"");
  }
  if (!std::isfinite(value)) {
    throw ValidationError(where(source, row, column) + ": non-finite value");
  }
  return value;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw RuntimeError("write failed: " + path.string());
}

void write_header(std::ostream& out, const std::vector<std::string>& names) {
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) out << ',';
    out << names[c];
  }
  out << '\n';
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

NumericTable parse_numeric_csv(std::istream& in, const std::string& source) {
  RawTable raw = read_raw(in, source);
  std::vector<double> data;
  data.reserve(raw.rows.size() * raw.header.size());
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    for (std::size_t c = 0; c < raw.header.size(); ++c) {
      data.push_back(parse_number(raw.rows[r][c], source, r, raw.header[c]));
    }
  }
  const std::size_t rows = raw.rows.size();
  const std::size_t cols = raw.header.size();
  return NumericTable{std::move(raw.header), Matrix<double>(rows, cols, std::move(data))};
}

NumericTable read_numeric_csv(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return parse_numeric_csv(in, path.string());
}

void write_numeric_csv(const NumericTable& table, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_header(out, table.columns);
  std::string line;
  for (std::size_t r = 0; r < table.values.rows(); ++r) {
    line.clear();
    for (std::size_t c = 0; c < table.values.cols(); ++c) {
      if (c) line += ',';
      line += format_double(table.values(r, c));
    }
    line += '\n';
    out << line;
  }
  finish(out, path);
}

PredictionMatrix parse_predictions(std::istream& in, const std::string& source) {
  RawTable raw = read_raw(in, source);
  ClassList classes = make_classes(raw.header, source);
  std::vector<double> data;
  data.reserve(raw.rows.size() * classes.size());
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const double v = parse_number(raw.rows[r][c], source, r, classes[c]);
      if (v < 0.0 || v > 1.0) {
        throw ValidationError(where(source, r, classes[c]) + ": value " +
                              std::string(raw.rows[r][c]) + " outside [0,1]");
      }
      data.push_back(v);
    }
  }
  const std::size_t rows = raw.rows.size();
  const std::size_t cols = classes.size();
  return PredictionMatrix(std::move(classes), Matrix<double>(rows, cols, std::move(data)));
}

PredictionMatrix read_predictions(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return parse_predictions(in, path.string());
}

LabelMatrix parse_labels(std::istream& in, const std::string& source) {
  RawTable raw = read_raw(in, source);
  ClassList classes = make_classes(raw.header, source);
  std::vector<std::uint8_t> data;
  data.reserve(raw.rows.size() * classes.size());
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const auto f = raw.rows[r][c];
      if (f == "0") {
        data.push_back(0);
      } else if (f == "1") {
        data.push_back(1);
      } else {
        throw ValidationError(where(source, r, classes[c]) + ": non-binary field \"" +
                              std::string(f) + "\"");
      }
    }
  }
  const std::size_t rows = raw.rows.size();
  const std::size_t cols = classes.size();
  return LabelMatrix(std::move(classes), Matrix<std::uint8_t>(rows, cols, std::move(data)));
}

LabelMatrix read_labels(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return parse_labels(in, path.string());
}

void write_predictions(const PredictionMatrix& m, std::ostream& out) {
  if (m.n_samples() == 0) throw ValidationError("no samples");
  write_header(out, m.classes().names());
  std::string line;
  for (std::size_t r = 0; r < m.n_samples(); ++r) {
    line.clear();
    for (std::size_t c = 0; c < m.n_classes(); ++c) {
      if (c) line += ',';
      line += format_double(m(r, c));
    }
    line += '\n';
    out << line;
  }
}

void write_predictions(const PredictionMatrix& m, const std::filesystem::path& path) {
  if (m.n_samples() == 0) throw ValidationError("no samples");
  auto out = open_for_write(path);
  write_predictions(m, out);
  finish(out, path);
}

void write_labels(const LabelMatrix& m, const std::filesystem::path& path) {
  if (m.n_samples() == 0) throw ValidationError("no samples");
  auto out = open_for_write(path);
  write_header(out, m.classes().names());
  std::string line;
  for (std::size_t r = 0; r < m.n_samples(); ++r) {
    line.clear();
    for (std::size_t c = 0; c < m.n_classes(); ++c) {
      if (c) line += ',';
      line += m(r, c) ? '1' : '0';
    }
    line += '\n';
    out << line;
  }
  finish(out, path);
}

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += v[i];
  }
  return s;
}

void check_classes(const ClassList& expected, const ClassList& got, const std::string& what) {
  if (expected == got) return;
  const auto& e = expected.names();
  const auto& g = got.names();
  const std::set<std::string> es(e.begin(), e.end());
  const std::set<std::string> gs(g.begin(), g.end());
  if (es == gs) {
    // Same names, different order: report where each expected class sits.
    std::string perm;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i) perm += ',';
      perm += std::to_string(*got.index_of(e[i]));
    }
    throw ValidationError(what + ": class order mismatch; expected [" + join(e) + "], got [" +
                          join(g) + "]; reorder columns by permutation [" + perm + "]");
  }
  std::vector<std::string> missing, extra;
  for (const auto& n : e) {
    if (!gs.count(n)) missing.push_back(n);
  }
  for (const auto& n : g) {
    if (!es.count(n)) extra.push_back(n);
  }
  throw ValidationError(what + ": class list mismatch; missing [" + join(missing) +
                        "], unexpected [" + join(extra) + "]");
}

}  // namespace

void check_aligned(std::span<const PredictionMatrix> preds) {
  if (preds.empty()) throw ValidationError("at least one prediction matrix is required");
  const auto& ref = preds.front();
  for (std::size_t k = 1; k < preds.size(); ++k) {
    const std::string what = "prediction matrix " + std::to_string(k + 1);
    if (preds[k].n_samples() != ref.n_samples()) {
      throw ValidationError(what + ": sample count " + std::to_string(preds[k].n_samples()) +
                            " differs from " + std::to_string(ref.n_samples()));
    }
    check_classes(ref.classes(), preds[k].classes(), what);
  }
}

void check_aligned(std::span<const PredictionMatrix> preds, const LabelMatrix& labels) {
  check_aligned(preds);
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const std::string what = "prediction matrix " + std::to_string(k + 1);
    if (preds[k].n_samples() != labels.n_samples()) {
      throw ValidationError(what + ": sample count " + std::to_string(preds[k].n_samples()) +
                            " differs from labels (" + std::to_string(labels.n_samples()) + ")");
    }
    check_classes(labels.classes(), preds[k].classes(), what);
  }
}

AlignedSet align(std::vector<PredictionMatrix> preds, LabelMatrix labels) {
  check_aligned(preds, labels);
  return AlignedSet{std::move(preds), std::move(labels)};
}

}  // namespace io
}  // namespace ensemblefuse
