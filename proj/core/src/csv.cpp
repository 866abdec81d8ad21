#include "dualmarg/csv.hpp"

#include <cstdio>
#include <istream>

#include "dualmarg/errors.hpp"

namespace dualmarg {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\n\r") != std::string_view::npos;
}

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void CsvWriter::header(const std::vector<std::string>& names) {
  columns_ = names.size();
  bool first = true;
  for (const auto& n : names) {
    if (!first) out_ << ',';
    out_ << (needs_quotes(n) ? quoted(n) : n);
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::sep() {
  if (row_open_) {
    out_ << ',';
  }
  row_open_ = true;
  ++in_row_;
}

CsvWriter& CsvWriter::field(std::string_view s) {
  sep();
  out_ << (needs_quotes(s) ? quoted(s) : std::string(s));
  return *this;
}

CsvWriter& CsvWriter::field(double v) {
  sep();
  out_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::field(int v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::blank() {
  sep();
  return *this;
}

void CsvWriter::end_row() {
  if (columns_ != 0 && in_row_ != columns_) {
    throw ValidationError("csv row width does not match the header");
  }
  out_ << '\n';
  row_open_ = false;
  in_row_ = 0;
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            cur += '"';
            ++i;
          } else {
            in_quotes = false;
          }
        } else {
          cur += c;
        }
      } else if (c == '"') {
        in_quotes = true;
      } else if (c == ',') {
        fields.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(std::move(cur));
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  if (first) throw ValidationError("csv input is empty (header row is mandatory)");
  return table;
}

}  // namespace dualmarg
