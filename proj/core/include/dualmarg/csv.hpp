#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dualmarg {

// Doubles are printed with 17 significant digits (round-trip exact).
std::string format_double(double v);

// RFC-4180-style writer: mandatory header, comma separation, fields quoted
// when they contain a comma, quote, or newline. Output is byte-deterministic
// for identical inputs.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& names);

  CsvWriter& field(std::string_view s);
  CsvWriter& field(double v);
  CsvWriter& field(int v);
  CsvWriter& field(std::uint64_t v);
  // Empty field placeholder.
  CsvWriter& blank();
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  std::size_t columns_ = 0;
  std::size_t in_row_ = 0;
  bool row_open_ = false;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Minimal reader for the CLI `map` input; understands quoted fields.
CsvTable read_csv(std::istream& in);

}  // namespace dualmarg
