#pragma once

#include "config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace wavemap::cli {

struct Table1Entry {
  /// "A1".."A4" or "Ainf"
  std::string column;
  int j = 0;
  std::string printed;
  double computed = 0.0;
  /// Half a unit in the last printed digit.
  double tolerance = 0.0;
  /// computed, rounded to the printed precision
  std::string rounded;
  bool pass = false;
};

struct Table1Report {
  std::vector<Table1Entry> entries;
  bool all_pass = false;
  double seconds = 0.0;
};

/// The printed table: column, j, value as printed.
struct PrintedEntry {
  const char* column;
  int n;
  int j;
  const char* value;
};
const std::vector<PrintedEntry>& printed_table1();

/// Half a unit in the last digit of a decimal string.
double half_unit(const std::string& printed);
/// x rounded to the number of decimals in `printed`.
std::string round_like(double x, const std::string& printed);

Table1Report verify_table1(const RunConfig& c);
std::string report_to_json(const Table1Report& r);
std::string report_to_text(const Table1Report& r);

/// Runs the configured command, writing artifacts to c.output.path (or `out`
/// for "-") and diagnostics to `err`. Returns the process exit status:
/// 0 success, 1 tolerances not met, 2 invalid configuration, 3 solver or I/O failure.
int run(const RunConfig& c, std::ostream& out, std::ostream& err);

/// {"schema_version", "kind": "error", "error", "message"} on one line.
std::string error_record(const std::string& kind, const std::string& message);

}  // namespace wavemap::cli
