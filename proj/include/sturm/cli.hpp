#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sturm::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kConfigError = 2,
  kSolverError = 3,
};

struct RunConfig {
  std::string command;  // eigen, zeros, velocities, evf, sweep, verify
  std::string potential_spec = R"({"kind":"zero"})";
  std::string alpha = "pi";
  std::string beta = "0";
  int n = 0;
  std::string n_range;
  std::string vary = "beta";
  int grid = 64;
  std::string range;
  std::string gamma;
  std::string delta;
  int cells = 0;  // 0: SL_CELLS or the library default
  std::string out;
  std::string format = "csv";
  std::string battery;
  bool full = false;
  bool schema = false;
  unsigned seed = 0;  // reserved
};

using Cell = std::variant<long long, double, std::string>;

/// Column-named result table written as CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest decimal form that reads back to the same double (17 significant digits).
std::string format_double(double v);

void write_csv(const Table& t, std::ostream& os);
std::string to_json_text(const Table& t);
/// Parses CSV written by write_csv (header + rows, no quoting).
Table read_csv(std::istream& is);

/// "pi", "pi/2", "3pi/4", "0.95pi", "3*pi/4" or a plain number.
double parse_angle(std::string_view text);
/// "a..b", "a:b" or "a" (inclusive).
std::pair<int, int> parse_n_range(std::string_view text);
std::vector<double> parse_angle_list(std::string_view text);

/// CSV schemas of every command, as printed by --schema.
std::string schema_text();

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sturm::cli
