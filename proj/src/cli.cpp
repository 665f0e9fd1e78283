#include "sturm/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sturm/batteries.hpp"
#include "sturm/errors.hpp"
#include "sturm/oscillation.hpp"
#include "sturm/potential.hpp"
#include "sturm/spectrum.hpp"
#include "sturm/sweep.hpp"

namespace sturm::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& s) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Potential load_potential(const std::string& spec) {
  return parse_potential(!spec.empty() && spec[0] == '@' ? read_file(spec.substr(1)) : spec);
}

int resolve_cells(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SL_CELLS"); env != nullptr && *env != '\0') {
    const double v = parse_number(env);
    if (v != std::floor(v) || v <= 0) throw ConfigError("SL_CELLS must be a positive integer");
    return static_cast<int>(v);
  }
  return kDefaultCells;
}

nlohmann::json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, c);
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

// Writes to --out (or `out` when empty) in the requested format.
void emit(const RunConfig& cfg, const std::string& command, const Table& t, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) throw ConfigError("cannot write " + cfg.out);
    os = &file;
  }
  if (cfg.format == "json") {
    nlohmann::json doc;
    doc["command"] = command;
    doc["columns"] = t.columns;
    doc["rows"] = nlohmann::json::parse(to_json_text(t));
    *os << doc.dump(2) << '\n';
  } else {
    write_csv(t, *os);
  }
}

BoundaryParams boundary(const RunConfig& cfg) { return {parse_angle(cfg.alpha), parse_angle(cfg.beta)}; }

std::pair<int, int> n_range(const RunConfig& cfg) {
  return cfg.n_range.empty() ? std::pair{cfg.n, cfg.n} : parse_n_range(cfg.n_range);
}

int cmd_eigen(const RunConfig& cfg, std::ostream& out) {
  const Potential q = load_potential(cfg.potential_spec);
  const BoundaryParams bc = boundary(cfg);
  const auto [lo, hi] = n_range(cfg);
  const auto mesh = Mesh::build(q, resolve_cells(cfg.cells));
  Table t{{"n", "mu", "interior_zero_count", "c_n"}, {}};
  for (int n = lo; n <= hi; ++n) {
    const Eigenpair p = find_eigenvalue(mesh, q, n, bc);
    t.rows.push_back({static_cast<long long>(n), p.mu, static_cast<long long>(p.interior_zero_count()), p.c_n});
  }
  emit(cfg, "eigen", t, out);
  return kSuccess;
}

int cmd_zeros(const RunConfig& cfg, std::ostream& out) {
  const Potential q = load_potential(cfg.potential_spec);
  const BoundaryParams bc = boundary(cfg);
  const auto [lo, hi] = n_range(cfg);
  const auto mesh = Mesh::build(q, resolve_cells(cfg.cells));
  Table t{{"n", "mu", "k", "x", "slope", "pinned"}, {}};
  for (int n = lo; n <= hi; ++n) {
    const Eigenpair p = find_eigenvalue(mesh, q, n, bc);
    for (const ZeroRecord& z : eigen_zeros(q, p, VelocitySide::phi)) {
      t.rows.push_back({static_cast<long long>(n), p.mu, static_cast<long long>(z.k), z.x, z.slope,
                        static_cast<long long>(z.pinned)});
    }
  }
  emit(cfg, "zeros", t, out);
  return kSuccess;
}

int cmd_velocities(const RunConfig& cfg, std::ostream& out) {
  const Potential q = load_potential(cfg.potential_spec);
  const BoundaryParams bc = boundary(cfg);
  const auto [lo, hi] = n_range(cfg);
  const auto mesh = Mesh::build(q, resolve_cells(cfg.cells));
  Table t{{"n", "side", "k", "x", "slope", "velocity"}, {}};
  for (int n = lo; n <= hi; ++n) {
    const Eigenpair p = find_eigenvalue(mesh, q, n, bc);
    for (VelocitySide side : {VelocitySide::phi, VelocitySide::psi}) {
      for (const ZeroRecord& z : eigen_zeros(q, p, side)) {
        t.rows.push_back({static_cast<long long>(n), std::string(side == VelocitySide::phi ? "phi" : "psi"),
                          static_cast<long long>(z.k), z.x, z.slope, z.velocity});
      }
    }
  }
  emit(cfg, "velocities", t, out);
  return kSuccess;
}

int cmd_evf(const RunConfig& cfg, std::ostream& out) {
  const Potential q = load_potential(cfg.potential_spec);
  if (cfg.gamma.empty() || cfg.delta.empty()) throw ConfigError("evf needs --gamma and --delta");
  const auto gammas = parse_angle_list(cfg.gamma);
  const auto deltas = parse_angle_list(cfg.delta);
  const SolverOptions opts{resolve_cells(cfg.cells)};
  const bool ordered = std::is_sorted(gammas.begin(), gammas.end(), std::less_equal<>()) &&
                       std::is_sorted(deltas.begin(), deltas.end(), std::less_equal<>());
  Eigen::MatrixXd m(gammas.size(), deltas.size());
  if (ordered) {
    m = evf_grid(q, gammas, deltas, opts);
  } else {
    for (size_t i = 0; i < gammas.size(); ++i) {
      for (size_t j = 0; j < deltas.size(); ++j) m(i, j) = evf(q, {gammas[i], deltas[j]}, opts);
    }
  }
  Table t{{"gamma", "delta", "mu"}, {}};
  for (size_t i = 0; i < gammas.size(); ++i) {
    for (size_t j = 0; j < deltas.size(); ++j) {
      t.rows.push_back({gammas[i], deltas[j], m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    }
  }
  emit(cfg, "evf", t, out);
  return kSuccess;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SweepPlan plan;
  plan.q = load_potential(cfg.potential_spec);
  plan.n = cfg.n;
  if (cfg.vary == "beta") {
    plan.vary = SweepVariable::beta;
    plan.fixed_angle = parse_angle(cfg.alpha);
  } else if (cfg.vary == "alpha") {
    plan.vary = SweepVariable::alpha;
    plan.fixed_angle = parse_angle(cfg.beta);
  } else {
    throw ConfigError("--vary must be beta or alpha");
  }
  double lo = plan.vary == SweepVariable::beta ? 0.0 : 0.05 * kPi;
  double hi = plan.vary == SweepVariable::beta ? 0.95 * kPi : kPi;
  if (!cfg.range.empty()) {
    const auto r = parse_angle_list(cfg.range);
    if (r.size() != 2) throw ConfigError("--range takes two angles lo,hi");
    lo = r[0];
    hi = r[1];
  }
  if (cfg.grid < kMinSweepPoints) {
    throw ConfigError("--grid must be at least " + std::to_string(kMinSweepPoints));
  }
  plan.grid = SweepPlan::uniform_grid(lo, hi, cfg.grid);
  plan.cells = resolve_cells(cfg.cells);

  const SweepResult result = run_sweep(plan);
  Table path{{"angle", "mu"}, {}};
  for (const auto& s : result.samples) path.rows.push_back({s.angle, s.mu});
  Table events{{"event", "angle_lo", "angle_hi"}, {}};
  for (const auto& e : result.events) {
    const AngleBracket b = detect_transition(plan, e);
    events.rows.push_back({std::string(to_string(e.kind)), b.lo, b.hi});
  }
  std::vector<Table> zeros;
  for (const auto& traj : result.trajectories) {
    Table z{{"angle", "x"}, {}};
    for (const auto& [a, x] : traj.points) z.rows.push_back({a, x});
    zeros.push_back(std::move(z));
  }
  if (!result.path_monotone()) err << "warning: eigenvalue path not strictly monotone\n";

  const std::string prefix = cfg.out.empty() ? "sweep" : cfg.out;
  auto open = [](const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    return f;
  };
  if (cfg.format == "json") {
    nlohmann::json doc;
    doc["command"] = "sweep";
    doc["path"] = nlohmann::json::parse(to_json_text(path));
    doc["events"] = nlohmann::json::parse(to_json_text(events));
    doc["zeros"] = nlohmann::json::array();
    for (size_t i = 0; i < zeros.size(); ++i) {
      doc["zeros"].push_back({{"id", i}, {"points", nlohmann::json::parse(to_json_text(zeros[i]))}});
    }
    auto f = open(prefix + ".json");
    f << doc.dump(2) << '\n';
    out << prefix << ".json\n";
  } else {
    auto f = open(prefix + "_path.csv");
    write_csv(path, f);
    auto g = open(prefix + "_events.csv");
    write_csv(events, g);
    out << prefix << "_path.csv\n" << prefix << "_events.csv\n";
    for (size_t i = 0; i < zeros.size(); ++i) {
      const std::string name = prefix + "_zero" + std::to_string(i) + ".csv";
      auto h = open(name);
      write_csv(zeros[i], h);
      out << name << '\n';
    }
  }
  return kSuccess;
}

int cmd_verify(const RunConfig& cfg, bool potential_given, std::ostream& out, std::ostream& err) {
  TestMatrix matrix = TestMatrix::standard();
  if (!cfg.full) {
    matrix = potential_given ? TestMatrix::single({"custom", load_potential(cfg.potential_spec)})
                             : TestMatrix::single({"x^-0.5", Potential::power(1.0, -0.5)});
  }
  matrix.cells = resolve_cells(cfg.cells);

  BatteryReport report;
  if (cfg.battery == "theorem1") {
    report = run_theorem1(matrix);
  } else if (cfg.battery == "velocities") {
    report = run_velocities(matrix);
  } else if (cfg.battery == "identities") {
    report = run_identities(matrix);
  } else if (cfg.battery == "proportionality") {
    report = run_proportionality(matrix);
  } else if (cfg.battery == "evf-monotonicity") {
    report = run_evf_monotonicity(matrix.potentials, 16, matrix.cells);
  } else if (cfg.battery == "seam") {
    report = run_seam(matrix.potentials, 5, 1e-4, 1e-3, matrix.cells);
  } else {
    throw ConfigError("--battery must be one of theorem1, velocities, identities, proportionality, "
                      "evf-monotonicity, seam");
  }

  Table t{{"battery", "case", "pass", "residual", "detail"}, {}};
  for (const auto& c : report.cases) {
    t.rows.push_back({report.battery, c.label, static_cast<long long>(c.pass), c.residual, c.detail});
  }
  emit(cfg, "verify", t, out);
  err << report.battery << ": " << report.cases.size() << " cases, " << report.failures()
      << " failures, worst residual " << format_double(report.worst_residual()) << '\n';
  return report.all_pass() ? kSuccess : kVerificationFailed;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const Table& t, std::ostream& os) {
  for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      std::string text = cell_text(row[i]);
      for (char& ch : text) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      os << (i ? "," : "") << text;
    }
    os << '\n';
  }
}

std::string to_json_text(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (size_t i = 0; i < row.size() && i < t.columns.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return rows.dump();
}

Table read_csv(std::istream& is) {
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };
  Table t;
  std::string line;
  if (!std::getline(is, line)) return t;
  t.columns = split(line);
  while (std::getline(is, line)) {
    std::vector<Cell> row;
    for (const auto& f : split(line)) {
      char* end = nullptr;
      const long long i = std::strtoll(f.c_str(), &end, 10);
      if (!f.empty() && *end == '\0') {
        row.emplace_back(i);
        continue;
      }
      const double d = std::strtod(f.c_str(), &end);
      if (!f.empty() && *end == '\0') {
        row.emplace_back(d);
      } else {
        row.emplace_back(f);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

double parse_angle(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '*') s.push_back(c);
  }
  const auto p = s.find("pi");
  if (p == std::string::npos) return parse_number(s);
  const std::string coef = s.substr(0, p);
  const std::string rest = s.substr(p + 2);
  double v = kPi * (coef.empty() ? 1.0 : coef == "-" ? -1.0 : parse_number(coef));
  if (!rest.empty()) {
    if (rest[0] != '/') throw ConfigError("cannot parse angle '" + std::string(text) + "'");
    v /= parse_number(rest.substr(1));
  }
  return v;
}

std::pair<int, int> parse_n_range(std::string_view text) {
  const std::string s = trim(text);
  auto to_int = [&](const std::string& part) {
    const double v = parse_number(trim(part));
    if (v != std::floor(v) || v < 0) throw ConfigError("bad index in range '" + s + "'");
    return static_cast<int>(v);
  };
  size_t sep = s.find("..");
  size_t width = 2;
  if (sep == std::string::npos) {
    sep = s.find(':');
    width = 1;
  }
  if (sep == std::string::npos) {
    const int n = to_int(s);
    return {n, n};
  }
  const int a = to_int(s.substr(0, sep));
  const int b = to_int(s.substr(sep + width));
  if (b < a) throw ConfigError("empty range '" + s + "'");
  return {a, b};
}

std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  std::stringstream ss{std::string(text)};
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_angle(trim(part)));
  return out;
}

std::string schema_text() {
  return "eigen:       n,mu,interior_zero_count,c_n\n"
         "zeros:       n,mu,k,x,slope,pinned            (phi side, k ascending from x=0)\n"
         "velocities:  n,side,k,x,slope,velocity        (side phi: k ascending from 0; psi: k descending from pi)\n"
         "evf:         gamma,delta,mu\n"
         "sweep:       <out>_path.csv    angle,mu\n"
         "             <out>_events.csv  event,angle_lo,angle_hi\n"
         "             <out>_zero<i>.csv angle,x\n"
         "verify:      battery,case,pass,residual,detail\n"
         "All reals are written with 17 significant digits; comma separated, header row, LF line endings.\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Sturm-Liouville spectra, eigenfunction zeros and zero dynamics"};
  app.set_help_all_flag("--help-all");
  app.add_flag("--schema", cfg.schema, "Print CSV column schemas and exit");
  app.require_subcommand(0, 1);

  CLI::Option* q_opt = nullptr;
  auto common = [&](CLI::App* sub) {
    q_opt = sub->add_option("--q", cfg.potential_spec, "Potential JSON or @file");
    sub->add_option("--cells", cfg.cells, "Propagation cells (default: SL_CELLS or 4096)");
    sub->add_option("--out", cfg.out, "Output path (sweep: file prefix)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto bc = [&](CLI::App* sub) {
    sub->add_option("--alpha", cfg.alpha, "Left boundary angle in (0, pi]");
    sub->add_option("--beta", cfg.beta, "Right boundary angle in [0, pi)");
  };

  std::vector<CLI::Option*> q_opts;
  for (const char* name : {"eigen", "zeros", "velocities"}) {
    auto* sub = app.add_subcommand(name, std::string(name) + " of the boundary problem");
    common(sub);
    q_opts.push_back(q_opt);
    bc(sub);
    sub->add_option("--n", cfg.n, "Eigenvalue index");
    sub->add_option("--n-range", cfg.n_range, "Index range a..b");
  }
  auto* evf_cmd = app.add_subcommand("evf", "Eigenvalues function on a gamma x delta grid");
  common(evf_cmd);
  q_opts.push_back(q_opt);
  evf_cmd->add_option("--gamma", cfg.gamma, "Comma-separated gamma values");
  evf_cmd->add_option("--delta", cfg.delta, "Comma-separated delta values");

  auto* sweep_cmd = app.add_subcommand("sweep", "Trace zeros while one boundary angle varies");
  common(sweep_cmd);
  q_opts.push_back(q_opt);
  bc(sweep_cmd);
  sweep_cmd->add_option("--n", cfg.n, "Eigenvalue index");
  sweep_cmd->add_option("--vary", cfg.vary, "beta or alpha");
  sweep_cmd->add_option("--grid", cfg.grid, "Number of sweep angles");
  sweep_cmd->add_option("--range", cfg.range, "Sweep interval lo,hi");

  auto* verify_cmd = app.add_subcommand("verify", "Run an invariant battery");
  common(verify_cmd);
  q_opts.push_back(q_opt);
  verify_cmd->add_option("--battery", cfg.battery, "theorem1, velocities, identities, proportionality, "
                                                   "evf-monotonicity or seam")
      ->required();
  verify_cmd->add_flag("--full", cfg.full, "Run the full five-potential matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  if (cfg.schema) {
    out << schema_text();
    return kSuccess;
  }
  if (app.get_subcommands().empty()) {
    err << "error: a command is required (eigen, zeros, velocities, evf, sweep, verify)\n";
    return kConfigError;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "eigen") return cmd_eigen(cfg, out);
    if (cfg.command == "zeros") return cmd_zeros(cfg, out);
    if (cfg.command == "velocities") return cmd_velocities(cfg, out);
    if (cfg.command == "evf") return cmd_evf(cfg, out);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out, err);
    const bool given = std::any_of(q_opts.begin(), q_opts.end(), [](CLI::Option* o) { return o->count() > 0; });
    return cmd_verify(cfg, given, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_user_error(e.code()) ? kConfigError : kSolverError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"sturm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sturm::cli
