#pragma once

// Command-line front end: verification reports and plot-ready tables.

#include "scattercorr/scattercorr.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace scattercorr::cli {

using nlohmann::json;

enum ExitCode : int { kPass = 0, kToleranceFailure = 1, kUsageError = 2 };

struct RunConfig {
  std::string command;
  int dimension = 2;
  std::string obstacle = "none";
  double radius = 1.0;
  std::string bc = "neumann";
  double omega = 1.0;
  double v = 1.0;
  double rho = 1.0;
  double lambda = 1.0;
  double mu = 1.0;
  std::string pair;
  std::string points;
  std::string grid;
  std::string source;
  std::string direction = "1,0";
  double omega_minus = 0.0;
  double omega_plus = 0.0;
  int radial_nodes = 64;
  int n_max = -1;
  int circle_nodes = -1;
  int polar_nodes = -1;
  int azimuth_nodes = -1;
  std::optional<double> tol;
  std::string output;
  std::string format = "json";
  int threads = 0;

  json to_json() const {
    json j = {{"command", command},     {"dim", dimension},       {"obstacle", obstacle},
              {"radius", radius},       {"bc", bc},               {"omega", omega},
              {"v", v},                 {"rho", rho},             {"lambda", lambda},
              {"mu", mu},               {"pair", pair},           {"points", points},
              {"grid", grid},           {"source", source},       {"direction", direction},
              {"omega_minus", omega_minus}, {"omega_plus", omega_plus},
              {"radial_nodes", radial_nodes}, {"n_max", n_max},   {"circle_nodes", circle_nodes},
              {"polar_nodes", polar_nodes}, {"azimuth_nodes", azimuth_nodes},
              {"format", format},       {"output", output},       {"threads", threads}};
    j["tol"] = tol ? json(*tol) : json(nullptr);
    return j;
  }
};

// ---------------------------------------------------------------------------
// Parsing helpers

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

inline double parse_number(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return value;
}

inline Point parse_point(const std::string& text, int dimension) {
  const auto coords = split(text, ',');
  if (static_cast<int>(coords.size()) != dimension) {
    throw std::invalid_argument("point '" + text + "' needs " + std::to_string(dimension) +
                                " coordinates");
  }
  Point p(dimension);
  for (int i = 0; i < dimension; ++i) p(i) = parse_number(coords[i]);
  return p;
}

/// "x1,x2;x1,x2;..." -> points.
inline std::vector<Point> parse_points(const std::string& text, int dimension) {
  std::vector<Point> out;
  for (const auto& item : split(text, ';')) {
    if (!item.empty()) out.push_back(parse_point(item, dimension));
  }
  return out;
}

/// "lo:hi:n,lo:hi:n[,lo:hi:n]" -> tensor grid, first axis fastest.
inline std::vector<Point> parse_grid(const std::string& text, int dimension) {
  const auto axes = split(text, ',');
  if (static_cast<int>(axes.size()) != dimension) {
    throw std::invalid_argument("grid needs one 'lo:hi:n' range per dimension");
  }
  std::vector<std::vector<double>> ticks;
  for (const auto& axis : axes) {
    const auto f = split(axis, ':');
    if (f.size() != 3) throw std::invalid_argument("grid axis must be 'lo:hi:n'");
    const double lo = parse_number(f[0]);
    const double hi = parse_number(f[1]);
    const int n = static_cast<int>(parse_number(f[2]));
    if (n < 1 || n > 100000) throw std::invalid_argument("grid count must be in 1..100000");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    ticks.push_back(std::move(t));
  }
  std::vector<Point> out;
  const std::size_t nz = dimension == 3 ? ticks[2].size() : 1;
  for (std::size_t iz = 0; iz < nz; ++iz) {
    for (double y : ticks[1]) {
      for (double x : ticks[0]) {
        Point p(dimension);
        p(0) = x;
        p(1) = y;
        if (dimension == 3) p(2) = ticks[2][iz];
        out.push_back(p);
      }
    }
  }
  return out;
}

inline std::pair<Point, Point> parse_pair(const std::string& text, int dimension) {
  const auto pts = parse_points(text, dimension);
  if (pts.size() != 2) throw std::invalid_argument("--pair needs exactly two points 'x;y'");
  return {pts[0], pts[1]};
}

inline scalarwave::ScattererSpec make_scatterer(const RunConfig& cfg) {
  if (cfg.obstacle == "none") return scalarwave::ScattererSpec::free_space();
  if (cfg.dimension != 2) throw std::invalid_argument("disk obstacles require --dim 2");
  const auto bc =
      cfg.bc == "dirichlet" ? scalarwave::Boundary::dirichlet : scalarwave::Boundary::neumann;
  return scalarwave::ScattererSpec::disk(cfg.radius, bc);
}

inline int resolve_threads(const RunConfig& cfg) {
  int n = cfg.threads;
  if (n <= 0) {
    if (const char* env = std::getenv("SCATTERCORR_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return n;
}

inline std::optional<verify::Discretization> discretization_override(
    const RunConfig& cfg, const scalarwave::WaveContext& ctx,
    const scalarwave::ScattererSpec& scat, const Point& x, const Point& y) {
  if (cfg.n_max < 0 && cfg.circle_nodes < 0 && cfg.polar_nodes < 0 && cfg.azimuth_nodes < 0) {
    return std::nullopt;
  }
  auto disc = verify::default_discretization(ctx, scat, x, y);
  if (cfg.n_max >= 0) disc.n_max = cfg.n_max;
  if (cfg.circle_nodes > 0) disc.rule.circle_nodes = cfg.circle_nodes;
  if (cfg.polar_nodes > 0) disc.rule.polar_nodes = cfg.polar_nodes;
  if (cfg.azimuth_nodes > 0) disc.rule.azimuth_nodes = cfg.azimuth_nodes;
  return disc;
}

// ---------------------------------------------------------------------------
// Serialization

inline json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline cplx complex_from_json(const json& j) {
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

inline json report_json(const verify::VerificationReport& r) {
  json lhs = json::array();
  json rhs = json::array();
  for (const auto& z : r.lhs) lhs.push_back(complex_json(z));
  for (const auto& z : r.rhs) rhs.push_back(complex_json(z));
  return {{"name", r.name},
          {"rows", r.rows},
          {"cols", r.cols},
          {"lhs", lhs},
          {"rhs", rhs},
          {"abs_residual", r.abs_residual},
          {"rel_residual", r.rel_residual},
          {"parameters", r.parameters}};
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct TableRow {
  Point x;
  cplx value;
  std::string error;
};

inline void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + cfg.output);
  file << text;
}

inline std::string render_table(const RunConfig& cfg, const std::vector<TableRow>& rows) {
  std::ostringstream os;
  if (cfg.format == "csv") {
    for (int i = 0; i < cfg.dimension; ++i) os << "x" << (i + 1) << ",";
    os << "re,im,status\n";
    for (const auto& row : rows) {
      for (int i = 0; i < cfg.dimension; ++i) os << format_double(row.x(i)) << ",";
      if (row.error.empty()) {
        os << format_double(row.value.real()) << "," << format_double(row.value.imag()) << ",ok\n";
      } else {
        os << "nan,nan,\"error: " << row.error << "\"\n";
      }
    }
    return os.str();
  }
  json records = json::array();
  for (const auto& row : rows) {
    json rec;
    for (int i = 0; i < cfg.dimension; ++i) rec["x" + std::to_string(i + 1)] = row.x(i);
    if (row.error.empty()) {
      rec["value"] = complex_json(row.value);
    } else {
      rec["error"] = row.error;
    }
    records.push_back(rec);
  }
  json doc = {{"command", cfg.command}, {"config", cfg.to_json()}, {"rows", records}};
  return doc.dump(2) + "\n";
}

inline std::string render_report(const RunConfig& cfg, const verify::VerificationReport& r,
                                 double tol, bool pass) {
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "key,value\n";
    os << "name," << r.name << "\n";
    os << "rel_residual," << format_double(r.rel_residual) << "\n";
    os << "abs_residual," << format_double(r.abs_residual) << "\n";
    os << "tolerance," << format_double(tol) << "\n";
    os << "pass," << (pass ? "true" : "false") << "\n";
    for (const auto& [k, v] : r.parameters) os << k << "," << format_double(v) << "\n";
    for (std::size_t i = 0; i < r.lhs.size(); ++i) {
      os << "lhs" << i << "_re," << format_double(r.lhs[i].real()) << "\n";
      os << "lhs" << i << "_im," << format_double(r.lhs[i].imag()) << "\n";
      os << "rhs" << i << "_re," << format_double(r.rhs[i].real()) << "\n";
      os << "rhs" << i << "_im," << format_double(r.rhs[i].imag()) << "\n";
    }
    return os.str();
  }
  json doc = {{"command", cfg.command}, {"config", cfg.to_json()}, {"report", report_json(r)},
              {"tolerance", tol},       {"pass", pass}};
  return doc.dump(2) + "\n";
}

// Evaluates f at every point, in parallel blocks, keeping input order.
template <class F>
std::vector<TableRow> evaluate_rows(const std::vector<Point>& points, int threads, F f) {
  std::vector<TableRow> rows(points.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      rows[i].x = points[i];
      try {
        rows[i].value = f(points[i]);
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    }
  };
  const std::size_t n = points.size();
  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(n, 1));
  if (t <= 1) {
    work(0, n);
    return rows;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + t - 1) / t;
  for (std::size_t b = 0; b < n; b += chunk) pool.emplace_back(work, b, std::min(n, b + chunk));
  for (auto& th : pool) th.join();
  return rows;
}

inline std::vector<Point> table_points(const RunConfig& cfg) {
  if (!cfg.points.empty() && !cfg.grid.empty()) {
    throw std::invalid_argument("give either --points or --grid, not both");
  }
  if (!cfg.points.empty()) return parse_points(cfg.points, cfg.dimension);
  if (!cfg.grid.empty()) return parse_grid(cfg.grid, cfg.dimension);
  throw std::invalid_argument("table commands need --points or --grid");
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_verify_scalar(const RunConfig& cfg, std::ostream& out) {
  const auto ctx = scalarwave::WaveContext::make(cfg.omega, cfg.v, cfg.dimension);
  const auto scat = make_scatterer(cfg);
  const auto [x, y] = parse_pair(cfg.pair, cfg.dimension);
  const auto report =
      verify::theorem1_residual(ctx, scat, x, y, discretization_override(cfg, ctx, scat, x, y));
  const double tol = cfg.tol.value_or(1e-8);
  const bool pass = report.rel_residual < tol;
  write_output(cfg, render_report(cfg, report, tol, pass), out);
  return pass ? kPass : kToleranceFailure;
}

inline int cmd_verify_elastic(const RunConfig& cfg, std::ostream& out) {
  const auto medium = elastic::ElasticMedium::make(cfg.rho, cfg.lambda, cfg.mu);
  const auto [x, y] = parse_pair(cfg.pair, cfg.dimension);
  if (!(cfg.omega > 0.0)) throw std::invalid_argument("omega must be positive");
  std::optional<sphquad::SphereRule> rule;
  if (cfg.circle_nodes > 0 || cfg.polar_nodes > 0 || cfg.azimuth_nodes > 0) {
    const int band = scalarwave::truncation_order(cfg.omega / medium.v_s() * (x - y).norm()) + 2;
    auto size = sphquad::default_rule_size(band);
    if (cfg.circle_nodes > 0) size.circle_nodes = cfg.circle_nodes;
    if (cfg.polar_nodes > 0) size.polar_nodes = cfg.polar_nodes;
    if (cfg.azimuth_nodes > 0) size.azimuth_nodes = cfg.azimuth_nodes;
    rule = sphquad::make_rule(cfg.dimension, size);
  }
  const auto report = verify::theorem2_residual(cfg.omega, medium, x, y, rule);
  const double tol = cfg.tol.value_or(1e-8);
  const bool pass = report.rel_residual < tol;
  write_output(cfg, render_report(cfg, report, tol, pass), out);
  return pass ? kPass : kToleranceFailure;
}

inline int cmd_field(const RunConfig& cfg, std::ostream& out) {
  const auto ctx = scalarwave::WaveContext::make(cfg.omega, cfg.v, cfg.dimension);
  const auto scat = make_scatterer(cfg);
  Point dir = parse_point(cfg.direction, cfg.dimension);
  if (!(dir.norm() > 0.0)) throw std::invalid_argument("--direction must be nonzero");
  const Point kvec = dir / dir.norm() * ctx.wavenumber();
  const auto points = table_points(cfg);
  std::vector<TableRow> rows;
  if (scat.is_disk()) {
    const scalarwave::DiskScattering sol(ctx, scat, cfg.n_max);
    const Point khat = kvec / kvec.norm();
    rows = evaluate_rows(points, resolve_threads(cfg),
                         [&](const Point& x) { return sol.total(sol.probe(x), khat); });
  } else {
    rows = evaluate_rows(points, resolve_threads(cfg),
                         [&](const Point& x) { return scalarwave::total(ctx, scat, x, kvec); });
  }
  write_output(cfg, render_table(cfg, rows), out);
  return kPass;
}

inline int cmd_green(const RunConfig& cfg, std::ostream& out) {
  const auto ctx = scalarwave::WaveContext::make(cfg.omega, cfg.v, cfg.dimension);
  const auto scat = make_scatterer(cfg);
  if (cfg.source.empty()) throw std::invalid_argument("green needs --source");
  const Point y = parse_point(cfg.source, cfg.dimension);
  const auto rows = evaluate_rows(table_points(cfg), resolve_threads(cfg), [&](const Point& x) {
    return greenfn::green(ctx, scat, x, y);
  });
  write_output(cfg, render_table(cfg, rows), out);
  return kPass;
}

inline int cmd_correlation(const RunConfig& cfg, std::ostream& out) {
  const auto ctx = scalarwave::WaveContext::make(cfg.omega, cfg.v, cfg.dimension);
  const auto scat = make_scatterer(cfg);
  if (cfg.source.empty()) throw std::invalid_argument("correlation needs --source");
  const Point y = parse_point(cfg.source, cfg.dimension);
  const auto rows = evaluate_rows(table_points(cfg), resolve_threads(cfg), [&](const Point& x) {
    const auto over = discretization_override(cfg, ctx, scat, x, y);
    if (!over) return verify::correlation_scalar(ctx, scat, x, y);
    return verify::correlation_scalar(ctx, scat, x, y,
                                      sphquad::make_rule(ctx.dimension, over->rule), over->n_max);
  });
  write_output(cfg, render_table(cfg, rows), out);
  return kPass;
}

inline int cmd_projector(const RunConfig& cfg, std::ostream& out) {
  const auto ctx = scalarwave::WaveContext::make(cfg.omega, cfg.v, cfg.dimension);
  const auto scat = make_scatterer(cfg);
  const auto [x, y] = parse_pair(cfg.pair, cfg.dimension);
  const double lo = cfg.omega_minus > 0.0 ? cfg.omega_minus : 0.8 * cfg.omega;
  const double hi = cfg.omega_plus > 0.0 ? cfg.omega_plus : 1.2 * cfg.omega;
  const auto window = verify::SpectralWindow::make(lo, hi);
  const cplx stone = verify::projector_kernel_stone(ctx, scat, window, x, y, cfg.radial_nodes);
  const cplx scatt = verify::projector_kernel_scatt(ctx, scat, window, x, y, cfg.radial_nodes);
  auto report = verify::make_report("projector_routes", {stone}, {scatt});
  report.parameters = {{"omega_minus", lo},
                       {"omega_plus", hi},
                       {"radial_nodes", cfg.radial_nodes},
                       {"dimension", cfg.dimension}};
  const double tol = cfg.tol.value_or(1e-6);
  const bool pass = report.rel_residual < tol;
  write_output(cfg, render_report(cfg, report, tol, pass), out);
  return pass ? kPass : kToleranceFailure;
}

/// Re-reads a JSON report and recomputes its residuals from lhs/rhs.
inline int check_report(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream file(path);
  if (!file) {
    err << "error: cannot open " << path << "\n";
    return kUsageError;
  }
  json doc;
  try {
    doc = json::parse(file);
    const json& r = doc.at("report");
    std::vector<cplx> lhs;
    std::vector<cplx> rhs;
    for (const auto& z : r.at("lhs")) lhs.push_back(complex_from_json(z));
    for (const auto& z : r.at("rhs")) rhs.push_back(complex_from_json(z));
    const auto [abs_res, rel_res] = verify::residuals(lhs, rhs);
    const double stored_rel = r.at("rel_residual").get<double>();
    const double stored_abs = r.at("abs_residual").get<double>();
    const double drift = std::max(std::abs(rel_res - stored_rel), std::abs(abs_res - stored_abs));
    const bool pass_again = rel_res < doc.at("tolerance").get<double>();
    const bool ok = drift <= 1e-15 && pass_again == doc.at("pass").get<bool>();
    json summary = {{"file", path},
                    {"rel_residual", rel_res},
                    {"stored_rel_residual", stored_rel},
                    {"drift", drift},
                    {"reproduced", ok}};
    out << summary.dump(2) << "\n";
    return ok ? kPass : kToleranceFailure;
  } catch (const std::exception& e) {
    err << "error: malformed report " << path << ": " << e.what() << "\n";
    return kUsageError;
  }
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattered waves, Green's functions and correlation identities", "scattercorr"};
  app.require_subcommand(0, 1);
  RunConfig cfg;
  bool dump_config = false;
  std::string check_path;
  app.add_option("--check", check_path, "Re-read a JSON report and reproduce its residuals");

  auto add_common = [&](CLI::App* sub, bool scalar) {
    sub->add_option("--dim", cfg.dimension, "Space dimension")->check(CLI::IsMember({2, 3}));
    sub->add_option("--omega", cfg.omega, "Angular frequency")->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output,-o", cfg.output, "Output file (default stdout)");
    sub->add_option("--threads", cfg.threads, "Worker threads (default: SCATTERCORR_THREADS or all cores)");
    sub->add_option("--tol", cfg.tol, "Pass tolerance on the relative residual");
    sub->add_flag("--dump-config", dump_config, "Print the resolved configuration and exit");
    sub->add_option("--circle-nodes", cfg.circle_nodes, "Override circle quadrature size");
    sub->add_option("--polar-nodes", cfg.polar_nodes, "Override polar quadrature size");
    sub->add_option("--azimuth-nodes", cfg.azimuth_nodes, "Override azimuthal quadrature size");
    if (scalar) {
      sub->add_option("--v", cfg.v, "Wave speed")->check(CLI::PositiveNumber);
      sub->add_option("--obstacle", cfg.obstacle, "Obstacle kind")->check(CLI::IsMember({"none", "disk"}));
      sub->add_option("--radius", cfg.radius, "Disk radius")->check(CLI::PositiveNumber);
      sub->add_option("--bc", cfg.bc, "Boundary condition")->check(CLI::IsMember({"neumann", "dirichlet"}));
      sub->add_option("--n-max", cfg.n_max, "Override partial-wave truncation order");
    }
  };

  auto* vs = app.add_subcommand("verify-scalar", "Check the scalar correlation / Im G identity");
  add_common(vs, true);
  vs->add_option("--pair", cfg.pair, "Point pair 'x1,x2;y1,y2'")->required();

  auto* ve = app.add_subcommand("verify-elastic", "Check the elastic correlation / Im G identity");
  add_common(ve, false);
  ve->add_option("--rho", cfg.rho, "Density");
  ve->add_option("--lambda", cfg.lambda, "Lame lambda");
  ve->add_option("--mu", cfg.mu, "Lame mu");
  ve->add_option("--pair", cfg.pair, "Point pair 'x;y'")->required();

  auto* fi = app.add_subcommand("field", "Tabulate the total field of one incident plane wave");
  add_common(fi, true);
  fi->add_option("--direction", cfg.direction, "Incidence direction, e.g. '1,0'");

  auto* gr = app.add_subcommand("green", "Tabulate G(omega + i0, x, source)");
  add_common(gr, true);
  gr->add_option("--source", cfg.source, "Source point y");

  auto* co = app.add_subcommand("correlation", "Tabulate C_omega(x, source)");
  add_common(co, true);
  co->add_option("--source", cfg.source, "Second point y");

  auto* pr = app.add_subcommand("projector", "Compare the two spectral-projector routes");
  add_common(pr, true);
  pr->add_option("--pair", cfg.pair, "Point pair 'x;y'")->required();
  pr->add_option("--omega-minus", cfg.omega_minus, "Window start (default 0.8 omega)");
  pr->add_option("--omega-plus", cfg.omega_plus, "Window end (default 1.2 omega)");
  pr->add_option("--radial-nodes", cfg.radial_nodes, "Gauss-Legendre nodes per route")->check(CLI::PositiveNumber);

  for (auto* sub : {fi, gr, co}) {
    sub->add_option("--points", cfg.points, "Points 'x1,x2;x1,x2;...'");
    sub->add_option("--grid", cfg.grid, "Grid 'lo:hi:n,lo:hi:n[,lo:hi:n]'");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }

  if (!check_path.empty()) return check_report(check_path, out, err);
  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    err << app.help();
    return kUsageError;
  }
  cfg.command = subs.front()->get_name();
  if (cfg.command == "field" && cfg.dimension == 3 && cfg.direction == "1,0") cfg.direction = "1,0,0";

  if (dump_config) {
    out << cfg.to_json().dump(2) << "\n";
    return kPass;
  }
  try {
    if (cfg.command == "verify-scalar") return cmd_verify_scalar(cfg, out);
    if (cfg.command == "verify-elastic") return cmd_verify_elastic(cfg, out);
    if (cfg.command == "field") return cmd_field(cfg, out);
    if (cfg.command == "green") return cmd_green(cfg, out);
    if (cfg.command == "correlation") return cmd_correlation(cfg, out);
    if (cfg.command == "projector") return cmd_projector(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  err << "error: unknown command\n";
  return kUsageError;
}

}  // namespace scattercorr::cli
