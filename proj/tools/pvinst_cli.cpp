// Command-line front end: integrate / map / shoot / analyze / verify.
//
// Output conventions:
//   - CSV cells use %.16e (17 significant digits), so files round-trip
//     losslessly and identical configurations produce identical bytes.
//   - JSON mirrors the same values (non-finite numbers serialize as null).
//   - Exit codes: 0 success, 1 usage error, 2..14 library status codes,
//     15 verification-suite failure (table in --help).
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pvinst/pvinst.h"

namespace {

using nlohmann::json;

constexpr const char* kFooter =
    "Exit codes:\n"
    "  0  success                      8  division-by-zero\n"
    "  1  usage error                  9  sign-inconsistency\n"
    "  2  invalid-argument            10  non-convergence\n"
    "  3  domain-error                11  bracket-failure\n"
    "  4  pole-error                  12  insufficient-window\n"
    "  5  blow-up                     13  extrapolation-unstable\n"
    "  6  step-underflow              14  io-error\n"
    "  7  degenerate-branch           15  verification failure\n"
    "\n"
    "A JSON object passed via --config supplies defaults for any long option\n"
    "of the chosen subcommand (explicit flags win), e.g.\n"
    "  {\"preset\": \"hopf\", \"t0\": 0.5, \"t-end\": 0.9}\n";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

int fail_usage(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  return 1;
}

int fail_status(int rc, const std::string& context) {
  std::fprintf(stderr, "error (%s) in %s: %s\n", pvinst_status_name(rc), context.c_str(),
               pvinst_last_error());
  return rc;
}

int fail_io(const std::string& path, const std::string& what) {
  std::fprintf(stderr, "error (io-error): %s: %s\n", path.c_str(), what.c_str());
  return PVINST_IO_ERROR;
}

struct Output {
  std::FILE* f = nullptr;
  bool owned = false;

  ~Output() {
    if (owned && f) std::fclose(f);
  }
  bool open(const std::string& path) {
    if (path.empty() || path == "-") {
      f = stdout;
      return true;
    }
    f = std::fopen(path.c_str(), "wb");
    owned = true;
    return f != nullptr;
  }
};

bool parse_triple(const std::string& text, double out[3]) {
  std::stringstream ss(text);
  std::string cell;
  int i = 0;
  while (std::getline(ss, cell, ',')) {
    if (i >= 3) return false;
    try {
      size_t pos = 0;
      out[i] = std::stod(cell, &pos);
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
      if (pos != cell.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
    ++i;
  }
  return i == 3;
}

// Table emitted as CSV (17-digit scientific) or as a {columns, rows} JSON object.
int emit_table(const std::string& path, const std::string& format,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  Output out;
  if (!out.open(path)) return fail_io(path, std::strerror(errno));
  if (format == "csv") {
    std::string line;
    for (size_t i = 0; i < columns.size(); ++i) {
      if (i) line += ',';
      line += columns[i];
    }
    line += '\n';
    std::fputs(line.c_str(), out.f);
    for (const auto& row : rows) {
      line.clear();
      for (size_t i = 0; i < row.size(); ++i) {
        if (i) line += ',';
        line += fmt17(row[i]);
      }
      line += '\n';
      std::fputs(line.c_str(), out.f);
    }
  } else {
    json j;
    j["columns"] = columns;
    j["rows"] = rows;
    const std::string text = j.dump(2) + "\n";
    std::fputs(text.c_str(), out.f);
  }
  if (std::fflush(out.f) != 0) return fail_io(path, std::strerror(errno));
  return 0;
}

int emit_json(const std::string& path, const json& j) {
  Output out;
  if (!out.open(path)) return fail_io(path, std::strerror(errno));
  const std::string text = j.dump(2) + "\n";
  std::fputs(text.c_str(), out.f);
  if (std::fflush(out.f) != 0) return fail_io(path, std::strerror(errno));
  return 0;
}

/* ----------------------------------------------- trajectory source flags -- */

struct SourceOpts {
  std::string preset;
  std::string a_text;
  double t0 = 0.0;
  double t_end = 0.0;
  double tol = 1e-10;
  double theta = 1.0;
};

void add_source_flags(CLI::App* cmd, SourceOpts& src) {
  cmd->add_option("--preset", src.preset,
                  "Initial state preset: octahedral, hopf, degenerate-a1, degenerate-a2");
  cmd->add_option("--a", src.a_text, "Initial coefficients a1,a2,a3 (comma separated)");
  cmd->add_option("--t0", src.t0, "Initial parameter value in (0,1)")->required();
  cmd->add_option("--t-end", src.t_end, "Final parameter value in (0,1)")->required();
  cmd->add_option("--tol", src.tol, "Integrator tolerance")->capture_default_str();
  cmd->add_option("--theta", src.theta, "Scale for the degenerate presets")->capture_default_str();
}

int build_trajectory(const SourceOpts& src, pvinst_trajectory** out) {
  if (src.preset.empty() == src.a_text.empty())
    return fail_usage("exactly one of --preset and --a is required");
  double a0[3] = {0.0, 0.0, 0.0};
  if (!src.preset.empty()) {
    const int rc = pvinst_closed_form(src.preset.c_str(), src.theta, src.t0, a0);
    if (rc) return fail_status(rc, "preset evaluation");
  } else if (!parse_triple(src.a_text, a0)) {
    return fail_usage("--a expects exactly three comma-separated numbers");
  }
  const int rc = pvinst_integrate(src.t0, a0, src.t_end, src.tol, out);
  if (rc) return fail_status(rc, "integration");
  return 0;
}

/* ------------------------------------------------------------- integrate -- */

struct IntegrateOpts {
  SourceOpts src;
  std::string format = "csv";
  std::string output = "-";
  long long samples = 0;  // 0: emit integrator nodes
};

int run_integrate(const IntegrateOpts& o) {
  pvinst_trajectory* traj = nullptr;
  int rc = build_trajectory(o.src, &traj);
  if (rc) return rc;

  std::vector<std::vector<double>> rows;
  auto push_row = [&](double t, const double a[3]) -> int {
    double q = 0.0;
    const int qrc = pvinst_conserved_quantity(t, a, &q);
    if (qrc) return fail_status(qrc, "conserved quantity");
    rows.push_back({t, a[0], a[1], a[2], q});
    return 0;
  };

  if (o.samples > 1) {
    for (long long i = 0; i < o.samples && rc == 0; ++i) {
      const double t =
          o.src.t0 + (o.src.t_end - o.src.t0) * static_cast<double>(i) /
                         static_cast<double>(o.samples - 1);
      double a[3];
      rc = pvinst_trajectory_eval(traj, t, a);
      if (rc) {
        rc = fail_status(rc, "trajectory evaluation");
        break;
      }
      rc = push_row(t, a);
    }
  } else {
    const size_t n = pvinst_trajectory_size(traj);
    for (size_t i = 0; i < n && rc == 0; ++i) {
      double t, a[3];
      rc = pvinst_trajectory_node(traj, i, &t, a);
      if (rc) {
        rc = fail_status(rc, "trajectory node");
        break;
      }
      rc = push_row(t, a);
    }
  }
  pvinst_trajectory_free(traj);
  if (rc) return rc;
  return emit_table(o.output, o.format, {"t", "a1", "a2", "a3", "conserved_quantity"}, rows);
}

/* -------------------------------------------------------------------- map -- */

struct MapOpts {
  SourceOpts src;
  std::string format = "csv";
  std::string output = "-";
  int sign_choice = -1;
  int theta_sign = +1;
};

int run_map(const MapOpts& o) {
  if (o.sign_choice != 1 && o.sign_choice != -1)
    return fail_usage("--sign-choice must be +1 or -1");
  pvinst_trajectory* traj = nullptr;
  int rc = build_trajectory(o.src, &traj);
  if (rc) return rc;

  pvinst_samples* samples = nullptr;
  rc = pvinst_map_trajectory(traj, o.theta_sign, o.sign_choice, &samples);
  pvinst_trajectory_free(traj);
  if (rc) return fail_status(rc, "map");

  std::vector<std::vector<double>> rows;
  const size_t n = pvinst_samples_size(samples);
  for (size_t i = 0; i < n; ++i) {
    double t, x, y[2], dy[2], res;
    rc = pvinst_samples_get(samples, i, &t, &x, y, dy, &res);
    if (rc) {
      rc = fail_status(rc, "sample access");
      break;
    }
    rows.push_back({t, x, y[0], y[1], dy[0], dy[1], res});
  }
  pvinst_samples_free(samples);
  if (rc) return rc;
  return emit_table(o.output, o.format,
                    {"t", "x", "y_re", "y_im", "dy_dx_re", "dy_dx_im", "residual"}, rows);
}

/* ------------------------------------------------------------------ shoot -- */

struct ShootOpts {
  double r_minus = 1.0;
  double c = std::numeric_limits<double>::quiet_NaN();
  double target = std::numeric_limits<double>::quiet_NaN();
  double eps_start = 0.0;  // 0: library default
  double eps_end = 0.0;
  double tol = 0.0;
  double target_tol = 1e-6;
  std::string output = "-";
};

int run_shoot(const ShootOpts& o) {
  const bool have_c = !std::isnan(o.c);
  const bool have_target = !std::isnan(o.target);
  if (have_c == have_target)
    return fail_usage("exactly one of --c and --target-r-plus is required");

  pvinst_shoot_result* result = nullptr;
  int rc = have_c ? pvinst_shoot(o.c, o.r_minus, o.eps_start, o.eps_end, o.tol, &result)
                  : pvinst_solve_for_target(o.target, o.r_minus, o.target_tol, o.eps_start,
                                            o.eps_end, &result);
  if (rc) return fail_status(rc, have_c ? "shoot" : "target solve");

  double c, r_plus, r_plus_err, theta_sq, theta[2];
  double cfg_c, cfg_r_minus, cfg_eps_start, cfg_eps_end, cfg_tol;
  rc = pvinst_shoot_result_values(result, &c, &r_plus, &r_plus_err, &theta_sq, theta);
  if (rc == 0)
    rc = pvinst_shoot_result_config(result, &cfg_c, &cfg_r_minus, &cfg_eps_start,
                                    &cfg_eps_end, &cfg_tol);
  pvinst_shoot_result_free(result);
  if (rc) return fail_status(rc, "shoot result access");

  json j;
  j["c"] = c;
  j["r_minus"] = cfg_r_minus;
  j["r_plus"] = r_plus;
  j["r_plus_error_estimate"] = r_plus_err;
  j["theta"] = theta[0];
  if (theta[1] != 0.0) j["theta_im"] = theta[1];
  j["theta_squared"] = theta_sq;
  j["eps_start"] = cfg_eps_start;
  j["eps_end"] = cfg_eps_end;
  j["tol"] = cfg_tol;
  if (have_target) {
    j["target_r_plus"] = o.target;
    j["target_tol"] = o.target_tol;
  }
  return emit_json(o.output, j);
}

/* ---------------------------------------------------------------- analyze -- */

struct AnalyzeOpts {
  std::string input;
  std::string point = "infinity";
  std::string output = "-";
  long long max_denominator = 24;
  double rational_tol = 1e-3;
};

int read_solution_csv(const std::string& path, std::vector<double>& xs,
                      std::vector<double>& yre, std::vector<double>& yim, bool& has_im) {
  std::ifstream in(path);
  if (!in) return fail_io(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) return fail_io(path, "empty file");

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  auto col = [&](const std::string& name) -> int {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int cx = col("x");
  int cyre = col("y_re");
  if (cyre < 0) cyre = col("y");
  const int cyim = col("y_im");
  if (cx < 0 || cyre < 0)
    return fail_io(path, "header must contain columns 'x' and 'y_re' (or 'y')");
  has_im = cyim >= 0;

  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cells;
    bool bad = false;
    while (std::getline(ss, cell, ',')) {
      try {
        cells.push_back(std::stod(cell));
      } catch (const std::exception&) {
        bad = true;
        break;
      }
    }
    const int needed = std::max(cx, std::max(cyre, cyim));
    if (bad || static_cast<int>(cells.size()) <= needed)
      return fail_io(path, "malformed row at line " + std::to_string(lineno));
    xs.push_back(cells[cx]);
    yre.push_back(cells[cyre]);
    yim.push_back(has_im ? cells[cyim] : 0.0);
  }
  return 0;
}

int run_analyze(const AnalyzeOpts& o) {
  std::vector<double> xs, yre, yim;
  bool has_im = false;
  int rc = read_solution_csv(o.input, xs, yre, yim, has_im);
  if (rc) return rc;

  pvinst_fit_record fit;
  rc = pvinst_fit_exponent(xs.data(), yre.data(), has_im ? yim.data() : nullptr, xs.size(),
                           o.point.c_str(), &fit);
  if (rc) return fail_status(rc, "exponent fit");

  long long p = 0, q = 0;
  int in_range = 0, found = 0;
  rc = pvinst_rationality_test(fit.exponent, o.max_denominator, o.rational_tol, &p, &q,
                               &in_range, &found);
  if (rc) return fail_status(rc, "rationality test");

  int verdict = 0;
  rc = pvinst_algebraicity_verdict(0.0, &fit, 1, nullptr, &verdict);
  if (rc) return fail_status(rc, "verdict");

  json j;
  j["point"] = o.point;
  j["exponent"] = fit.exponent;
  j["amplitude_re"] = fit.amplitude[0];
  j["amplitude_im"] = fit.amplitude[1];
  j["fit_residual"] = fit.fit_residual;
  j["window_min"] = fit.window_min;
  j["window_max"] = fit.window_max;
  j["power_law"] = fit.power_law != 0;
  j["sample_count"] = xs.size();
  if (found) {
    j["rational"] = {{"p", p}, {"q", q}, {"in_unit_range", in_range != 0}};
  } else {
    j["rational"] = nullptr;
  }
  j["verdict"] = pvinst_verdict_name(verdict);
  return emit_json(o.output, j);
}

/* ----------------------------------------------------------------- verify -- */

struct VerifyState {
  int total = 0;
  int failures = 0;
};

void verify_print(const char* name, int passed, const char* detail, void* user) {
  auto* st = static_cast<VerifyState*>(user);
  ++st->total;
  if (!passed) ++st->failures;
  std::printf("%-4s  %-44s  %s\n", passed ? "PASS" : "FAIL", name, detail);
}

int run_verify() {
  VerifyState st;
  const int rc = pvinst_self_check(verify_print, &st, nullptr);
  if (rc) return fail_status(rc, "verification suite");
  std::printf("%d checks, %d failed\n", st.total, st.failures);
  return st.failures == 0 ? 0 : 15;
}

/* ----------------------------------------------------------------- config -- */

// Extracts --config <file> / --config=<file>, then injects the JSON object's
// entries as long options that were not given explicitly.
int apply_config(std::vector<std::string>& args) {
  std::string path;
  for (size_t i = 0; i < args.size();) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) return fail_usage("--config expects a file path");
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      ++i;
    }
  }
  if (path.empty()) return 0;

  std::ifstream in(path);
  if (!in) return fail_io(path, "cannot open config");
  json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    return fail_usage("config " + path + " is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) return fail_usage("config " + path + " must hold a JSON object");

  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    bool given = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
    if (given) continue;
    args.push_back(flag);
    if (value.is_string())
      args.push_back(value.get<std::string>());
    else
      args.push_back(value.dump());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  {
    const int rc = apply_config(args);
    if (rc) return rc;
  }

  CLI::App app{"Reduced self-dual instanton flows and their Painleve VI images"};
  app.footer(kFooter);
  app.require_subcommand(1);
  int exit_code = 0;

  IntegrateOpts io;
  CLI::App* integrate = app.add_subcommand("integrate", "Integrate the reduced system");
  add_source_flags(integrate, io.src);
  integrate->add_option("--samples", io.samples, "Resample onto a uniform grid of N points");
  integrate->add_option("--format", io.format, "Output format: csv or json")->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  integrate->add_option("--output", io.output, "Output path ('-' for stdout)")->capture_default_str();
  integrate->callback([&] { exit_code = run_integrate(io); });

  MapOpts mo;
  CLI::App* map = app.add_subcommand("map", "Map a trajectory to a Painleve VI solution");
  add_source_flags(map, mo.src);
  map->add_option("--sign-choice", mo.sign_choice,
                  "Parameter-family sign in alpha = (theta -+ 2)^2/8: -1 or +1")->capture_default_str();
  map->add_option("--theta-sign", mo.theta_sign, "Square-root branch for theta")->capture_default_str();
  map->add_option("--format", mo.format, "Output format: csv or json")->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  map->add_option("--output", mo.output, "Output path ('-' for stdout)")->capture_default_str();
  map->callback([&] { exit_code = run_map(mo); });

  ShootOpts so;
  CLI::App* shoot = app.add_subcommand("shoot", "Solve the singular boundary-value problem");
  shoot->add_option("--r-minus", so.r_minus, "Boundary value at t=1 (>= 1)")->required();
  shoot->add_option("--c", so.c, "Boundary amplitude (fixed-c shot)");
  shoot->add_option("--target-r-plus", so.target, "Target limit at t=0 in [0,1]");
  shoot->add_option("--eps-start", so.eps_start, "Series handoff offset at t=1");
  shoot->add_option("--eps-end", so.eps_end, "Smallest t reached");
  shoot->add_option("--tol", so.tol, "Integrator tolerance");
  shoot->add_option("--target-tol", so.target_tol, "Match tolerance for --target-r-plus")->capture_default_str();
  shoot->add_option("--output", so.output, "Output path ('-' for stdout)")->capture_default_str();
  shoot->callback([&] { exit_code = run_shoot(so); });

  AnalyzeOpts ao;
  CLI::App* analyze = app.add_subcommand("analyze", "Fit critical behaviour of a solution file");
  analyze->add_option("--input", ao.input, "CSV with columns x and y_re (or y)")->required();
  analyze->add_option("--point", ao.point, "Critical point: zero, one or infinity")->capture_default_str()
      ->check(CLI::IsMember({"zero", "one", "infinity"}));
  analyze->add_option("--max-denominator", ao.max_denominator,
                      "Denominator bound for exponent rationality")->capture_default_str();
  analyze->add_option("--rational-tol", ao.rational_tol,
                      "Tolerance for exponent rationality")->capture_default_str();
  analyze->add_option("--output", ao.output, "Output path ('-' for stdout)")->capture_default_str();
  analyze->callback([&] { exit_code = run_analyze(ao); });

  CLI::App* verify = app.add_subcommand("verify", "Run the built-in invariant suite");
  verify->callback([&] { exit_code = run_verify(); });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return exit_code;
}
