// Command-line front end: evaluates the gradient constants, runs angle
// sweeps and conjecture scans, and executes the verification suites.
//
// Output is deterministic: the same invocation (including seeds) produces
// byte-identical bytes. All floating-point values are printed with 17
// significant digits; non-finite values appear as null in JSON and as an
// empty field in CSV.
//
// Exit codes: 0 on success (and all-pass for verify), 2 on usage or domain
// errors, 3 on numerical failure (tolerance not met or a failing suite).

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "khav/analysis.hpp"
#include "khav/errors.hpp"
#include "khav/kernels.hpp"
#include "khav/representations.hpp"
#include "khav/sphere_sampling.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// deterministic emission helpers
// ---------------------------------------------------------------------------

std::string fmt_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_csv_double(double v) {
  if (!std::isfinite(v)) return "";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string jstr(const std::string& v) {
  std::string s = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') s += '\\';
    s += c;
  }
  return s + "\"";
}

std::string jint(long long v) { return std::to_string(v); }

std::string juint(std::uint64_t v) { return std::to_string(v); }

std::string jbool(bool v) { return v ? "true" : "false"; }

using KV = std::pair<std::string, std::string>;

std::string jobj(const std::vector<KV>& kvs) {
  std::string s = "{";
  bool first = true;
  for (const auto& kv : kvs) {
    if (!first) s += ",";
    first = false;
    s += "\"" + kv.first + "\":" + kv.second;
  }
  return s + "}";
}

std::string jarr(const std::vector<std::string>& items) {
  std::string s = "[";
  bool first = true;
  for (const auto& it : items) {
    if (!first) s += ",";
    first = false;
    s += it;
  }
  return s + "]";
}

const char* kCsvHeader = "command,n,rho,tau,method,value,err_est,seed\n";

struct CsvRow {
  std::string command;
  std::string n;
  std::string rho;
  std::string tau;
  std::string method;
  std::string value;
  std::string err_est;
  std::string seed;
};

void emit_csv(const std::vector<CsvRow>& rows) {
  std::string out = kCsvHeader;
  for (const auto& r : rows) {
    out += r.command + "," + r.n + "," + r.rho + "," + r.tau + "," + r.method +
           "," + r.value + "," + r.err_est + "," + r.seed + "\n";
  }
  std::fputs(out.c_str(), stdout);
}

void emit_json(const std::string& doc) {
  std::fputs(doc.c_str(), stdout);
  std::fputc('\n', stdout);
}

// ---------------------------------------------------------------------------
// shared argument bundles
// ---------------------------------------------------------------------------

struct ConstantArgs {
  int n = 0;
  double rho = std::numeric_limits<double>::quiet_NaN();
  double tau = 0.0;
  std::vector<double> x;
  std::vector<double> ell;
  std::string method = "final";
  std::string domain = "ball";
  std::string format = "json";
  std::string scheme = "mc";
  std::size_t samples = 200000;
  std::uint64_t seed = 0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

struct SweepArgs {
  int n = 3;
  double rho = 0.0;
  int grid = 33;
  std::string format = "json";
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

struct ConjectureArgs {
  int n = 3;
  std::vector<double> rho_list;
  int grid = 17;
  std::string format = "json";
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

struct VerifyArgs {
  std::string suite;
  int n = 3;
  double rho = 1.0;
  double k_param = 0.0;  // 0 = default (3n-2)/4
  double a = -1.0;       // <0 = default (3n-2)/4
  double b = 1.0;
  double z_max = 20.0;
  double y_max = 20.0;
  int grid = 401;
  double tol = 1e-6;
  std::uint64_t seed = 12345;
  std::string format = "json";
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

bool method_uses_samples(const std::string& m) {
  return m == "oracle" || m == "moebius_mc";
}

int run_constant(const ConstantArgs& args) {
  khav::QuadratureConfig cfg;
  cfg.rel_tol = args.rel_tol;
  cfg.abs_tol = args.abs_tol;

  if (args.domain == "halfspace") {
    if (!args.x.empty() || !args.ell.empty() || !std::isnan(args.rho)) {
      throw khav::domain_error(
          "constant: --domain halfspace takes --n and --tau only");
    }
    if (args.n < 3) {
      throw khav::domain_error("constant: halfspace requires --n >= 3");
    }
    const khav::ConstantResult r = khav::c_halfspace(args.n, args.tau, cfg);
    if (args.format == "csv") {
      emit_csv({{"constant", jint(args.n), "", fmt_csv_double(args.tau),
                 "halfspace", fmt_csv_double(r.value),
                 fmt_csv_double(r.err_est), ""}});
    } else {
      emit_json(jobj({
          {"command", jstr("constant")},
          {"inputs", jobj({{"domain", jstr("halfspace")},
                           {"n", jint(args.n)},
                           {"tau", fmt_double(args.tau)},
                           {"rel_tol", fmt_double(args.rel_tol)},
                           {"abs_tol", fmt_double(args.abs_tol)}})},
          {"results", jarr({jobj({{"name", jstr("C")},
                                  {"value", fmt_double(r.value)},
                                  {"err_est", fmt_double(r.err_est)}})})},
      }));
    }
    return 0;
  }
  if (args.domain != "ball") {
    throw khav::domain_error("constant: --domain must be ball or halfspace");
  }

  khav::ProblemPoint pp = [&] {
    if (!args.x.empty() || !args.ell.empty()) {
      if (args.n != 0 || !std::isnan(args.rho)) {
        throw khav::domain_error(
            "constant: give either --x/--ell or --n/--rho/--tau, not both");
      }
      return khav::canonicalize(args.x, args.ell);
    }
    if (args.n == 0 || std::isnan(args.rho)) {
      throw khav::domain_error(
          "constant: --n and --rho are required (or use --x/--ell)");
    }
    return khav::ProblemPoint(args.n, args.rho, args.tau);
  }();

  khav::ConstantResult r;
  std::uint64_t used_seed = 0;
  bool sampled = false;
  if (args.method == "final") {
    r = khav::c_final(pp, cfg);
  } else if (args.method == "double1") {
    r = khav::c_double1(pp, cfg);
  } else if (args.method == "double2") {
    r = khav::c_double2(pp, cfg);
  } else if (args.method == "moebius") {
    r = khav::c_moebius(pp, cfg);
  } else if (method_uses_samples(args.method)) {
    const khav::SphereScheme scheme = (args.scheme == "grid")
                                          ? khav::SphereScheme::latlong_grid
                                          : khav::SphereScheme::monte_carlo;
    if (args.scheme != "grid" && args.scheme != "mc") {
      throw khav::domain_error("constant: --scheme must be mc or grid");
    }
    const khav::SphereSamples samples(pp.n(), args.samples, scheme, args.seed);
    sampled = true;
    used_seed = args.seed;
    r = (args.method == "oracle") ? khav::c_sphere_oracle(pp, samples)
                                  : khav::c_moebius_mc(pp, samples);
  } else {
    throw khav::domain_error(
        "constant: --method must be one of final, double1, double2, moebius, "
        "moebius_mc, oracle");
  }

  const bool interior = pp.rho() < 1.0;
  const double unscaled = interior ? r.value / (1.0 - pp.rho()) : 0.0;
  const double unscaled_err = interior ? r.err_est / (1.0 - pp.rho()) : 0.0;

  if (args.format == "csv") {
    std::vector<CsvRow> rows;
    rows.push_back({"constant", jint(pp.n()), fmt_csv_double(pp.rho()),
                    fmt_csv_double(pp.tau()), args.method,
                    fmt_csv_double(r.value), fmt_csv_double(r.err_est),
                    sampled ? juint(used_seed) : ""});
    emit_csv(rows);
  } else {
    std::vector<KV> inputs = {{"domain", jstr("ball")},
                              {"method", jstr(args.method)},
                              {"n", jint(pp.n())},
                              {"rho", fmt_double(pp.rho())},
                              {"tau", fmt_double(pp.tau())},
                              {"rel_tol", fmt_double(args.rel_tol)},
                              {"abs_tol", fmt_double(args.abs_tol)}};
    if (sampled) {
      inputs.push_back({"samples", jint(static_cast<long long>(args.samples))});
      inputs.push_back({"seed", juint(used_seed)});
      inputs.push_back({"scheme", jstr(args.scheme)});
    }
    std::vector<std::string> results;
    results.push_back(jobj({{"name", jstr("C")},
                            {"value", fmt_double(r.value)},
                            {"err_est", fmt_double(r.err_est)}}));
    if (interior) {
      results.push_back(jobj({{"name", jstr("script_C")},
                              {"value", fmt_double(unscaled)},
                              {"err_est", fmt_double(unscaled_err)}}));
    }
    emit_json(jobj({{"command", jstr("constant")},
                    {"inputs", jobj(inputs)},
                    {"results", jarr(results)}}));
  }
  return 0;
}

int run_sweep(const SweepArgs& args) {
  khav::QuadratureConfig cfg;
  cfg.rel_tol = args.rel_tol;
  cfg.abs_tol = args.abs_tol;
  const khav::SweepResult r = khav::sweep_tau(args.n, args.rho, args.grid, cfg);
  if (args.format == "csv") {
    std::vector<CsvRow> rows;
    for (const auto& s : r.samples) {
      rows.push_back({"sweep", jint(args.n), fmt_csv_double(args.rho),
                      fmt_csv_double(s.tau), "final", fmt_csv_double(s.value),
                      "", ""});
    }
    emit_csv(rows);
  } else {
    std::vector<std::string> samples;
    for (const auto& s : r.samples) {
      samples.push_back(jobj(
          {{"tau", fmt_double(s.tau)}, {"value", fmt_double(s.value)}}));
    }
    emit_json(jobj({
        {"command", jstr("sweep")},
        {"inputs", jobj({{"n", jint(args.n)},
                         {"rho", fmt_double(args.rho)},
                         {"grid", jint(args.grid)},
                         {"rel_tol", fmt_double(args.rel_tol)},
                         {"abs_tol", fmt_double(args.abs_tol)}})},
        {"samples", jarr(samples)},
        {"radial_value", fmt_double(r.radial_value)},
        {"tangential_value", fmt_double(r.tangential_value)},
        {"argmax_tau", fmt_double(r.argmax_tau)},
        {"argmax_value", fmt_double(r.argmax_value)},
        {"conjecture_holds", jbool(r.conjecture_holds)},
    }));
  }
  return 0;
}

int run_conjecture(const ConjectureArgs& args) {
  if (args.rho_list.empty()) {
    throw khav::domain_error("conjecture: --rho-list is required");
  }
  khav::QuadratureConfig cfg;
  cfg.rel_tol = args.rel_tol;
  cfg.abs_tol = args.abs_tol;
  const khav::ConjectureScan scan =
      khav::conjecture_scan(args.n, args.rho_list, args.grid, cfg);
  if (args.format == "csv") {
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < scan.rhos.size(); ++i) {
      const auto& s = scan.sweeps[i];
      rows.push_back({"conjecture", jint(args.n), fmt_csv_double(scan.rhos[i]),
                      fmt_csv_double(s.argmax_tau), "final",
                      fmt_csv_double(s.argmax_value), "", ""});
    }
    emit_csv(rows);
  } else {
    std::vector<std::string> sweeps;
    for (std::size_t i = 0; i < scan.rhos.size(); ++i) {
      const auto& s = scan.sweeps[i];
      sweeps.push_back(jobj({
          {"rho", fmt_double(scan.rhos[i])},
          {"radial_value", fmt_double(s.radial_value)},
          {"tangential_value", fmt_double(s.tangential_value)},
          {"argmax_tau", fmt_double(s.argmax_tau)},
          {"argmax_value", fmt_double(s.argmax_value)},
          {"conjecture_holds", jbool(s.conjecture_holds)},
      }));
    }
    emit_json(jobj({
        {"command", jstr("conjecture")},
        {"inputs", jobj({{"n", jint(args.n)},
                         {"grid", jint(args.grid)},
                         {"rel_tol", fmt_double(args.rel_tol)},
                         {"abs_tol", fmt_double(args.abs_tol)}})},
        {"sweeps", jarr(sweeps)},
        {"rho_star", fmt_double(scan.rho_star)},
    }));
  }
  return 0;
}

int run_verify(const VerifyArgs& args) {
  khav::QuadratureConfig cfg;
  cfg.rel_tol = args.rel_tol;
  cfg.abs_tol = args.abs_tol;
  const double k_default = (3.0 * args.n - 2.0) / 4.0;
  const double K = (args.k_param > 0.0) ? args.k_param : k_default;
  const double a = (args.a >= 0.0) ? args.a : k_default;

  khav::VerificationReport rep;
  if (args.suite == "zero_integral") {
    const std::vector<double> rhos{0.0, 0.3, 0.7, 0.9, 0.99};
    const std::vector<double> taus{0.0, kPi / 6.0, kPi / 4.0, kPi / 3.0,
                                   kPi / 2.0};
    rep = khav::verify_zero_integral(args.n, rhos, taus, cfg);
  } else if (args.suite == "cross_methods") {
    const std::vector<int> ns{3, 4, 5};
    const std::vector<double> rhos{0.0, 0.3, 0.7, 0.9, 0.99};
    const std::vector<double> taus{0.0, kPi / 6.0, kPi / 4.0, kPi / 3.0,
                                   kPi / 2.0};
    rep = khav::verify_cross_methods(ns, rhos, taus, args.tol, cfg);
  } else if (args.suite == "hypergeometric") {
    rep = khav::verify_hypergeometric(args.seed);
  } else if (args.suite == "km_inequality") {
    rep = khav::verify_km_inequality(3, std::max(3, args.n), args.y_max,
                                     args.grid);
  } else if (args.suite == "p1_inequality") {
    rep = khav::verify_p1_inequality(3, std::max(3, args.n), args.z_max,
                                     args.grid);
  } else if (args.suite == "ineq_rho") {
    rep = khav::verify_ineq_rho(args.n, args.rho, K, args.z_max, args.grid,
                                cfg);
  } else if (args.suite == "extremal_lemma") {
    rep = khav::verify_extremal_lemma(args.n, a, args.b, cfg);
  } else {
    throw khav::domain_error(
        "verify: --suite must be one of zero_integral, cross_methods, "
        "hypergeometric, km_inequality, p1_inequality, ineq_rho, "
        "extremal_lemma");
  }

  if (args.format == "csv") {
    std::vector<CsvRow> rows;
    for (const auto& pt : rep.grid) {
      double n_val = std::numeric_limits<double>::quiet_NaN();
      double rho_val = std::numeric_limits<double>::quiet_NaN();
      double tau_val = std::numeric_limits<double>::quiet_NaN();
      for (const auto& kv : pt.params) {
        if (kv.first == "n") n_val = kv.second;
        if (kv.first == "rho") rho_val = kv.second;
        if (kv.first == "tau") tau_val = kv.second;
      }
      rows.push_back({"verify",
                      std::isnan(n_val)
                          ? ""
                          : jint(static_cast<long long>(n_val)),
                      fmt_csv_double(rho_val), fmt_csv_double(tau_val),
                      rep.name, fmt_csv_double(pt.residual),
                      pt.pass ? "1" : "0", ""});
    }
    emit_csv(rows);
  } else {
    std::vector<std::string> points;
    for (const auto& pt : rep.grid) {
      std::vector<KV> params;
      for (const auto& kv : pt.params) {
        params.push_back({kv.first, fmt_double(kv.second)});
      }
      points.push_back(jobj({{"params", jobj(params)},
                             {"residual", fmt_double(pt.residual)},
                             {"pass", jbool(pt.pass)}}));
    }
    emit_json(jobj({
        {"command", jstr("verify")},
        {"suite", jstr(rep.name)},
        {"inputs", jobj({{"n", jint(args.n)},
                         {"rel_tol", fmt_double(args.rel_tol)},
                         {"abs_tol", fmt_double(args.abs_tol)},
                         {"seed", juint(args.seed)}})},
        {"points", jarr(points)},
        {"worst_residual", fmt_double(rep.worst_residual)},
        {"all_pass", jbool(rep.all_pass)},
    }));
  }
  return rep.all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sharp gradient-estimate constants for bounded harmonic functions on "
      "the unit ball and half-space"};
  app.require_subcommand(1);

  ConstantArgs cargs;
  CLI::App* c = app.add_subcommand(
      "constant", "evaluate C(x; ell) by one of the integral routes");
  c->add_option("--n", cargs.n, "dimension (>= 2; >= 3 for most methods)");
  c->add_option("--rho", cargs.rho, "radius |x| in [0, 1]");
  c->add_option("--tau", cargs.tau,
                "angle between ell and the radial direction, in [0, pi/2]");
  c->add_option("--x", cargs.x, "evaluation point (comma separated)")
      ->delimiter(',');
  c->add_option("--ell", cargs.ell, "unit direction (comma separated)")
      ->delimiter(',');
  c->add_option("--method", cargs.method,
                "final | double1 | double2 | moebius | moebius_mc | oracle");
  c->add_option("--domain", cargs.domain, "ball | halfspace");
  c->add_option("--format", cargs.format, "json | csv");
  c->add_option("--samples", cargs.samples, "sample count (sampling methods)");
  c->add_option("--seed", cargs.seed, "RNG seed (sampling methods)");
  c->add_option("--scheme", cargs.scheme, "mc | grid (sampling methods)");
  c->add_option("--rel-tol", cargs.rel_tol, "quadrature relative tolerance");
  c->add_option("--abs-tol", cargs.abs_tol, "quadrature absolute tolerance");

  SweepArgs sargs;
  CLI::App* s = app.add_subcommand(
      "sweep", "profile tau -> C(n, rho, tau) over [0, pi/2]");
  s->add_option("--n", sargs.n, "dimension (>= 3)")->required();
  s->add_option("--rho", sargs.rho, "radius in [0, 1]")->required();
  s->add_option("--grid", sargs.grid, "number of grid angles (>= 2)");
  s->add_option("--format", sargs.format, "json | csv");
  s->add_option("--rel-tol", sargs.rel_tol, "quadrature relative tolerance");
  s->add_option("--abs-tol", sargs.abs_tol, "quadrature absolute tolerance");

  ConjectureArgs jargs;
  CLI::App* j = app.add_subcommand(
      "conjecture", "sweep several radii and locate where the radial "
                    "direction dominates");
  j->add_option("--n", jargs.n, "dimension (>= 3)")->required();
  j->add_option("--rho-list", jargs.rho_list, "radii (comma separated)")
      ->required()
      ->delimiter(',');
  j->add_option("--grid", jargs.grid, "grid angles per sweep");
  j->add_option("--format", jargs.format, "json | csv");
  j->add_option("--rel-tol", jargs.rel_tol, "quadrature relative tolerance");
  j->add_option("--abs-tol", jargs.abs_tol, "quadrature absolute tolerance");

  VerifyArgs vargs;
  CLI::App* v = app.add_subcommand("verify", "run a verification suite");
  v->add_option("--suite", vargs.suite,
                "zero_integral | cross_methods | hypergeometric | "
                "km_inequality | p1_inequality | ineq_rho | extremal_lemma")
      ->required();
  v->add_option("--n", vargs.n, "dimension (suite dependent)");
  v->add_option("--rho", vargs.rho, "radius (ineq_rho)");
  v->add_option("--K", vargs.k_param, "majorant curvature (ineq_rho)");
  v->add_option("--a", vargs.a, "majorant slope a (extremal_lemma)");
  v->add_option("--b", vargs.b, "majorant offset b (extremal_lemma)");
  v->add_option("--z-max", vargs.z_max, "grid half-width (p1/ineq_rho)");
  v->add_option("--y-max", vargs.y_max, "grid half-width (km)");
  v->add_option("--grid", vargs.grid, "grid size (inequality suites)");
  v->add_option("--tol", vargs.tol, "agreement tolerance (cross_methods)");
  v->add_option("--seed", vargs.seed, "seed (hypergeometric)");
  v->add_option("--format", vargs.format, "json | csv");
  v->add_option("--rel-tol", vargs.rel_tol, "quadrature relative tolerance");
  v->add_option("--abs-tol", vargs.abs_tol, "quadrature absolute tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(c)) return run_constant(cargs);
    if (app.got_subcommand(s)) return run_sweep(sargs);
    if (app.got_subcommand(j)) return run_conjecture(jargs);
    if (app.got_subcommand(v)) return run_verify(vargs);
  } catch (const khav::accuracy_error& e) {
    std::cerr << "numerical failure: " << e.what()
              << " (partial value " << fmt_double(e.partial_value())
              << ", err est " << fmt_double(e.err_est()) << ")\n";
    return 3;
  } catch (const khav::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
