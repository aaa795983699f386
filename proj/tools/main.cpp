#include "CLI11.hpp"
#include "config.hpp"
#include "fucik/fucik.h"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <vector>

using nlohmann::json;

namespace {

struct DomainDel {
  void operator()(fucik_domain* d) const { fucik_domain_destroy(d); }
};
struct ProblemDel {
  void operator()(fucik_problem* p) const { fucik_problem_destroy(p); }
};
struct TraceDel {
  void operator()(fucik_trace* t) const { fucik_trace_destroy(t); }
};
using DomainH = std::unique_ptr<fucik_domain, DomainDel>;
using ProblemH = std::unique_ptr<fucik_problem, ProblemDel>;
using TraceH = std::unique_ptr<fucik_trace, TraceDel>;

std::string take_string(char* s) {
  std::string out = s == nullptr ? "" : s;
  fucik_string_free(s);
  return out;
}

int emit_error(int code, const std::string& status, const std::string& message) {
  json j;
  j["error"] = {{"status", status}, {"message", message}};
  std::fprintf(stderr, "%s\n", j.dump().c_str());
  return code;
}

int emit_api_error(fucik_status st) {
  return emit_error(1, fucik_status_name(st), fucik_last_error());
}

#define CHECK_API(call)                       \
  do {                                        \
    const fucik_status st_ = (call);          \
    if (st_ != FUCIK_OK) return emit_api_error(st_); \
  } while (0)

fucik_status make_domain(const RunConfig& c, DomainH& out) {
  fucik_domain* d = nullptr;
  fucik_status st;
  if (c.shape == "interval") st = fucik_domain_interval(c.length, c.n, &d);
  else if (c.shape == "rectangle") st = fucik_domain_rectangle(c.lx, c.ly, c.nx, c.ny, &d);
  else st = fucik_domain_ball(c.dimension, c.radius, c.n, &d);
  out.reset(d);
  return st;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<size_t>(i)] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / double(n - 1));
  return g;
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return out.good();
}

// Embed the run provenance as a leading comment; readers skip comment lines.
bool prepend_comment(const std::string& path, const std::string& comment) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return false;
  std::stringstream body;
  body << in.rdbuf();
  in.close();
  return write_text(path, "# " + comment + "\n" + body.str());
}

json domain_provenance(const fucik_domain* d, const RunConfig& cfg) {
  char* s = nullptr;
  json dom;
  if (fucik_domain_describe(d, &s) == FUCIK_OK) dom = json::parse(take_string(s));
  dom["config_hash"] = config_hash(cfg);
  return dom;
}

void print_point(const fucik_point& q) {
  std::printf("beta=%.10g alpha=%.10g mu=%.6g residual=%.3g iterations=%d converged=%s\n", q.beta,
              q.alpha, q.mu, q.residual, q.iterations, q.converged ? "yes" : "no");
}

int write_json_artifact(const RunConfig& cfg, json j) {
  if (cfg.json.empty()) return 0;
  j["config_hash"] = config_hash(cfg);
  if (!write_text(cfg.json, j.dump(2) + "\n"))
    return emit_error(1, "io-error", "cannot write " + cfg.json);
  return 0;
}

int run_eig(const RunConfig& cfg) {
  DomainH d;
  CHECK_API(make_domain(cfg, d));
  ProblemH p;
  {
    fucik_problem* raw = nullptr;
    CHECK_API(fucik_problem_create(d.get(), &raw));
    p.reset(raw);
  }
  double l1 = 0.0, l2 = 0.0;
  CHECK_API(fucik_problem_eigenvalues(p.get(), &l1, &l2));
  std::printf("lambda1=%.12g lambda2=%.12g\n", l1, l2);
  json j;
  j["command"] = "eig";
  j["domain"] = domain_provenance(d.get(), cfg);
  j["lambda1"] = l1;
  j["lambda2"] = l2;
  return write_json_artifact(cfg, std::move(j));
}

int run_point(const RunConfig& cfg) {
  DomainH d;
  CHECK_API(make_domain(cfg, d));
  ProblemH p;
  {
    fucik_problem* raw = nullptr;
    CHECK_API(fucik_problem_create(d.get(), &raw));
    p.reset(raw);
  }
  fucik_point q{};
  CHECK_API(fucik_solve_point(p.get(), cfg.beta, &cfg.params, &q));
  print_point(q);
  char* s = nullptr;
  CHECK_API(fucik_solve_point_json(p.get(), cfg.beta, &cfg.params, &s));
  json j;
  j["command"] = "point";
  j["domain"] = domain_provenance(d.get(), cfg);
  j["result"] = json::parse(take_string(s));
  if (const int rc = write_json_artifact(cfg, std::move(j)); rc != 0) return rc;
  return q.converged ? 0 : 1;
}

int trace_common(const RunConfig& cfg, const DomainH& d, const ProblemH& p, TraceH& tr) {
  std::vector<double> grid;
  if (cfg.beta_min > 0.0 && cfg.beta_max > cfg.beta_min && cfg.points >= 2) {
    grid = geometric_grid(cfg.beta_min, cfg.beta_max, cfg.points);
  } else {
    double* buf = nullptr;
    size_t count = 0;
    CHECK_API(fucik_trace_default_grid(p.get(), cfg.points, &buf, &count));
    grid.assign(buf, buf + count);
    fucik_buffer_free(buf);
  }
  fucik_trace* raw = nullptr;
  CHECK_API(fucik_trace_curve(p.get(), grid.data(), grid.size(), &cfg.params,
                              cfg.parallel ? 1 : 0, &raw));
  tr.reset(raw);

  bool all_converged = true;
  for (size_t i = 0; i < fucik_trace_size(tr.get()); ++i) {
    fucik_point q{};
    CHECK_API(fucik_trace_get(tr.get(), i, &q));
    print_point(q);
    all_converged = all_converged && q.converged != 0;
  }
  if (!cfg.csv.empty()) {
    CHECK_API(fucik_trace_write_csv(tr.get(), cfg.csv.c_str()));
    if (!prepend_comment(cfg.csv, "config=" + config_hash(cfg)))
      return emit_error(1, "io-error", "cannot annotate " + cfg.csv);
  }
  if (!cfg.plot.empty())
    CHECK_API(fucik_trace_emit_plot(tr.get(), (cfg.plot + ".curve.dat").c_str(),
                                    (cfg.plot + ".diag.dat").c_str()));
  if (!cfg.json.empty()) {
    char* s = nullptr;
    CHECK_API(fucik_trace_to_json(tr.get(), &s));
    json j;
    j["command"] = "trace";
    j["domain"] = domain_provenance(d.get(), cfg);
    j["trace"] = json::parse(take_string(s));
    if (const int rc = write_json_artifact(cfg, std::move(j)); rc != 0) return rc;
  }
  return all_converged ? 0 : 1;
}

int run_trace(const RunConfig& cfg) {
  DomainH d;
  CHECK_API(make_domain(cfg, d));
  ProblemH p;
  {
    fucik_problem* raw = nullptr;
    CHECK_API(fucik_problem_create(d.get(), &raw));
    p.reset(raw);
  }
  TraceH tr;
  const int rc = trace_common(cfg, d, p, tr);
  if (rc != 0 && !tr) return rc; // hard failure before the trace existed
  fucik_check mono{};
  CHECK_API(fucik_check_monotone(tr.get(), 2.0 * cfg.params.point_tol, &mono));
  std::printf("check monotone: %s (%s)\n", mono.pass ? "PASS" : "FAIL", mono.detail);
  return (rc == 0 && mono.pass) ? 0 : 1;
}

int run_certify(const RunConfig& cfg) {
  DomainH d;
  CHECK_API(make_domain(cfg, d));
  ProblemH p;
  {
    fucik_problem* raw = nullptr;
    CHECK_API(fucik_problem_create(d.get(), &raw));
    p.reset(raw);
  }
  double bound = 0.0;
  char* s = nullptr;
  CHECK_API(fucik_certify(p.get(), cfg.certify_beta, cfg.y, cfg.alpha_traced, &bound, &s));
  const std::string report = take_string(s);
  std::printf("certify: bound=%.10g at beta=%.10g\n", bound, cfg.certify_beta);
  std::printf("%s\n", report.c_str());
  json j;
  j["command"] = "certify";
  j["domain"] = domain_provenance(d.get(), cfg);
  j["certificate"] = json::parse(report);
  return write_json_artifact(cfg, std::move(j));
}

int run_oracle(const RunConfig& cfg) {
  std::vector<double> grid;
  if (!cfg.beta_grid.empty()) {
    std::istringstream ss(cfg.beta_grid);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        grid.push_back(std::stod(part));
      } catch (const std::exception&) {
        return emit_error(2, "invalid-argument", "bad beta_grid entry '" + part + "'");
      }
    }
  } else {
    const double lam1 = std::pow(3.14159265358979323846 / cfg.oracle_length, 2.0);
    const double lo = cfg.beta_min > 0.0 ? cfg.beta_min : 4.1 * lam1;
    const double hi = cfg.beta_max > lo ? cfg.beta_max : 100.0 * lam1;
    grid = geometric_grid(lo, hi, cfg.points);
  }
  std::ostringstream table;
  table << "beta,alpha_analytic,alpha_shooting\n";
  double worst = 0.0;
  for (double b : grid) {
    double a = 0.0, ash = 0.0;
    CHECK_API(fucik_oracle_analytic(cfg.oracle_length, b, &a));
    CHECK_API(fucik_oracle_shoot(cfg.oracle_length, b, &ash));
    const double rel = std::abs(ash - a) / a;
    worst = std::max(worst, rel);
    std::printf("beta=%.10g analytic=%.10g shooting=%.10g rel=%.3g\n", b, a, ash, rel);
    char row[128];
    std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g\n", b, a, ash);
    table << row;
  }
  if (!cfg.csv.empty()) {
    if (!write_text(cfg.csv, "# config=" + config_hash(cfg) + "\n" + table.str()))
      return emit_error(1, "io-error", "cannot write " + cfg.csv);
  }
  std::printf("oracle: max relative disagreement %.3g over %zu points: %s\n", worst, grid.size(),
              worst <= 1e-6 ? "PASS" : "FAIL");
  return worst <= 1e-6 ? 0 : 1;
}

int run_validate(const RunConfig& cfg, double rtol) {
  if (cfg.shape != "interval")
    return emit_error(2, "invalid-argument", "validate compares against the 1D oracle; set shape=interval");
  RunConfig local = cfg;
  const double lam1 = std::pow(3.14159265358979323846 / cfg.length, 2.0);
  if (!(local.beta_min > 0.0 && local.beta_max > local.beta_min)) {
    local.beta_min = 4.5 * lam1;
    local.beta_max = 40.0 * lam1;
  }
  DomainH d;
  CHECK_API(make_domain(local, d));
  ProblemH p;
  {
    fucik_problem* raw = nullptr;
    CHECK_API(fucik_problem_create(d.get(), &raw));
    p.reset(raw);
  }
  TraceH tr;
  const int rc = trace_common(local, d, p, tr);
  if (!tr) return rc;
  double worst = 0.0;
  bool all = true;
  for (size_t i = 0; i < fucik_trace_size(tr.get()); ++i) {
    fucik_point q{};
    CHECK_API(fucik_trace_get(tr.get(), i, &q));
    double a = 0.0;
    CHECK_API(fucik_oracle_analytic(local.length, q.beta, &a));
    const double rel = std::abs(q.alpha - a) / a;
    worst = std::max(worst, rel);
    all = all && q.converged != 0;
  }
  const bool pass = all && worst <= rtol;
  std::printf("validate: max relative error %.4g over %zu points (tol %.3g): %s\n", worst,
              fucik_trace_size(tr.get()), rtol, pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"first nontrivial Fucik curve: solves, traces, certificates, oracles"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::string config_path;
  bool print_config = false;
  app.add_option("--config", config_path, "INI config file; flags override file values");
  app.add_flag("--print-config", print_config, "print the canonical config and exit");

  std::optional<std::string> shape, csv, jsonp, plot;
  std::optional<double> length, lx, ly, radius, point_tol, stat_tol, eps_floor, eig_tol;
  std::optional<int> n, nx, ny, dim, max_iter;
  app.add_option("--shape", shape)->check(CLI::IsMember({"interval", "rectangle", "ball"}));
  app.add_option("--length", length, "interval length");
  app.add_option("--n", n, "interior nodes per axis (interval, ball)");
  app.add_option("--lx", lx);
  app.add_option("--ly", ly);
  app.add_option("--nx", nx);
  app.add_option("--ny", ny);
  app.add_option("--dim", dim, "ball dimension (2 or 3)");
  app.add_option("--radius", radius, "ball radius");
  app.add_option("--point-tol", point_tol);
  app.add_option("--stat-tol", stat_tol);
  app.add_option("--eps-floor", eps_floor);
  app.add_option("--eig-tol", eig_tol);
  app.add_option("--max-iter", max_iter);
  app.add_option("--csv", csv, "CSV artifact path");
  app.add_option("--json", jsonp, "JSON artifact path");
  app.add_option("--plot", plot, "plot data path prefix");

  auto* cmd_eig = app.add_subcommand("eig", "lowest Dirichlet eigenvalues of the domain");
  auto* cmd_point = app.add_subcommand("point", "solve one curve point");
  std::optional<double> beta;
  cmd_point->add_option("--beta", beta);
  auto* cmd_trace = app.add_subcommand("trace", "trace the curve over a beta grid");
  std::optional<double> bmin, bmax;
  std::optional<int> pts;
  bool parallel = false;
  cmd_trace->add_option("--beta-min", bmin);
  cmd_trace->add_option("--beta-max", bmax);
  cmd_trace->add_option("--points", pts);
  cmd_trace->add_flag("--parallel", parallel, "cold-start points in parallel");
  auto* cmd_cert = app.add_subcommand("certify", "upper bound from an explicit competitor");
  std::optional<double> cbeta, calpha;
  std::optional<std::string> ytext;
  cmd_cert->add_option("--beta", cbeta);
  cmd_cert->add_option("--y", ytext, "bump center, e.g. 0.5,0.5");
  cmd_cert->add_option("--alpha", calpha, "traced alpha to report the margin against");
  auto* cmd_oracle = app.add_subcommand("oracle", "1D analytic vs shooting table");
  std::optional<std::string> bgrid;
  std::optional<double> olength;
  std::optional<int> opts;
  cmd_oracle->add_option("--beta-grid", bgrid, "comma-separated betas");
  cmd_oracle->add_option("--length", olength);
  cmd_oracle->add_option("--points", opts);
  auto* cmd_validate = app.add_subcommand("validate", "trace vs 1D oracle");
  double rtol = 0.01;
  std::optional<double> vbmin, vbmax;
  std::optional<int> vpts;
  cmd_validate->add_option("--rtol", rtol);
  cmd_validate->add_option("--beta-min", vbmin);
  cmd_validate->add_option("--beta-max", vbmax);
  cmd_validate->add_option("--points", vpts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return emit_error(2, "invalid-argument", std::string("argument error: ") + e.what());
  }

  RunConfig cfg;
  if (!config_path.empty()) {
    try {
      load_config_file(config_path, cfg);
    } catch (const ConfigError& e) {
      return emit_error(2, "invalid-argument",
                        config_path + ":" + std::to_string(e.line) + ": " + e.what());
    }
  }
  if (shape) cfg.shape = *shape;
  if (length) cfg.length = *length;
  if (n) cfg.n = *n;
  if (lx) cfg.lx = *lx;
  if (ly) cfg.ly = *ly;
  if (nx) cfg.nx = *nx;
  if (ny) cfg.ny = *ny;
  if (dim) cfg.dimension = *dim;
  if (radius) cfg.radius = *radius;
  if (point_tol) cfg.params.point_tol = *point_tol;
  if (stat_tol) cfg.params.stat_tol = *stat_tol;
  if (eps_floor) cfg.params.eps_floor = *eps_floor;
  if (eig_tol) cfg.params.eig_tol = *eig_tol;
  if (max_iter) cfg.params.max_iter = *max_iter;
  if (csv) cfg.csv = *csv;
  if (jsonp) cfg.json = *jsonp;
  if (plot) cfg.plot = *plot;
  if (beta) cfg.beta = *beta;
  if (bmin) cfg.beta_min = *bmin;
  if (bmax) cfg.beta_max = *bmax;
  if (pts) cfg.points = *pts;
  if (parallel) cfg.parallel = true;
  if (cbeta) cfg.certify_beta = *cbeta;
  if (calpha) cfg.alpha_traced = *calpha;
  if (ytext) {
    try {
      parse_coord_text(*ytext, cfg.y);
    } catch (const ConfigError& e) {
      return emit_error(2, "invalid-argument", std::string("--y: ") + e.what());
    }
  }
  if (bgrid) cfg.beta_grid = *bgrid;
  if (olength) cfg.oracle_length = *olength;
  if (opts) cfg.points = *opts;
  if (vbmin) cfg.beta_min = *vbmin;
  if (vbmax) cfg.beta_max = *vbmax;
  if (vpts) cfg.points = *vpts;

  if (print_config) {
    std::fputs(canonical_config(cfg).c_str(), stdout);
    return 0;
  }

  if (cmd_eig->parsed()) return run_eig(cfg);
  if (cmd_point->parsed()) return run_point(cfg);
  if (cmd_trace->parsed()) return run_trace(cfg);
  if (cmd_cert->parsed()) return run_certify(cfg);
  if (cmd_oracle->parsed()) return run_oracle(cfg);
  if (cmd_validate->parsed()) return run_validate(cfg, rtol);
  return emit_error(2, "invalid-argument", "no command given");
}
