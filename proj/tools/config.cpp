#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

RunConfig::RunConfig() {
  fucik_params_init(&params);
  alpha_traced = std::numeric_limits<double>::quiet_NaN();
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError(line, "expected a number, got '" + v + "'");
  return x;
}

int parse_int(const std::string& v, int line) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError(line, "expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(line, "expected true/false, got '" + v + "'");
}

void parse_coord(const std::string& v, double out[3], int line) {
  out[0] = out[1] = out[2] = 0.0;
  std::istringstream ss(v);
  std::string part;
  int i = 0;
  while (std::getline(ss, part, ',')) {
    if (i >= 3) throw ConfigError(line, "coordinate has more than 3 components");
    out[i++] = parse_double(trim(part), line);
  }
  if (i < 1) throw ConfigError(line, "empty coordinate");
}

void apply_key(RunConfig& c, const std::string& sec, const std::string& key,
               const std::string& val, int line) {
  auto unknown = [&]() -> ConfigError {
    return ConfigError(line, "unknown key '" + key + "' in section [" + sec + "]");
  };
  if (sec == "grid") {
    if (key == "shape") {
      if (val != "interval" && val != "rectangle" && val != "ball")
        throw ConfigError(line, "shape must be interval, rectangle or ball");
      c.shape = val;
    } else if (key == "length") c.length = parse_double(val, line);
    else if (key == "n") c.n = parse_int(val, line);
    else if (key == "lx") c.lx = parse_double(val, line);
    else if (key == "ly") c.ly = parse_double(val, line);
    else if (key == "nx") c.nx = parse_int(val, line);
    else if (key == "ny") c.ny = parse_int(val, line);
    else if (key == "dimension") c.dimension = parse_int(val, line);
    else if (key == "radius") c.radius = parse_double(val, line);
    else throw unknown();
  } else if (sec == "solver") {
    if (key == "fiber_tol") c.params.fiber_tol = parse_double(val, line);
    else if (key == "stat_tol") c.params.stat_tol = parse_double(val, line);
    else if (key == "point_tol") c.params.point_tol = parse_double(val, line);
    else if (key == "armijo") c.params.armijo = parse_double(val, line);
    else if (key == "max_iter") c.params.max_iter = parse_int(val, line);
    else if (key == "eps_initial") c.params.eps_initial = parse_double(val, line);
    else if (key == "eps_decay") c.params.eps_decay = parse_double(val, line);
    else if (key == "eps_floor") c.params.eps_floor = parse_double(val, line);
    else if (key == "guard") c.params.guard = parse_double(val, line);
    else if (key == "spectral_pairs") c.params.spectral_pairs = parse_int(val, line);
    else if (key == "eig_tol") c.params.eig_tol = parse_double(val, line);
    else throw unknown();
  } else if (sec == "point") {
    if (key == "beta") c.beta = parse_double(val, line);
    else throw unknown();
  } else if (sec == "tracer") {
    if (key == "beta_min") c.beta_min = parse_double(val, line);
    else if (key == "beta_max") c.beta_max = parse_double(val, line);
    else if (key == "points") c.points = parse_int(val, line);
    else if (key == "parallel") c.parallel = parse_bool(val, line);
    else throw unknown();
  } else if (sec == "certify") {
    if (key == "beta") c.certify_beta = parse_double(val, line);
    else if (key == "y") parse_coord(val, c.y, line);
    else if (key == "alpha") c.alpha_traced = parse_double(val, line);
    else throw unknown();
  } else if (sec == "oracle") {
    if (key == "length") c.oracle_length = parse_double(val, line);
    else if (key == "beta_grid") c.beta_grid = val;
    else throw unknown();
  } else if (sec == "output") {
    if (key == "csv") c.csv = val;
    else if (key == "json") c.json = val;
    else if (key == "plot") c.plot = val;
    else throw unknown();
  } else {
    throw ConfigError(line, "unknown section [" + sec + "]");
  }
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

} // namespace

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in.good()) throw ConfigError(0, "cannot open config file " + path);
  std::string line, sec;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(lineno, "unterminated section header");
      sec = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected key = value");
    if (sec.empty()) throw ConfigError(lineno, "key before any [section]");
    apply_key(cfg, sec, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), lineno);
  }
}

std::string canonical_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[grid]\n"
     << "shape = " << c.shape << "\n"
     << "length = " << fmt(c.length) << "\n"
     << "n = " << c.n << "\n"
     << "lx = " << fmt(c.lx) << "\n"
     << "ly = " << fmt(c.ly) << "\n"
     << "nx = " << c.nx << "\n"
     << "ny = " << c.ny << "\n"
     << "dimension = " << c.dimension << "\n"
     << "radius = " << fmt(c.radius) << "\n"
     << "[solver]\n"
     << "fiber_tol = " << fmt(c.params.fiber_tol) << "\n"
     << "stat_tol = " << fmt(c.params.stat_tol) << "\n"
     << "point_tol = " << fmt(c.params.point_tol) << "\n"
     << "armijo = " << fmt(c.params.armijo) << "\n"
     << "max_iter = " << c.params.max_iter << "\n"
     << "eps_initial = " << fmt(c.params.eps_initial) << "\n"
     << "eps_decay = " << fmt(c.params.eps_decay) << "\n"
     << "eps_floor = " << fmt(c.params.eps_floor) << "\n"
     << "guard = " << fmt(c.params.guard) << "\n"
     << "spectral_pairs = " << c.params.spectral_pairs << "\n"
     << "eig_tol = " << fmt(c.params.eig_tol) << "\n"
     << "[point]\n"
     << "beta = " << fmt(c.beta) << "\n"
     << "[tracer]\n"
     << "beta_min = " << fmt(c.beta_min) << "\n"
     << "beta_max = " << fmt(c.beta_max) << "\n"
     << "points = " << c.points << "\n"
     << "parallel = " << (c.parallel ? "true" : "false") << "\n"
     << "[certify]\n"
     << "beta = " << fmt(c.certify_beta) << "\n"
     << "y = " << fmt(c.y[0]) << "," << fmt(c.y[1]) << "," << fmt(c.y[2]) << "\n";
  if (!std::isnan(c.alpha_traced)) os << "alpha = " << fmt(c.alpha_traced) << "\n";
  os << "[oracle]\n"
     << "length = " << fmt(c.oracle_length) << "\n"
     << "beta_grid = " << c.beta_grid << "\n"
     << "[output]\n"
     << "csv = " << c.csv << "\n"
     << "json = " << c.json << "\n"
     << "plot = " << c.plot << "\n";
  return os.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(canonical_config(cfg))));
  return buf;
}

void parse_coord_text(const std::string& text, double out[3]) { parse_coord(text, out, 0); }
