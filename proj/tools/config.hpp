#pragma once

#include "fucik/fucik.h"

#include <cstdint>
#include <stdexcept>
#include <string>

/// Run configuration shared by every CLI command.  Values come from built-in
/// defaults, then an optional config file, then command-line flags.
struct RunConfig {
  // [grid]
  std::string shape = "interval"; // interval | rectangle | ball
  double length = 3.14159265358979323846;
  int n = 799;
  double lx = 3.14159265358979323846;
  double ly = 3.14159265358979323846;
  int nx = 199;
  int ny = 199;
  int dimension = 2;
  double radius = 1.0;

  // [solver]
  fucik_params params{};

  // [point]
  double beta = 10.0;

  // [tracer]
  double beta_min = 0.0; // <= 0: default grid
  double beta_max = 0.0;
  int points = 40;
  bool parallel = false;

  // [certify]
  double certify_beta = 100.0;
  double y[3] = {0.5, 0.5, 0.0};
  double alpha_traced; // NaN unless supplied

  // [oracle]
  double oracle_length = 3.14159265358979323846;
  std::string beta_grid; // comma-separated explicit grid, empty: use tracer range

  // [output]
  std::string csv;
  std::string json;
  std::string plot; // prefix for <plot>.curve.dat and <plot>.diag.dat

  RunConfig();
};

struct ConfigError : std::runtime_error {
  int line;
  ConfigError(int line_, const std::string& msg)
      : std::runtime_error(msg), line(line_) {}
};

/// Parse an INI-style file into cfg.  Unknown sections or keys raise
/// ConfigError with the offending line number.
void load_config_file(const std::string& path, RunConfig& cfg);

/// Canonical text form: every key in fixed order, %.17g numbers.  Parsing the
/// output reproduces the config, and serializing again is byte-identical.
std::string canonical_config(const RunConfig& cfg);

/// FNV-1a over the canonical form, as 16 hex digits; embedded in artifacts.
std::string config_hash(const RunConfig& cfg);

std::uint64_t fnv1a(const std::string& text);

/// "a,b" or "a,b,c" into a coordinate; throws ConfigError (line 0) on junk.
void parse_coord_text(const std::string& text, double out[3]);
