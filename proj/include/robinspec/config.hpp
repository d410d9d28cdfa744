#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robinspec/types.hpp"

namespace robinspec {

/// Rectangle of complex shifts with inclusive endpoints. `mirror` adds the
/// complex conjugate of every point with a nonzero imaginary part, so a grid
/// over the upper half-plane covers both signs of damping.
struct LambdaGridSpec {
  double re_min = -3.0;
  double re_max = 3.0;
  int re_count = 7;
  double im_min = 0.5;
  double im_max = 2.0;
  int im_count = 4;
  bool mirror = true;
};

/// Expand the rectangle into concrete shifts, row-major over (re, im), each
/// mirrored point following its original. Deterministic order.
std::vector<cplx> lambda_points(const LambdaGridSpec& spec);

/// Everything one tool run depends on: the command, the discretization, the
/// boundary coupling, solver tolerances, embedding constants, the shift
/// grid, sampling controls, and output routing. Field defaults are the
/// documented defaults of the config schema.
struct RunConfig {
  std::string command;

  int dim = 1;                // grid.dim   (alias grid.n)
  double half_width = 10.0;   // grid.half_width (alias grid.L)
  double spacing = 0.05;      // grid.spacing    (alias grid.h)

  std::string alpha = "constant:c=-1";  // boundary-coupling spec string

  double eig_residual = 1e-8;      // solver.eig_residual
  double solve_residual = 1e-10;   // solver.solve_residual
  std::string solver_method = "auto";  // solver.method: auto|direct|iterative
  int eig_count = 6;               // eigs.count
  double eig_shift = -2.0;         // eigs.shift (real-symmetric search center)

  double c_star = 1.0;                     // constants.c_star
  std::optional<double> s_star_override;   // constants.s_star

  std::string check_regime = "selfadjoint";  // check.regime: selfadjoint|smallness|divergence

  LambdaGridSpec lambda_grid;  // lambda.*

  std::vector<double> window_radii = {2.0, 4.0, 8.0};  // cutoff.radii
  int hardy_samples = 200;  // hardy.samples
  int trace_samples = 100;  // trace.samples
  int bump_count = 20;      // sweep.bumps
  bool norm_proxy = false;  // sweep.norm_proxy
  int power_steps = 80;     // sweep.power_steps

  unsigned seed = 20260819u;  // seed
  int jobs = 1;               // jobs
  std::string out_dir = "out";                     // output.dir
  std::vector<std::string> formats = {"csv", "json"};  // output.formats
};

/// Read a config file into `config` (auto-detected by extension: .toml for
/// the line-based subset documented in the README, .json for a JSON object,
/// nested objects flattened with dots). Unknown keys, malformed values, and
/// type mismatches throw std::runtime_error naming the file and the line
/// (TOML) or field (JSON).
void load_config_file(const std::string& path, RunConfig& config);

/// Apply one `key=value` override using the same keys and value grammar as
/// the TOML subset. Throws std::runtime_error on unknown keys or bad values.
void apply_override(RunConfig& config, const std::string& assignment);

/// Range-check every field (positive spacing, dim in [1,3], ordered lambda
/// bounds, known command/regime/method/format names, ...). Throws
/// std::runtime_error naming the offending field.
void validate(const RunConfig& config);

/// Deterministic flat key=value view of every field, in fixed schema order;
/// reports embed it so a run can be reproduced from its artifacts.
std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& config);

}  // namespace robinspec
