#include "robinspec/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "robinspec/boundary_data.hpp"
#include "robinspec/grid.hpp"
#include "robinspec/hypotheses.hpp"
#include "robinspec/multipliers.hpp"
#include "robinspec/operator.hpp"
#include "robinspec/reports.hpp"
#include "robinspec/resolvent.hpp"
#include "robinspec/spectral.hpp"

namespace robinspec {

namespace {

Grid make_grid(const RunConfig& config) {
  return build_grid(config.dim, config.half_width, config.spacing);
}

SolveOptions::Method parse_method(const std::string& name) {
  if (name == "direct") return SolveOptions::Method::kDirect;
  if (name == "iterative") return SolveOptions::Method::kIterative;
  return SolveOptions::Method::kAuto;
}

std::string fmt(double v) { return report_number(v); }

// ---------------------------------------------------------------------------

int cmd_assemble(const RunConfig& config, ReportBundle& bundle, RunResult& result) {
  const Grid grid = make_grid(config);
  const DiscreteOperator op = assemble(grid, config.alpha);
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  const std::string mtx = (fs::path(config.out_dir) / "operator.mtx").string();
  write_matrix_market(op, mtx);
  result.artifacts.push_back(mtx);

  ReportTable table;
  table.name = "operator";
  table.columns = {"field", "value"};
  table.rows = {{"dim", std::to_string(grid.dim)},
                {"half_width", fmt(grid.half_width)},
                {"spacing", fmt(grid.spacing)},
                {"unknowns", std::to_string(op.size())},
                {"boundary_nodes", std::to_string(grid.num_boundary_nodes())},
                {"stiffness_nonzeros", std::to_string(op.stiffness.nonZeros())},
                {"selfadjoint", op.symmetry_flag ? "true" : "false"},
                {"alpha_source", op.alpha.source},
                {"alpha_real", op.alpha.is_real ? "true" : "false"},
                {"alpha_max_abs", fmt(op.alpha.max_abs)}};
  bundle.tables.push_back(std::move(table));
  result.message = "assembled " + std::to_string(op.size()) + " unknowns (" +
                   (op.symmetry_flag ? "selfadjoint" : "non-selfadjoint") + " coupling)";
  return 0;
}

int cmd_eigs(const RunConfig& config, ReportBundle& bundle, RunResult& result) {
  const Grid grid = make_grid(config);
  const DiscreteOperator op = assemble(grid, config.alpha);
  EigOptions opts;
  opts.residual_tolerance = config.eig_residual;
  opts.seed = config.seed;
  Spectrum spectrum = op.symmetry_flag
                          ? eig_selfadjoint(op, config.eig_count, config.eig_shift, opts)
                          : eig_nonselfadjoint(op, lambda_points(config.lambda_grid),
                                               config.eig_count, opts);
  spectrum = classify(std::move(spectrum), grid);
  int localized = 0;
  for (const EigenPair& p : spectrum.pairs) localized += p.localized ? 1 : 0;
  bundle.tables.push_back(spectrum_table(spectrum));
  bundle.tables.push_back(spectrum_meta_table(spectrum));
  result.message = std::to_string(spectrum.pairs.size()) + " eigenpairs (" +
                   std::to_string(localized) + " localized, method " + spectrum.method + ")";
  return 0;
}

int cmd_check(const RunConfig& config, ReportBundle& bundle, RunResult& result) {
  const Grid grid = make_grid(config);
  const BoundaryFunction alpha = sample_alpha(config.alpha, grid);
  HypothesisReport report;
  if (config.check_regime == "selfadjoint") {
    report = check_selfadjoint_hypotheses(alpha, grid);
  } else if (config.check_regime == "smallness") {
    SmallnessOptions opts;
    opts.c_star = config.c_star;
    opts.s_star_override = config.s_star_override;
    report = check_smallness_hypotheses(alpha, grid, opts);
  } else {
    report = check_divergence_hypotheses(alpha, grid);
  }
  bundle.tables.push_back(hypothesis_table(report));
  bundle.tables.push_back(hypothesis_constants_table(report));
  result.message = std::string("verdict ") + (report.pass ? "PASS" : "FAIL") + " (" +
                   report.theorem_id + ")";
  return report.pass ? 0 : 2;
}

int cmd_identities(const RunConfig& config, ReportBundle& bundle, RunResult& result) {
  const Grid coarse_grid = make_grid(config);
  const Grid fine_grid = build_grid(config.dim, config.half_width, config.spacing / 2);
  const double L = config.half_width;

  // Built-in smooth profile: scale-invariant wall decay (the exponents are
  // tied to L), complex polynomial so the imaginary-part balances carry
  // genuine signal.
  BumpProfile profile;
  profile.center[static_cast<std::size_t>(config.dim - 1)] = 0.25 * L;
  profile.tangential_decay = 60.0 / (L * L);
  profile.normal_decay = 60.0 / (L * L);
  profile.poly = {cplx(1.0, 0.0), cplx(0.2, -0.35), cplx(0.0, 0.15)};
  profile.amplitude = cplx(0.9, 0.4);
  const cplx lambda(0.6, 0.25);

  std::vector<IdentityResidualReport> coarse = identity_residuals(
      manufactured_problem(profile, lambda, sample_alpha(config.alpha, coarse_grid), coarse_grid),
      coarse_grid);
  const std::vector<IdentityResidualReport> fine = identity_residuals(
      manufactured_problem(profile, lambda, sample_alpha(config.alpha, fine_grid), fine_grid),
      fine_grid);
  attach_order_estimates(coarse, fine);

  double max_residual = 0;
  double min_order = std::numeric_limits<double>::infinity();
  std::vector<IdentityResidualReport> all = coarse;
  all.insert(all.end(), fine.begin(), fine.end());
  for (const IdentityResidualReport& r : coarse) {
    max_residual = std::max(max_residual, r.residual);
    if (r.order_estimate) min_order = std::min(min_order, *r.order_estimate);
  }
  bundle.tables.push_back(identity_table(all));
  result.message = "max residual " + fmt(max_residual) + " at spacing " + fmt(config.spacing) +
                   ", min order estimate " + fmt(min_order);
  return 0;
}

int cmd_cutoff(const RunConfig& config, ReportBundle& bundle, RunResult& result) {
  const Grid grid = make_grid(config);
  VectorXcd u(grid.num_nodes());
  for (Index r = 0; r < grid.num_nodes(); ++r) u[r] = std::exp(-grid.radial(r));
  const std::vector<CutoffErrorRow> rows = cutoff_errors(u, grid, config.window_radii);
  bundle.tables.push_back(cutoff_table(rows));
  std::ostringstream os;
  os << "eps1 " << fmt(rows.front().eps1) << " -> " << fmt(rows.back().eps1) << " over radii "
     << fmt(rows.front().radius) << " -> " << fmt(rows.back().radius);
  result.message = os.str();
  return 0;
}

int cmd_hardy(const RunConfig& config, ReportBundle& bundle, RunResult& result) {
  const Grid grid = make_grid(config);
  if (grid.dim < 2) {
    throw std::runtime_error(
        "hardy: needs grid.dim >= 2 (weighted variant); grid.dim = 3 adds the unweighted one");
  }
  const auto family = default_bump_family(grid, config.hardy_samples, config.seed);

  ReportTable table;
  table.name = "hardy_ratios";
  table.columns = {"sample", "variant", "ratio"};
  double max_weighted = 0, max_unweighted = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double weighted = hardy_ratio(family[i], grid, HardyVariant::kWeighted);
    max_weighted = std::max(max_weighted, weighted);
    table.rows.push_back({std::to_string(i), "weighted", fmt(weighted)});
    if (grid.dim >= 3) {
      const double unweighted = hardy_ratio(family[i], grid, HardyVariant::kUnweighted);
      max_unweighted = std::max(max_unweighted, unweighted);
      table.rows.push_back({std::to_string(i), "unweighted", fmt(unweighted)});
    }
  }
  bundle.tables.push_back(std::move(table));

  const double weighted_constant = 4.0 / ((grid.dim - 1.0) * (grid.dim - 1.0));
  std::vector<std::pair<std::string, std::string>> summary = {
      {"samples", std::to_string(family.size())},
      {"max_weighted_ratio", fmt(max_weighted)},
      {"weighted_constant", fmt(weighted_constant)},
  };
  if (grid.dim >= 3) {
    summary.emplace_back("max_unweighted_ratio", fmt(max_unweighted));
    summary.emplace_back("unweighted_constant",
                         fmt(4.0 / ((grid.dim - 2.0) * (grid.dim - 2.0))));
  }
  ReportTable summary_table;
  summary_table.name = "hardy_summary";
  summary_table.columns = {"field", "value"};
  for (auto& [k, v] : summary) summary_table.rows.push_back({k, v});
  bundle.tables.push_back(std::move(summary_table));

  result.message = "max weighted ratio " + fmt(max_weighted) + " against constant " +
                   fmt(weighted_constant);
  return 0;
}

int cmd_trace(const RunConfig& config, ReportBundle& bundle, RunResult& result) {
  const Grid grid = make_grid(config);
  if (grid.dim < 2) {
    throw std::runtime_error("trace: needs grid.dim >= 2 (the boundary must be a lattice)");
  }
  const auto family = default_bump_family(grid, config.trace_samples, config.seed);
  ReportTable table;
  table.name = "trace_checks";
  table.columns = {"sample", "trace_norm_sq", "grad_norm_sq", "extension_norm_sq", "dominated"};
  int dominated = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const TraceCheck check = trace_half_norm_check(family[i], grid);
    const bool ok = check.trace_norm_sq <= check.grad_norm_sq;
    dominated += ok ? 1 : 0;
    table.rows.push_back({std::to_string(i), fmt(check.trace_norm_sq), fmt(check.grad_norm_sq),
                          fmt(check.extension_norm_sq), ok ? "true" : "false"});
  }
  bundle.tables.push_back(std::move(table));
  result.message = std::to_string(dominated) + "/" + std::to_string(family.size()) +
                   " traces dominated by the volume energy";
  return 0;
}

HeatmapSpec sweep_heatmap(const SweepResult& sweep_result) {
  std::vector<double> res, ims;
  for (const ResolventSample& s : sweep_result.samples) {
    res.push_back(s.lambda.real());
    ims.push_back(s.lambda.imag());
  }
  const auto uniq = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(res);
  uniq(ims);
  HeatmapSpec heatmap;
  heatmap.name = "sweep_heatmap";
  heatmap.title = "weighted resolvent ratio, max over data family";
  heatmap.x_label = "Re lambda";
  heatmap.y_label = "Im lambda";
  heatmap.xs = res;
  heatmap.ys = ims;
  heatmap.values.assign(ims.size(),
                        std::vector<double>(res.size(), std::numeric_limits<double>::quiet_NaN()));
  for (const ResolventSample& s : sweep_result.samples) {
    const std::size_t ix = static_cast<std::size_t>(
        std::lower_bound(res.begin(), res.end(), s.lambda.real()) - res.begin());
    const std::size_t iy = static_cast<std::size_t>(
        std::lower_bound(ims.begin(), ims.end(), s.lambda.imag()) - ims.begin());
    double& cell = heatmap.values[iy][ix];
    cell = std::isnan(cell) ? s.ratio_weighted : std::max(cell, s.ratio_weighted);
  }
  return heatmap;
}

int cmd_sweep(const RunConfig& config, ReportBundle& bundle, RunResult& result) {
  const Grid grid = make_grid(config);
  const DiscreteOperator op = assemble(grid, config.alpha);
  const std::vector<cplx> shifts = lambda_points(config.lambda_grid);
  const auto family = default_bump_family(grid, config.bump_count, config.seed);
  SweepOptions opts;
  opts.operator_norm_proxy = config.norm_proxy;
  opts.power_steps = config.power_steps;
  opts.solver.target_residual = config.solve_residual;
  opts.solver.method = parse_method(config.solver_method);
  const SweepResult sweep_result = sweep(op, shifts, family, opts);

  bundle.tables.push_back(sweep_sample_table(sweep_result));
  if (config.norm_proxy) bundle.tables.push_back(sweep_norm_table(sweep_result));
  bundle.tables.push_back(sweep_summary_table(sweep_result));
  if (!sweep_result.samples.empty()) bundle.heatmaps.push_back(sweep_heatmap(sweep_result));

  const SweepSummary& s = sweep_result.summary;
  result.message = std::to_string(s.sample_count) + " samples; sup weighted inside " +
                   fmt(s.sup_weighted_inside) + ", outside " + fmt(s.sup_weighted_outside);
  return 0;
}

int cmd_report(const RunConfig& config, ReportBundle& bundle, RunResult& result) {
  RunResult part;  // scratch for the sub-commands' messages
  const int check_code = cmd_check(config, bundle, part);
  const std::string check_message = part.message;
  cmd_eigs(config, bundle, part);
  const std::string eigs_message = part.message;
  cmd_sweep(config, bundle, part);
  const std::string sweep_message = part.message;

  ReportTable overview;
  overview.name = "overview";
  overview.columns = {"stage", "outcome"};
  overview.rows = {{"check", check_message}, {"eigs", eigs_message}, {"sweep", sweep_message}};
  bundle.tables.push_back(std::move(overview));
  result.message = check_message + "; " + eigs_message + "; " + sweep_message;
  return check_code;
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult result;
  try {
    validate(config);
    ReportBundle bundle;
    bundle.command = config.command;
    bundle.timestamp = utc_timestamp();
    bundle.config = resolved_entries(config);

    int code = 0;
    if (config.command == "assemble") {
      code = cmd_assemble(config, bundle, result);
    } else if (config.command == "eigs") {
      code = cmd_eigs(config, bundle, result);
    } else if (config.command == "check") {
      code = cmd_check(config, bundle, result);
    } else if (config.command == "identities") {
      code = cmd_identities(config, bundle, result);
    } else if (config.command == "cutoff") {
      code = cmd_cutoff(config, bundle, result);
    } else if (config.command == "hardy") {
      code = cmd_hardy(config, bundle, result);
    } else if (config.command == "trace") {
      code = cmd_trace(config, bundle, result);
    } else if (config.command == "resolvent-sweep") {
      code = cmd_sweep(config, bundle, result);
    } else {
      code = cmd_report(config, bundle, result);
    }

    const std::vector<std::string> written =
        write_bundle(bundle, config.out_dir, config.formats);
    result.artifacts.insert(result.artifacts.end(), written.begin(), written.end());
    result.exit_code = code;
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.message = e.what();
  }
  return result;
}

}  // namespace robinspec
