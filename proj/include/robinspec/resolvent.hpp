#pragma once

#include <string>
#include <vector>

#include "robinspec/boundary_data.hpp"
#include "robinspec/grid.hpp"
#include "robinspec/operator.hpp"
#include "robinspec/types.hpp"

namespace robinspec {

/// How a shifted solve went and how much to trust it.
struct SolverDiag {
  /// 1-norm condition estimate of K - lambda W (direct path; 0 when the
  /// iterative path ran, which has no factorization to probe).
  double condition_estimate = 0;
  /// Refinement steps (direct path) or cumulative Krylov iterations.
  int iterations = 0;
  /// Certified relative residual ||(A - lambda)u - f||_W / ||f||_W, measured
  /// independently of the solver after the last correction.
  double residual = 0;
  std::string method;  // "sparse_lu" or "bicgstab_jacobi"
};

struct ResolventSolution {
  VectorXcd u;  // full-grid field, zero on the top wall
  SolverDiag diag;
  std::vector<std::string> warnings;
};

struct SolveOptions {
  enum class Method { kAuto, kDirect, kIterative };
  Method method = Method::kAuto;
  /// kAuto solves directly up to this many unknowns, iteratively above.
  Index direct_limit = 70000;
  double target_residual = 1e-10;
  int max_refinement = 6;      // direct-path iterative refinement steps
  int max_iterations = 50000;  // Krylov cap per solve
  /// Direct path: condition estimates beyond this are treated as singular.
  double failure_condition = 1e14;
  /// Shifts closer than 1e-10 to one of these get a warning on the solution.
  std::vector<cplx> known_eigenvalues;
};

/// Solve (A - lambda) u = f, i.e. (K - lambda W) u = W f on the reduced
/// unknowns, for a full-grid right-hand side. Sparse LU with iterative
/// refinement by default; diagonal-preconditioned BiCGSTAB for systems too
/// large to factor. Throws when the factorization fails or the condition
/// estimate marks the shifted matrix as numerically singular.
ResolventSolution solve(const DiscreteOperator& op, cplx lambda, const VectorXcd& f_full,
                        const SolveOptions& options = {});

/// Inside: |Im lambda| <= Re lambda (the cone reaching into the continuum).
enum class SectorTag { kInside, kOutside };

/// One measured point of the weighted resolvent estimates.
struct ResolventSample {
  cplx lambda;
  /// ||r^{-1} u||_W / ||r f||_W with r(x) = |x| (the half-line wall node is
  /// excluded from the singular numerator, matching the quadrature of the
  /// other singular-weight sums).
  double ratio_weighted = 0;
  /// ||grad u^-||_2 / ||r f||_W inside the cone (phase-twisted field; plain u
  /// when Im lambda = 0), ||grad u||_2 / ||r f||_W outside.
  double ratio_gradient = 0;
  SectorTag sector_tag = SectorTag::kOutside;
  SolverDiag solver_diag;  // filled by sweep; zeroed when computed standalone
};

/// Ratios for a field u that solves the shifted system with data f. A zero
/// denominator ||r f|| with a nonzero field is an undefined-ratio error; the
/// all-zero pair reports zero ratios.
ResolventSample weighted_estimate(const VectorXcd& u_full, const VectorXcd& f_full, cplx lambda,
                                  const Grid& grid);

/// Mass bound ||u||^2 <= |Im lambda|^{-1} (sum_boundary |Im alpha| |u|^2 +
/// sum |f| |u|): both sides by quadrature, margin = rhs - lhs.
struct L2BoundCheck {
  double lhs = 0;
  double rhs = 0;
  double margin = 0;
};

L2BoundCheck l2_bound_check(const VectorXcd& u_full, const VectorXcd& f_full, cplx lambda,
                            const BoundaryFunction& alpha, const Grid& grid);

/// Per-shift operator-norm measurement against the self-adjoint benchmark.
struct LambdaNormRow {
  cplx lambda;
  /// Largest W-norm singular value of the resolvent, by power iteration on
  /// the normal operator (adjoint solves via conjugation: K is symmetric).
  double opnorm_proxy = 0;
  double inv_distance = 0;  // 1 / dist(lambda, [0, infinity))
  int power_steps = 0;
};

struct SweepOptions {
  /// Shifts closer than this to a known eigenvalue are skipped (noted).
  double exclusion_radius = 1e-3;
  std::vector<cplx> known_eigenvalues;
  bool operator_norm_proxy = false;
  int power_steps = 80;
  SolveOptions solver;
};

struct SweepSummary {
  Index sample_count = 0;
  double sup_weighted_inside = 0;
  double sup_weighted_outside = 0;
  double sup_gradient_inside = 0;
  double sup_gradient_outside = 0;
  std::vector<LambdaNormRow> operator_norms;
  std::vector<std::string> notes;  // skipped shifts, solve failures
  bool no_op = false;              // the shift list was empty
};

struct SweepResult {
  std::vector<ResolventSample> samples;
  SweepSummary summary;
};

/// Solve every (shift, right-hand side) pair, one factorization per shift,
/// and measure the weighted estimates. Duplicate shifts are deduplicated;
/// failures are recorded in the summary notes and the sweep continues.
SweepResult sweep(const DiscreteOperator& op, const std::vector<cplx>& lambdas,
                  const std::vector<VectorXcd>& f_family, const SweepOptions& options = {});

/// Reproducible family of smooth Gaussian right-hand sides. The profile
/// parameters are drawn from the seed before any grid evaluation, so the same
/// seed yields the same continuum functions across resolutions of one box.
std::vector<VectorXcd> default_bump_family(const Grid& grid, int count = 20,
                                           unsigned seed = 20260819u);

/// Rectangle of shifts (re_count x im_count, inclusive endpoints).
std::vector<cplx> lambda_rectangle(double re_min, double re_max, int re_count, double im_min,
                                   double im_max, int im_count);

}  // namespace robinspec
