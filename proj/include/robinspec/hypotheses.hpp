#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robinspec/boundary_data.hpp"
#include "robinspec/fourier.hpp"
#include "robinspec/grid.hpp"
#include "robinspec/types.hpp"

namespace robinspec {

struct ConditionVerdict {
  std::string id;
  bool pass = false;
  double margin = 0;  // signed distance to the failure boundary; negative = fail
  std::string detail;
};

/// Outcome of one eigenvalue-absence hypothesis set. theorem_id names the
/// regime by what it assumes: "selfadjoint_repulsive" (real nonincreasing
/// coupling), "fractional_smallness" (sectorial coupling with small weighted
/// fractional norms), "imaginary_divergence" (sectorial coupling with small
/// imaginary drift). pass is the conjunction of all condition verdicts.
struct HypothesisReport {
  std::string theorem_id;
  std::vector<ConditionVerdict> conditions;
  bool pass = false;
  double c_star = 0;
  double s_star = 0;
  double script_s_star = 0;
  double b1 = 0;
  double b2 = 0;
  double smallness_value = 0;
  double supremal_c_star = 0;  // largest coefficient constant that would still pass
  std::string b2_method;
  std::vector<std::string> warnings;
};

/// Sharp constants of the homogeneous boundary embeddings, closed form.
/// s_star: |f|_{L^q} <= s_star |(-Delta)^{1/4} f|_{L^2} with q = 2d/(d-1),
/// d = boundary_dim >= 2. script_s_star: |f|_{L^q'} <= script_s_star
/// |grad f|_{L^2} with q' = 2d/(d-2), defined only for d >= 3.
struct SobolevConstants {
  double s_star = 0;
  double q_half = 0;
  std::optional<double> script_s_star;
  std::optional<double> q_grad;
};

SobolevConstants sobolev_constants(int boundary_dim);

struct SelfadjointOptions {
  double tolerance = 1e-9;        // slack on the sign conditions
  double real_tolerance = 1e-12;  // max |Im alpha| admitted as "real"
};

/// Real coupling regime: alpha >= 0 and x . grad alpha <= 0 pointwise.
/// Complex coupling is a usage error here and throws with a pointer to the
/// sectorial checkers.
HypothesisReport check_selfadjoint_hypotheses(const BoundaryFunction& alpha, const Grid& grid,
                                              const SelfadjointOptions& opts = {});

struct SmallnessOptions {
  double c_star = 1.0;  // product-rule constant the report is parametric in
  TaperSpec taper{};
  // Replaces the closed-form boundary embedding constant when set, so the
  // verdict can be re-evaluated under a different constant without rerunning
  // the fractional norms.
  std::optional<double> s_star_override;
};

/// Sectorial smallness regime (needs dim >= 3): Re alpha >= |Im alpha|,
/// b1 = max |x'||alpha|, b2 = sum_j |(-Delta)^{1/4}(x_j alpha)|_{L^{2d}},
/// smallness 2 c_star (b1 + s_star b2) < 1.
HypothesisReport check_smallness_hypotheses(const BoundaryFunction& alpha, const Grid& grid,
                                            const SmallnessOptions& opts = {});

enum class DivergenceVariant { kHardyEigen, kSufficientCondition };

struct DivergenceOptions {
  DivergenceVariant variant = DivergenceVariant::kHardyEigen;
  double selfadjoint_tolerance = 1e-9;
};

/// Imaginary-drift regime (nontrivial for dim >= 4; smaller dimensions get a
/// degenerate-dimension warning when Im alpha is present): Re alpha >=
/// |Im alpha|, x . grad Re alpha <= 0, and the smallness condition in BOTH
/// readings: the printed product 2 b1 (b1 + b2) < 1 and the proof's root form
/// 2 sqrt(b1 (b1 + b2)) < 1; overall pass requires both. b2 comes from the
/// Hardy-type generalized eigenvalue problem, or from script_s_star *
/// |div(x' Im alpha)|_{L^d} under the sufficient-condition variant (which
/// needs d >= 3).
HypothesisReport check_divergence_hypotheses(const BoundaryFunction& alpha, const Grid& grid,
                                             const DivergenceOptions& opts = {});

struct HardyOptions {
  int max_iterations = 500;
  double tolerance = 1e-10;  // relative Rayleigh-quotient stagnation
};

/// sqrt of the largest mu with D psi = mu L psi, D = diag(weight) and L the
/// boundary Dirichlet Laplacian; a lower bound for the best constant in
/// integral(weight |psi|^2) <= mu integral(|grad psi|^2). The coupling
/// overload uses weight = |div(x' Im alpha)|^2.
double estimate_hardy_b2_weight(const VectorXd& weight, const Grid& grid,
                                const HardyOptions& opts = {});
double estimate_hardy_b2(const BoundaryFunction& alpha, const Grid& grid,
                         const HardyOptions& opts = {});

}  // namespace robinspec
