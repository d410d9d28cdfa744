#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "robinspec/boundary_data.hpp"
#include "robinspec/fourier.hpp"
#include "robinspec/grid.hpp"
#include "robinspec/types.hpp"

namespace robinspec {

/// One verified integral identity or inequality: both sides as computed plus
/// their absolute difference. `order_estimate` is filled only by
/// attach_order_estimates after a paired run at h and h/2.
struct IdentityResidualReport {
  std::string identity_id;
  cplx lhs{0, 0};
  cplx rhs{0, 0};
  double residual = 0;  // |lhs - rhs|
  double spacing = 0;
  double half_width = 0;
  std::optional<double> order_estimate;
};

/// Consistent quadruple (u, f, g, lambda): f = -Laplacian(u) - lambda*u in
/// the volume and g = -du/dn + alpha*u on the boundary. `u` and `f` are
/// full-grid node vectors, `g` lives on the boundary lattice. `method`
/// records whether f and g came from closed-form derivatives ("analytic") or
/// fourth-order differences of the samples ("fd4").
struct ManufacturedProblem {
  VectorXcd u;
  VectorXcd f;
  VectorXcd g;
  cplx lambda{0, 0};
  BoundaryFunction alpha_ref;
  std::string method;
};

/// Built-in smooth profile family: a tangential Gaussian bump times a
/// (polynomial x Gaussian) normal profile,
///   u(x', xn) = amplitude * exp(-s|x' - c'|^2)
///             * (p0 + p1*xn + p2*xn^2) * exp(-t(xn - cn)^2).
/// Closed-form gradient and Laplacian; supports must decay below 1e-12 of
/// the peak before reaching the artificial walls.
struct BumpProfile {
  std::array<double, 4> center{};  // c' in the first dim-1 slots, cn last used slot
  double tangential_decay = 1.0;   // s
  double normal_decay = 1.0;       // t
  // Complex coefficients give the field a genuinely varying phase, which
  // keeps the imaginary-part balances from degenerating to exact algebra.
  std::array<cplx, 3> poly{cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)};
  cplx amplitude{1.0, 0.0};
};

/// Evaluate the profile and its closed-form data on the grid. Throws if the
/// sampled field fails the wall-decay requirement.
ManufacturedProblem manufactured_problem(const BumpProfile& profile, cplx lambda,
                                         const BoundaryFunction& alpha, const Grid& grid);

/// Same quadruple from raw samples: f by fourth-order central differences
/// (zero extension), g by a one-sided fourth-order normal derivative.
ManufacturedProblem manufactured_problem_fd4(const VectorXcd& u_full, cplx lambda,
                                             const BoundaryFunction& alpha, const Grid& grid);

/// The five resolvent-pair identities plus the complex weak form ("greens").
/// Dimension >= 2 uses ids I1..I5; dimension 1 uses the I1'..I5' variants.
std::vector<IdentityResidualReport> identity_residuals(const ManufacturedProblem& problem,
                                                       const Grid& grid);

/// Fill order_estimate = log2(coarse/fine residual) on the coarse reports,
/// matching reports by identity_id. The fine run should halve the spacing.
void attach_order_estimates(std::vector<IdentityResidualReport>& coarse,
                            const std::vector<IdentityResidualReport>& fine);

/// Optional approximation data on the right-hand side of the dilation
/// identity: a volume defect field and a boundary defect field.
struct VirialTerms {
  VectorXcd f_volume;    // full-grid
  VectorXcd g_boundary;  // boundary lattice
};

/// Dilation (virial-type) identity for real spectral parameter:
///   energy + lambda*mass - surface (x . grad alpha)|u|^2 = defect pairings.
IdentityResidualReport virial_residual(const VectorXcd& u_full, const BoundaryFunction& alpha,
                                       cplx lambda, const std::optional<VirialTerms>& terms,
                                       const Grid& grid);

/// Radial phase twist u(x) -> exp(-i sqrt(max(Re lambda,0)) sgn(Im lambda) |x|) u(x).
/// Requires Im lambda != 0; |result| = |u| node by node.
VectorXcd u_minus_transform(const VectorXcd& u_full, cplx lambda, const Grid& grid);

/// Which sector inequality to evaluate: the direct coupling form
/// ("crucial_33") or the repulsive form with the surface divergence terms
/// moved by parts ("crucial_34"). The report's lhs - rhs is the signed gap;
/// it is nonpositive up to O(h^2) for genuine sector solutions.
enum class SectorInequality { kCouplingForm, kRepulsiveForm };

IdentityResidualReport crucial_inequality_gap(const ManufacturedProblem& problem,
                                              const Grid& grid, SectorInequality which);

/// Smooth radial cutoff profile: 1 on [0,1], 0 on [2,inf), C-infinity bridge
/// exp(-1/(2-r)) / (exp(-1/(2-r)) + exp(-1/(r-1))) in between.
double cutoff_profile(double r);
double cutoff_profile_derivative(double r);
/// Calibrated sup |xi'| over the bridge (so |grad xi_R| <= c/R exactly).
double cutoff_gradient_constant();
/// Calibrated sup |xi'' + (dim-1) xi'/r|, bounding R^2 |Laplacian xi_R|.
double cutoff_curvature_constant(int dim);

/// Truncation defects of the windowed field xi_R * u per window radius:
///   eps1 = ||2 grad u . grad xi_R + u Lap xi_R||_L2(volume)
///   eps2 = same with an extra |x| weight inside the norm
///   eps3 = ||discrete Robin-trace commutator||_L2(boundary)
///   eps4 = same with an extra |x'| weight.
struct CutoffErrorRow {
  double radius = 0;
  double eps1 = 0, eps2 = 0, eps3 = 0, eps4 = 0;
};

std::vector<CutoffErrorRow> cutoff_errors(const VectorXcd& u_full, const Grid& grid,
                                          const std::vector<double>& radii);

enum class HardyVariant { kUnweighted, kWeighted };

/// Ratio of the singular-weight mass to the (possibly |x|-weighted) energy:
///   unweighted (dim >= 3):  sum |psi|^2/|x|^2  /  sum |grad psi|^2
///   weighted   (dim >= 2):  sum |psi|^2/|x|    /  sum |x| |grad psi|^2.
double hardy_ratio(const VectorXcd& psi_full, const Grid& grid, HardyVariant variant);

/// Forward-difference Dirichlet energy sum over lattice links of
/// h^dim |D+ field|^2, with half-weight tangential links in the wall layers
/// and the periodic tangential seam link included.
double dirichlet_energy(const VectorXcd& field_full, const Grid& grid);

/// Homogeneous half-norm of the boundary trace versus the field's Dirichlet
/// energy and the energy of the decaying-multiplier extension of the trace.
struct TraceCheck {
  double trace_norm_sq = 0;
  double grad_norm_sq = 0;
  double extension_norm_sq = 0;
};

TraceCheck trace_half_norm_check(const VectorXcd& u_full, const Grid& grid,
                                 const TaperSpec& taper = TaperSpec{0.0});

/// Boundary mass against eps * energy + (1/eps) * volume mass.
struct TraceInterpolation {
  double lhs = 0;
  double rhs = 0;
};

TraceInterpolation trace_interpolation_check(const VectorXcd& u_full, const Grid& grid,
                                             double epsilon);

/// (shift(field) - field)/delta along one axis, delta a signed lattice
/// multiple of h; values outside the grid read as zero.
VectorXcd difference_quotient(const VectorXcd& field_full, int direction, double delta,
                              const Grid& grid);

/// Exact discrete identities for the quotient: the pointwise product rule
///   2 Re(conj(psi) d^delta psi) = d^delta |psi|^2 - delta |d^delta psi|^2
/// and the summation-by-parts formula with its boundary-strip correction for
/// the normal axis (even reflection below the wall supplies the strip
/// values, mirroring the reflection-built extension operator). Both
/// residuals are roundoff-level regardless of h and delta.
struct DqResiduals {
  double product_rule_residual = 0;
  double ibp_residual = 0;
};

DqResiduals dq_identity_residuals(const VectorXcd& field_full, int direction, double delta,
                                  const Grid& grid);

}  // namespace robinspec
