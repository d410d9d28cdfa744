#pragma once

#include <optional>
#include <string>

#include "robinspec/grid.hpp"
#include "robinspec/types.hpp"

namespace robinspec {

/// Parsed boundary-coupling description. Presets carry closed-form gradients;
/// free-form expressions fall back to centered differences.
///
/// Spec strings (parameters key=value, comma separated):
///   "constant:c=-1"           alpha = c (c may be complex via re/im keys)
///   "radial:a=1,p=2"          alpha = a/(1+r)^p
///   "phase:a=0.1,theta=0.4"   alpha = a*exp(i*theta)/(1+r^2)
///   "expr:<expression>"       free-form, see expression.hpp
struct AlphaSpec {
  enum class Kind { kConstant, kRadial, kPhase, kExpression };
  Kind kind = Kind::kConstant;
  cplx c{0, 0};                     // constant preset
  double a = 1, p = 1, theta = 0;   // radial / phase presets
  std::string expr_text;
  std::string source;               // original spec string

  static AlphaSpec parse(const std::string& text);

  cplx eval(const double* x, int boundary_dim) const;
  bool has_analytic_gradient() const { return kind != Kind::kExpression; }
  // d alpha / d x_j at a boundary point (presets only).
  cplx analytic_gradient(const double* x, int boundary_dim, int axis) const;
};

/// Boundary coupling sampled on the grid's boundary slice, with tangential
/// gradient fields. Ordered like Grid::boundary_index.
struct BoundaryFunction {
  VectorXcd values;                   // alpha per boundary node
  MatrixXcd tangential_gradient;      // num_boundary_nodes x (dim-1)
  std::string gradient_method;        // "analytic" | "centered_fd"
  std::string source;
  bool is_real = false;               // max|Im alpha| <= 1e-14 * max|alpha|
  double max_abs = 0;
};

BoundaryFunction sample_alpha(const AlphaSpec& spec, const Grid& grid);
BoundaryFunction sample_alpha(const std::string& spec, const Grid& grid);

struct RadialDerivativeField {
  VectorXcd x_dot_grad;     // x . grad(alpha) per boundary node
  VectorXd x_dot_grad_re;   // x . grad(Re alpha)
  std::string method;       // "analytic" | "centered_fd"
};

RadialDerivativeField radial_derivative(const BoundaryFunction& alpha, const Grid& grid);

// div(x' Im alpha) per boundary node, from centered differences of the
// product field x_j * Im alpha (one-sided second order at the outer walls).
VectorXd divergence_field(const BoundaryFunction& alpha, const Grid& grid);

// Tangential gradient of an arbitrary sampled boundary field by centered
// differences (one-sided second order at the walls). Column j is d/dx_j.
MatrixXcd boundary_gradient_fd(const VectorXcd& field, const Grid& grid);

// CSV export rows: coordinates, Re alpha, Im alpha.
std::string boundary_csv(const BoundaryFunction& alpha, const Grid& grid);

}  // namespace robinspec
