#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "robinspec/boundary_data.hpp"
#include "robinspec/grid.hpp"
#include "robinspec/types.hpp"

namespace robinspec {

using SpMatC = Eigen::SparseMatrix<cplx>;
using SpMatD = Eigen::SparseMatrix<double>;

/// Discrete Robin Laplacian on a volume grid, reduced over the unknowns that
/// remain after the artificial Dirichlet walls are folded out.
///
/// The reduced system keeps every node except the top-wall layer x_n = L
/// (tangential walls carry no nodes; their Dirichlet condition enters through
/// mirror-ghost wall terms on the first/last cell-centred rows). Reduced
/// index r = b*(n_norm-1) + k for boundary column b and normal index k.
///
/// `stiffness` is K = W*A: complex symmetric for any alpha, real symmetric
/// positive semidefinite when alpha = 0, and K = K0 + diag(surface weight *
/// alpha) on boundary rows. `weights` is the diagonal quadrature mass W. The
/// operator itself is A = W^{-1} K, self-adjoint in the W-weighted inner
/// product exactly when alpha is real (symmetry_flag).
struct DiscreteOperator {
  Grid grid;
  BoundaryFunction alpha;
  SpMatC stiffness;       // K, complex symmetric
  VectorXd weights;       // W > 0, one entry per unknown
  VectorXcd alpha_diag;   // surface-weighted alpha on boundary rows, 0 elsewhere
  std::vector<Index> to_full;    // reduced index -> full grid flat index
  std::vector<Index> from_full;  // full flat index -> reduced index, -1 at walls
  bool symmetry_flag = false;

  Index size() const { return stiffness.rows(); }
  Index boundary_unknown(Index b) const;  // reduced index of boundary node b

  /// A u = W^{-1} (K u) on a reduced vector.
  VectorXcd apply(const VectorXcd& u) const;

  /// A = W^{-1} K assembled explicitly (row-scaled stiffness).
  SpMatC operator_matrix() const;
};

DiscreteOperator assemble(const Grid& grid, const BoundaryFunction& alpha);
DiscreteOperator assemble(const Grid& grid, const std::string& alpha_spec);

/// Full-grid field -> reduced unknown vector (drops the top-wall layer).
VectorXcd restrict_field(const DiscreteOperator& op, const VectorXcd& full);
/// Reduced vector -> full-grid field, zero on the top wall.
VectorXcd extend_field(const DiscreteOperator& op, const VectorXcd& reduced);

double weighted_norm(const DiscreteOperator& op, const VectorXcd& u_reduced);
cplx weighted_dot(const DiscreteOperator& op, const VectorXcd& u_reduced,
                  const VectorXcd& v_reduced);  // sum W u conj(v)

/// Sesquilinear form evaluated on full-grid fields by forward-difference face
/// sums plus the surface coupling term.
struct FormResult {
  cplx value = 0;          // gradient + boundary (+ wall terms if requested)
  cplx gradient = 0;       // face sum, no coupling
  cplx boundary = 0;       // surface-weighted alpha term
  cplx wall = 0;           // mirror-ghost wall penalties (reported always)
  double matrix_residual = 0;  // |(gradient+wall+boundary) - <K u, v>| on restricted fields
};

/// include_wall_cells adds the mirror-ghost penalties to `value`, making it
/// equal conj(v)^T K u exactly for fields vanishing on the top wall.
FormResult apply_form(const DiscreteOperator& op, const VectorXcd& u_full,
                      const VectorXcd& v_full, bool include_wall_cells = false);

/// | surface flux - gradient form - volume Laplacian term |, all discretized
/// at second order (centered stencils inside, one-sided at edges). Exactly
/// zero (to roundoff) for fields supported away from every boundary; O(h^2)
/// for smooth fields with boundary data.
double greens_identity_residual(const DiscreteOperator& op, const VectorXcd& u_full,
                                const VectorXcd& v_full);

/// Coordinate-format export of A = W^{-1} K, complex general, 1-based.
void write_matrix_market(const DiscreteOperator& op, const std::string& path);

}  // namespace robinspec
