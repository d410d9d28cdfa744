#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "robinspec/types.hpp"

namespace robinspec {

struct GridOptions {
  // Capacity cap on allocated nodes (volume nodes, or boundary nodes for a
  // boundary-only grid).
  std::int64_t max_nodes = 2'500'000;
};

/// Tensor-product grid on the truncated half-space (-L,L)^{n-1} x (0,L).
///
/// Tangential axes carry M = 2L/h cell-centred nodes at (j+1/2)h - L; no node
/// sits on a tangential wall and |x'| >= h/2 away from the axis. The normal
/// axis carries K+1 = L/h + 1 vertex-centred nodes at k*h, including the
/// physical boundary x_n = 0 and the artificial top wall x_n = L.
///
/// Volume quadrature is midpoint per tangential axis times trapezoid along
/// the normal axis; the weights sum to (2L)^{n-1} * L. Surface weights cover
/// the boundary slice x_n = 0 with midpoint cells summing to (2L)^{n-1}; for
/// dim 1 the boundary is the single point x = 0 carrying counting weight 1.
///
/// Flat node index: tangential indices vary slowest, the normal index
/// fastest: flat = ((j_1*M + j_2)*M + ...)*(K+1) + k.
///
/// Boundary-only grids (dim 4 always; lower dims on request) allocate just
/// the boundary slice: volume queries are invalid and volume arrays empty.
struct Grid {
  int dim = 0;
  double half_width = 0;  // L
  double spacing = 0;     // h
  bool boundary_only = false;

  Index n_tang = 0;  // M, nodes per tangential axis (0 when dim == 1)
  Index n_norm = 0;  // K+1, nodes along the normal axis (0 if boundary-only)

  std::vector<double> tangential_nodes;  // size M
  std::vector<double> normal_nodes;      // size K+1

  VectorXd quadrature_weights;        // per volume node; empty if boundary-only
  VectorXd surface_weights;           // per boundary node
  std::vector<Index> boundary_index;  // flat volume index of each boundary node

  Index num_nodes() const { return boundary_only ? num_boundary_nodes() : quadrature_weights.size(); }
  Index num_boundary_nodes() const { return surface_weights.size(); }
  int boundary_dim() const { return dim - 1; }

  // Coordinates of a volume node; entries beyond dim are zero.
  std::array<double, 4> node_coord(Index flat) const;
  // Tangential coordinates of a boundary node; entries beyond dim-1 are zero.
  std::array<double, 4> boundary_coord(Index b) const;
  // Normal-axis index of a volume node.
  Index norm_index(Index flat) const { return flat % n_norm; }
  // Tangential index along a given axis (0 <= axis < dim-1).
  Index tang_index(Index flat, int axis) const;
  double radial(Index flat) const;  // |x| of a volume node

  void require_volume(const char* op) const;  // throws if boundary-only
};

Grid build_grid(int dim, double half_width, double spacing, GridOptions options = {});
Grid build_boundary_grid(int dim, double half_width, double spacing, GridOptions options = {});

struct RadialWeightField {
  VectorXd r;               // |x_i| per volume node
  Index singular_index;     // flat index of the x = 0 node (dim 1), else -1
};

RadialWeightField radial_weight(const Grid& grid);

}  // namespace robinspec
