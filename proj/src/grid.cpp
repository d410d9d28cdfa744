#include "robinspec/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace robinspec {

namespace {

Index checked_ratio(double half_width, double spacing) {
  if (!(half_width > 0) || !(spacing > 0) || !std::isfinite(half_width) || !std::isfinite(spacing)) {
    throw std::invalid_argument("grid: half_width and spacing must be positive and finite");
  }
  const double ratio = half_width / spacing;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("grid: half_width/spacing must be an integer, got " + std::to_string(ratio));
  }
  if (rounded < 2) {
    throw std::invalid_argument("grid: half_width/spacing must be at least 2");
  }
  return static_cast<Index>(rounded);
}

void fill_axes(Grid& g, Index ratio) {
  const double h = g.spacing;
  const double L = g.half_width;
  g.n_tang = g.dim >= 2 ? 2 * ratio : 0;
  g.tangential_nodes.resize(static_cast<std::size_t>(g.n_tang));
  for (Index j = 0; j < g.n_tang; ++j) {
    g.tangential_nodes[static_cast<std::size_t>(j)] = (static_cast<double>(j) + 0.5) * h - L;
  }
  if (!g.boundary_only) {
    g.n_norm = ratio + 1;
    g.normal_nodes.resize(static_cast<std::size_t>(g.n_norm));
    for (Index k = 0; k < g.n_norm; ++k) {
      g.normal_nodes[static_cast<std::size_t>(k)] = static_cast<double>(k) * h;
    }
  }
}

Index pow_index(Index base, int exp) {
  Index out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

std::array<double, 4> Grid::node_coord(Index flat) const {
  require_volume("node_coord");
  std::array<double, 4> x{0, 0, 0, 0};
  Index rest = flat / n_norm;
  const Index k = flat % n_norm;
  for (int axis = dim - 2; axis >= 0; --axis) {
    x[static_cast<std::size_t>(axis)] = tangential_nodes[static_cast<std::size_t>(rest % n_tang)];
    rest /= n_tang;
  }
  x[static_cast<std::size_t>(dim - 1)] = normal_nodes[static_cast<std::size_t>(k)];
  return x;
}

std::array<double, 4> Grid::boundary_coord(Index b) const {
  std::array<double, 4> x{0, 0, 0, 0};
  Index rest = b;
  for (int axis = dim - 2; axis >= 0; --axis) {
    x[static_cast<std::size_t>(axis)] = tangential_nodes[static_cast<std::size_t>(rest % n_tang)];
    rest /= n_tang;
  }
  return x;
}

Index Grid::tang_index(Index flat, int axis) const {
  Index rest = flat / n_norm;
  for (int a = dim - 2; a > axis; --a) rest /= n_tang;
  return rest % n_tang;
}

double Grid::radial(Index flat) const {
  const auto x = node_coord(flat);
  double s = 0;
  for (int a = 0; a < dim; ++a) s += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
  return std::sqrt(s);
}

void Grid::require_volume(const char* op) const {
  if (boundary_only) {
    throw std::logic_error(std::string(op) + ": grid is boundary-only");
  }
}

Grid build_grid(int dim, double half_width, double spacing, GridOptions options) {
  if (dim == 4) {
    // Dimension 4 is supported for boundary work only.
    return build_boundary_grid(4, half_width, spacing, options);
  }
  if (dim < 1 || dim > 3) {
    throw std::invalid_argument("build_grid: dim must be 1, 2, 3, or 4 (boundary-only)");
  }
  const Index ratio = checked_ratio(half_width, spacing);
  Grid g;
  g.dim = dim;
  g.half_width = half_width;
  g.spacing = spacing;
  g.boundary_only = false;
  fill_axes(g, ratio);

  const Index tang_count = dim >= 2 ? pow_index(g.n_tang, dim - 1) : 1;
  const Index total = tang_count * g.n_norm;
  if (total > options.max_nodes) {
    throw std::length_error("build_grid: node count " + std::to_string(total) +
                            " exceeds capacity cap " + std::to_string(options.max_nodes));
  }

  const double h = spacing;
  const double tang_w = std::pow(h, dim - 1);
  g.quadrature_weights.resize(total);
  for (Index flat = 0; flat < total; ++flat) {
    const Index k = flat % g.n_norm;
    const double norm_w = (k == 0 || k == g.n_norm - 1) ? 0.5 * h : h;
    g.quadrature_weights[flat] = tang_w * norm_w;
  }

  g.surface_weights.resize(tang_count);
  g.boundary_index.resize(static_cast<std::size_t>(tang_count));
  const double surf_w = dim == 1 ? 1.0 : tang_w;
  for (Index b = 0; b < tang_count; ++b) {
    g.surface_weights[b] = surf_w;
    g.boundary_index[static_cast<std::size_t>(b)] = b * g.n_norm;  // normal index 0
  }
  return g;
}

Grid build_boundary_grid(int dim, double half_width, double spacing, GridOptions options) {
  if (dim < 2 || dim > 4) {
    throw std::invalid_argument("build_boundary_grid: dim must be 2, 3, or 4");
  }
  const Index ratio = checked_ratio(half_width, spacing);
  Grid g;
  g.dim = dim;
  g.half_width = half_width;
  g.spacing = spacing;
  g.boundary_only = true;
  fill_axes(g, ratio);

  const Index tang_count = pow_index(g.n_tang, dim - 1);
  if (tang_count > options.max_nodes) {
    throw std::length_error("build_boundary_grid: node count " + std::to_string(tang_count) +
                            " exceeds capacity cap " + std::to_string(options.max_nodes));
  }
  const double surf_w = std::pow(spacing, dim - 1);
  g.surface_weights = VectorXd::Constant(tang_count, surf_w);
  g.boundary_index.resize(static_cast<std::size_t>(tang_count));
  for (Index b = 0; b < tang_count; ++b) g.boundary_index[static_cast<std::size_t>(b)] = b;
  return g;
}

RadialWeightField radial_weight(const Grid& grid) {
  grid.require_volume("radial_weight");
  RadialWeightField out;
  out.singular_index = -1;
  out.r.resize(grid.num_nodes());
  for (Index i = 0; i < grid.num_nodes(); ++i) {
    out.r[i] = grid.radial(i);
    if (out.r[i] == 0.0) out.singular_index = i;
  }
  return out;
}

}  // namespace robinspec
