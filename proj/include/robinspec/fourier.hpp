#pragma once

#include <functional>
#include <string>

#include "robinspec/grid.hpp"
#include "robinspec/types.hpp"

namespace robinspec {

/// Smooth radial taper multiplying a boundary field before Fourier multiplier
/// ops, to suppress wrap-around artifacts from the periodized transform. The
/// transition occupies [L*(1-width_fraction), L] in |x'|; width_fraction = 0
/// disables the taper entirely (needed when exact lattice plane waves are
/// transformed).
struct TaperSpec {
  double width_fraction = 0.1;
};

std::string taper_note(const TaperSpec& taper, const Grid& grid);

/// Per-node taper values on the boundary lattice (all ones when disabled).
VectorXd taper_profile(const Grid& grid, const TaperSpec& taper);

/// Periodic wavenumber of DFT bin m on an axis of M cells spanning 2L:
/// xi = (m <= M/2 ? m : m - M) * pi / L.
double bin_wavenumber(Index m, Index n_cells, double half_width);

/// Apply a radial Fourier multiplier symbol(|xi|) to a boundary field:
/// taper, forward DFT per axis, multiply, inverse DFT. The field must be
/// sampled on the grid's boundary lattice. Requires dim >= 2.
VectorXcd boundary_multiplier_apply(const VectorXcd& field, const Grid& grid,
                                    const std::function<double(double)>& symbol,
                                    const TaperSpec& taper = {});

/// Discrete (-Delta)^{1/4} on the boundary lattice: multiplier |xi|^{1/2}.
VectorXcd fractional_quarter_laplacian(const VectorXcd& field, const Grid& grid,
                                       const TaperSpec& taper = {});

/// Squared homogeneous half-norm: (h^d / M^d) * sum_m |xi_m| |F_m|^2. Equals
/// the boundary L^2 norm squared of fractional_quarter_laplacian(field) by
/// Plancherel, to roundoff. A lattice plane wave of amplitude 1 and
/// wavenumber k gives |k| * (2L)^d exactly.
double sobolev_half_norm_sq(const VectorXcd& field, const Grid& grid,
                            const TaperSpec& taper = {});

/// Surface-quadrature L^p norms of a boundary field.
double boundary_l2_norm(const VectorXcd& field, const Grid& grid);
double boundary_lp_norm(const VectorXcd& field, const Grid& grid, double p);

}  // namespace robinspec
