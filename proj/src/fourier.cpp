#include "robinspec/fourier.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace robinspec {

namespace {

double bump_side(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }

// C-infinity step: 0 at t <= 0, 1 at t >= 1.
double smooth_step(double t) {
  const double a = bump_side(t);
  const double b = bump_side(1.0 - t);
  return a / (a + b);
}

void check_boundary_field(const VectorXcd& field, const Grid& grid, const char* what) {
  if (grid.dim < 2) {
    throw std::invalid_argument(std::string(what) + ": needs a boundary lattice (dim >= 2)");
  }
  if (field.size() != grid.num_boundary_nodes()) {
    throw std::invalid_argument(std::string(what) + ": field size does not match the boundary");
  }
}

// In-place DFT along every axis of the boundary lattice (axis 0 slowest).
void dft_all_axes(VectorXcd& data, const Grid& grid, bool inverse) {
  const int d = grid.boundary_dim();
  const Index m = grid.n_tang;
  Eigen::FFT<double> fft;
  std::vector<cplx> line(static_cast<std::size_t>(m));
  std::vector<cplx> out(static_cast<std::size_t>(m));
  Index stride = 1;
  for (int axis = d - 1; axis >= 0; --axis) {
    const Index lines = data.size() / m;
    for (Index l = 0; l < lines; ++l) {
      const Index base = (l / stride) * stride * m + (l % stride);
      for (Index t = 0; t < m; ++t) line[static_cast<std::size_t>(t)] = data[base + t * stride];
      if (inverse) {
        fft.inv(out, line);
      } else {
        fft.fwd(out, line);
      }
      for (Index t = 0; t < m; ++t) data[base + t * stride] = out[static_cast<std::size_t>(t)];
    }
    stride *= m;
  }
}

}  // namespace

double bin_wavenumber(Index m, Index n_cells, double half_width) {
  const Index folded = (m <= n_cells / 2) ? m : m - n_cells;
  return static_cast<double>(folded) * kPi / half_width;
}

std::string taper_note(const TaperSpec& taper, const Grid& grid) {
  std::ostringstream os;
  if (taper.width_fraction <= 0) {
    os << "taper disabled";
  } else {
    os << "smooth radial taper over |x'| in [" << (1.0 - taper.width_fraction) * grid.half_width
       << ", " << grid.half_width << "]";
  }
  return os.str();
}

VectorXd taper_profile(const Grid& grid, const TaperSpec& taper) {
  const Index nb = grid.num_boundary_nodes();
  VectorXd t = VectorXd::Ones(nb);
  if (taper.width_fraction <= 0) return t;
  const double r1 = grid.half_width;
  const double r0 = r1 * (1.0 - taper.width_fraction);
  const int d = grid.boundary_dim();
  for (Index b = 0; b < nb; ++b) {
    const auto x = grid.boundary_coord(b);
    double r2 = 0;
    for (int a = 0; a < d; ++a) r2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
    const double r = std::sqrt(r2);
    if (r >= r1) {
      t[b] = 0;
    } else if (r > r0) {
      t[b] = 1.0 - smooth_step((r - r0) / (r1 - r0));
    }
  }
  return t;
}

VectorXcd boundary_multiplier_apply(const VectorXcd& field, const Grid& grid,
                                    const std::function<double(double)>& symbol,
                                    const TaperSpec& taper) {
  check_boundary_field(field, grid, "boundary_multiplier_apply");
  const int d = grid.boundary_dim();
  const Index m = grid.n_tang;
  VectorXcd data = field;
  if (taper.width_fraction > 0) {
    data.array() *= taper_profile(grid, taper).array();
  }
  dft_all_axes(data, grid, /*inverse=*/false);

  // Multiply by symbol(|xi|) over the tensor wavenumber lattice.
  std::vector<double> xi(static_cast<std::size_t>(m));
  for (Index q = 0; q < m; ++q) xi[static_cast<std::size_t>(q)] = bin_wavenumber(q, m, grid.half_width);
  for (Index f = 0; f < data.size(); ++f) {
    Index rest = f;
    double s2 = 0;
    for (int a = d - 1; a >= 0; --a) {
      const double x = xi[static_cast<std::size_t>(rest % m)];
      s2 += x * x;
      rest /= m;
    }
    data[f] *= symbol(std::sqrt(s2));
  }

  dft_all_axes(data, grid, /*inverse=*/true);
  return data;
}

VectorXcd fractional_quarter_laplacian(const VectorXcd& field, const Grid& grid,
                                       const TaperSpec& taper) {
  check_boundary_field(field, grid, "fractional_quarter_laplacian");
  return boundary_multiplier_apply(field, grid, [](double s) { return std::sqrt(s); }, taper);
}

double sobolev_half_norm_sq(const VectorXcd& field, const Grid& grid, const TaperSpec& taper) {
  check_boundary_field(field, grid, "sobolev_half_norm_sq");
  const int d = grid.boundary_dim();
  const Index m = grid.n_tang;
  VectorXcd data = field;
  if (taper.width_fraction > 0) {
    data.array() *= taper_profile(grid, taper).array();
  }
  dft_all_axes(data, grid, /*inverse=*/false);
  std::vector<double> xi(static_cast<std::size_t>(m));
  for (Index q = 0; q < m; ++q) xi[static_cast<std::size_t>(q)] = bin_wavenumber(q, m, grid.half_width);
  double acc = 0;
  for (Index f = 0; f < data.size(); ++f) {
    Index rest = f;
    double s2 = 0;
    for (int a = d - 1; a >= 0; --a) {
      const double x = xi[static_cast<std::size_t>(rest % m)];
      s2 += x * x;
      rest /= m;
    }
    acc += std::sqrt(s2) * std::norm(data[f]);
  }
  const double cell = std::pow(grid.spacing, d);
  const double count = std::pow(static_cast<double>(m), d);
  return acc * cell / count;
}

double boundary_l2_norm(const VectorXcd& field, const Grid& grid) {
  check_boundary_field(field, grid, "boundary_l2_norm");
  double acc = 0;
  for (Index b = 0; b < field.size(); ++b) acc += grid.surface_weights[b] * std::norm(field[b]);
  return std::sqrt(acc);
}

double boundary_lp_norm(const VectorXcd& field, const Grid& grid, double p) {
  check_boundary_field(field, grid, "boundary_lp_norm");
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("boundary_lp_norm: p must be finite and >= 1");
  }
  double acc = 0;
  for (Index b = 0; b < field.size(); ++b) {
    acc += grid.surface_weights[b] * std::pow(std::abs(field[b]), p);
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace robinspec
