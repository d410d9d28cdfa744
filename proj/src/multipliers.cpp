#include "robinspec/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace robinspec {

namespace {

// ---------------------------------------------------------------------------
// Lattice bookkeeping
// ---------------------------------------------------------------------------

struct Lattice {
  int dim = 0;
  Index n_tang = 0;
  Index n_norm = 0;
  Index num = 0;
  std::array<Index, 3> tstride{};  // flat-index strides of tangential axes
  std::array<Index, 3> bstride{};  // boundary-lattice strides
};

Lattice lattice(const Grid& grid) {
  grid.require_volume("multipliers");
  Lattice lat;
  lat.dim = grid.dim;
  lat.n_tang = grid.n_tang;
  lat.n_norm = grid.n_norm;
  lat.num = grid.num_nodes();
  Index ts = lat.n_norm;
  Index bs = 1;
  for (int axis = grid.dim - 2; axis >= 0; --axis) {
    lat.tstride[static_cast<std::size_t>(axis)] = ts;
    lat.bstride[static_cast<std::size_t>(axis)] = bs;
    ts *= lat.n_tang;
    bs *= lat.n_tang;
  }
  return lat;
}

// Flat index of the axis-neighbor, or -1 outside the lattice.
Index neighbor(const Lattice& lat, const Grid& grid, Index flat, int axis, Index step) {
  if (axis == lat.dim - 1) {
    const Index k = flat % lat.n_norm + step;
    if (k < 0 || k >= lat.n_norm) return -1;
    return flat + step;
  }
  const Index j = grid.tang_index(flat, axis) + step;
  if (j < 0 || j >= lat.n_tang) return -1;
  return flat + step * lat.tstride[static_cast<std::size_t>(axis)];
}

cplx at_or_zero(const VectorXcd& v, Index idx) { return idx < 0 ? cplx(0, 0) : v[idx]; }

double sq(double v) { return v * v; }

double tangential_radius(const std::array<double, 4>& x, int dim) {
  double s = 0;
  for (int a = 0; a + 1 < dim; ++a) s += sq(x[static_cast<std::size_t>(a)]);
  return std::sqrt(s);
}

double full_radius(const std::array<double, 4>& x, int dim) {
  double s = 0;
  for (int a = 0; a < dim; ++a) s += sq(x[static_cast<std::size_t>(a)]);
  return std::sqrt(s);
}

// Trapezoid factor carried by a link: tangential links inherit the half
// weight of the wall and top layers in the normal direction; normal links
// sit at cell midpoints and carry full weight.
double link_factor(const Lattice& lat, Index flat, int axis) {
  if (axis == lat.dim - 1) return 1.0;
  const Index k = flat % lat.n_norm;
  return (k == 0 || k == lat.n_norm - 1) ? 0.5 : 1.0;
}

// sum over links of h^dim * factor * weight(x_mid) * |D+ v|^2. Tangential
// axes are periodically identified: the seam link from the last cell back to
// the first closes the lattice, with |seam coordinate| = half_width. Fields
// that decay at the tangential walls do not feel the seam; lattice-periodic
// waves get their exact full energy.
template <class WeightFn>
double link_energy(const VectorXcd& v, const Grid& grid, const Lattice& lat, WeightFn&& weight) {
  const double h = grid.spacing;
  const double cell = std::pow(h, lat.dim);
  double total = 0;
  for (int axis = 0; axis < lat.dim; ++axis) {
    const bool tangential = axis != lat.dim - 1;
    for (Index r = 0; r < lat.num; ++r) {
      Index q = neighbor(lat, grid, r, axis, 1);
      auto x = grid.node_coord(r);
      if (q < 0) {
        if (!tangential) continue;
        q = r - (lat.n_tang - 1) * lat.tstride[static_cast<std::size_t>(axis)];
        x[static_cast<std::size_t>(axis)] = grid.half_width;
      } else {
        x[static_cast<std::size_t>(axis)] += 0.5 * h;
      }
      const cplx d = (v[q] - v[r]) / h;
      total += cell * link_factor(lat, r, axis) * weight(x) * std::norm(d);
    }
  }
  return total;
}

// sum over axes and links of h^dim * factor * phi(x_mid, axis)
//   * conj(midpoint average of A) * (forward difference of B).
// With real phi this is the quadrature for integral phi_a conj(A) dB/dx_a.
// The tangential seam link is omitted: coordinate-weighted pairings concern
// fields that decay at the walls, where the seam carries nothing, and the
// coordinate itself is discontinuous across the identification.
template <class PhiFn>
cplx link_pairing(const VectorXcd& A, const VectorXcd& B, const Grid& grid, const Lattice& lat,
                  PhiFn&& phi) {
  const double h = grid.spacing;
  const double cell = std::pow(h, lat.dim);
  cplx total(0, 0);
  for (int axis = 0; axis < lat.dim; ++axis) {
    for (Index r = 0; r < lat.num; ++r) {
      const Index q = neighbor(lat, grid, r, axis, 1);
      if (q < 0) continue;
      auto x = grid.node_coord(r);
      x[static_cast<std::size_t>(axis)] += 0.5 * h;
      const double p = phi(x, axis);
      if (p == 0.0) continue;
      const cplx avg = 0.5 * (A[r] + A[q]);
      const cplx diff = (B[q] - B[r]) / h;
      total += cell * link_factor(lat, r, axis) * p * std::conj(avg) * diff;
    }
  }
  return total;
}

// sum over volume nodes of W_r * weight(r) * A_r * conj(B_r)
template <class WeightFn>
cplx weighted_mass(const VectorXcd& A, const VectorXcd& B, const Grid& grid, WeightFn&& weight) {
  cplx total(0, 0);
  for (Index r = 0; r < grid.num_nodes(); ++r) {
    const double w = weight(r);
    if (w == 0.0) continue;
    total += grid.quadrature_weights[r] * w * A[r] * std::conj(B[r]);
  }
  return total;
}

// Inverse-radial mass sum |u|^2 / |x|^p. In dimension 1 the boundary node
// sits exactly at the singularity and is excluded from the sum.
double inverse_radial_mass(const VectorXcd& u, const Grid& grid, double power) {
  double total = 0;
  for (Index r = 0; r < grid.num_nodes(); ++r) {
    const double rad = grid.radial(r);
    if (rad == 0.0) continue;  // dim 1 wall node only; offset lattice otherwise
    total += grid.quadrature_weights[r] * std::norm(u[r]) / std::pow(rad, power);
  }
  return total;
}

// Centered tangential derivative of the wall trace of a full-grid field,
// evaluated at boundary node b along tangential axis `axis` (one-sided at
// the outer walls).
cplx boundary_tangential_derivative(const VectorXcd& full, const Grid& grid, const Lattice& lat,
                                    Index b, int axis) {
  if (lat.dim == 1) return cplx(0, 0);
  const Index stride = lat.bstride[static_cast<std::size_t>(axis)];
  const Index j = (b / stride) % lat.n_tang;
  const double h = grid.spacing;
  const auto trace_at = [&](Index bb) { return full[grid.boundary_index[static_cast<std::size_t>(bb)]]; };
  if (j > 0 && j + 1 < lat.n_tang) {
    return (trace_at(b + stride) - trace_at(b - stride)) / (2 * h);
  }
  if (j == 0) return (trace_at(b + stride) - trace_at(b)) / h;
  return (trace_at(b) - trace_at(b - stride)) / h;
}

// sum over boundary nodes of surface weight * fn(b, flat index)
template <class Fn>
cplx surface_sum(const Grid& grid, Fn&& fn) {
  cplx total(0, 0);
  for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
    total += grid.surface_weights[b] * fn(b, grid.boundary_index[static_cast<std::size_t>(b)]);
  }
  return total;
}

// sum over boundary nodes and tangential axes of
//   surface weight * phi(x'_b, axis) * A(b) * conj(centered tangential dB)
template <class PhiFn>
cplx surface_pairing(const VectorXcd& A_boundary, const VectorXcd& B_full, const Grid& grid,
                     const Lattice& lat, PhiFn&& phi) {
  cplx total(0, 0);
  for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
    const auto x = grid.boundary_coord(b);
    cplx dots(0, 0);
    for (int axis = 0; axis + 1 < lat.dim; ++axis) {
      const double p = phi(x, axis);
      if (p == 0.0) continue;
      dots += p * std::conj(boundary_tangential_derivative(B_full, grid, lat, b, axis));
    }
    total += grid.surface_weights[b] * A_boundary[b] * dots;
  }
  return total;
}

void check_sizes(const ManufacturedProblem& mp, const Grid& grid, const char* op) {
  const Index n = grid.num_nodes();
  const Index nb = grid.num_boundary_nodes();
  if (mp.u.size() != n || mp.f.size() != n) {
    throw std::invalid_argument(std::string(op) + ": u and f must be full-grid node vectors of size " +
                                std::to_string(n));
  }
  if (mp.g.size() != nb || mp.alpha_ref.values.size() != nb) {
    throw std::invalid_argument(std::string(op) +
                                ": boundary data missing or mis-sized; g and alpha need " +
                                std::to_string(nb) + " boundary values");
  }
}

void check_wall_decay(const VectorXcd& u, const Grid& grid, const Lattice& lat) {
  const double peak = u.cwiseAbs().maxCoeff();
  if (peak == 0.0) return;
  double worst = 0;
  for (Index r = 0; r < lat.num; ++r) {
    const Index k = r % lat.n_norm;
    bool wall = (k == lat.n_norm - 1);
    for (int axis = 0; axis + 1 < lat.dim && !wall; ++axis) {
      const Index j = grid.tang_index(r, axis);
      wall = (j == 0 || j == lat.n_tang - 1);
    }
    if (wall) worst = std::max(worst, std::abs(u[r]));
  }
  if (worst > 1e-12 * peak) {
    throw std::invalid_argument(
        "manufactured_problem: field does not decay at the artificial walls (max wall value " +
        std::to_string(worst) + " vs peak " + std::to_string(peak) +
        "); shrink the profile or enlarge the box");
  }
}

IdentityResidualReport make_report(std::string id, cplx lhs, cplx rhs, const Grid& grid) {
  IdentityResidualReport rep;
  rep.identity_id = std::move(id);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = std::abs(lhs - rhs);
  rep.spacing = grid.spacing;
  rep.half_width = grid.half_width;
  return rep;
}

// Values shared by several identities for one (u, f, g, alpha) quadruple.
struct IdentityTerms {
  double energy = 0;            // sum |grad u|^2
  double energy_x = 0;          // sum |x| |grad u|^2
  double mass = 0;              // sum |u|^2
  double mass_x = 0;            // sum |x| |u|^2
  double mass_inv = 0;          // sum |u|^2 / |x|
  cplx f_u{0, 0};               // integral f conj(u)
  cplx f_u_x{0, 0};             // integral |x| f conj(u)
  cplx radial_flux{0, 0};       // integral (x/|x|) . conj(u) grad u
  cplx dilation_flux{0, 0};     // integral x . conj(u) grad u
  cplx f_dilation{0, 0};        // integral x . f conj(grad u)
  cplx g_u{0, 0};               // surface g conj(u)
  cplx g_u_x{0, 0};             // surface |x'| g conj(u)
  double alpha_re_u2 = 0;       // surface Re(alpha) |u|^2
  double alpha_im_u2 = 0;       // surface Im(alpha) |u|^2
  double alpha_re_u2_x = 0;     // surface |x'| Re(alpha) |u|^2
  double alpha_im_u2_x = 0;     // surface |x'| Im(alpha) |u|^2
  cplx alpha_u_xgrad{0, 0};     // surface alpha u x'. conj(grad_tan u)
  cplx g_xgrad{0, 0};           // surface g x'. conj(grad_tan u)
};

IdentityTerms identity_terms(const ManufacturedProblem& mp, const Grid& grid, const Lattice& lat) {
  IdentityTerms t;
  const VectorXcd& u = mp.u;
  const VectorXcd& f = mp.f;
  const VectorXcd& g = mp.g;
  const VectorXcd& a = mp.alpha_ref.values;
  const int dim = lat.dim;

  t.energy = link_energy(u, grid, lat, [](const std::array<double, 4>&) { return 1.0; });
  t.energy_x = link_energy(u, grid, lat,
                           [dim](const std::array<double, 4>& x) { return full_radius(x, dim); });
  t.mass = weighted_mass(u, u, grid, [](Index) { return 1.0; }).real();
  t.mass_x = weighted_mass(u, u, grid, [&](Index r) { return grid.radial(r); }).real();
  t.mass_inv = inverse_radial_mass(u, grid, 1.0);
  t.f_u = weighted_mass(f, u, grid, [](Index) { return 1.0; });
  t.f_u_x = weighted_mass(f, u, grid, [&](Index r) { return grid.radial(r); });

  // (x/|x|) . conj(u) grad u ; the only midpoint exactly at the origin is the
  // dimension-2 wall link crossing x' = 0, where the unit vector is set to 0.
  t.radial_flux = link_pairing(u, u, grid, lat, [dim](const std::array<double, 4>& x, int axis) {
    const double r = full_radius(x, dim);
    return r == 0.0 ? 0.0 : x[static_cast<std::size_t>(axis)] / r;
  });
  t.dilation_flux = link_pairing(u, u, grid, lat, [](const std::array<double, 4>& x, int axis) {
    return x[static_cast<std::size_t>(axis)];
  });
  t.f_dilation = link_pairing(f, u, grid, lat, [](const std::array<double, 4>& x, int axis) {
    return x[static_cast<std::size_t>(axis)];
  });

  t.g_u = surface_sum(grid, [&](Index b, Index flat) { return g[b] * std::conj(u[flat]); });
  t.g_u_x = surface_sum(grid, [&](Index b, Index flat) {
    return tangential_radius(grid.boundary_coord(b), dim) * g[b] * std::conj(u[flat]);
  });
  t.alpha_re_u2 = surface_sum(grid, [&](Index b, Index flat) {
                    return cplx(a[b].real() * std::norm(u[flat]), 0);
                  }).real();
  t.alpha_im_u2 = surface_sum(grid, [&](Index b, Index flat) {
                    return cplx(a[b].imag() * std::norm(u[flat]), 0);
                  }).real();
  t.alpha_re_u2_x = surface_sum(grid, [&](Index b, Index flat) {
                      const double w = tangential_radius(grid.boundary_coord(b), dim);
                      return cplx(w * a[b].real() * std::norm(u[flat]), 0);
                    }).real();
  t.alpha_im_u2_x = surface_sum(grid, [&](Index b, Index flat) {
                      const double w = tangential_radius(grid.boundary_coord(b), dim);
                      return cplx(w * a[b].imag() * std::norm(u[flat]), 0);
                    }).real();

  VectorXcd alpha_u(grid.num_boundary_nodes());
  for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
    alpha_u[b] = a[b] * u[grid.boundary_index[static_cast<std::size_t>(b)]];
  }
  t.alpha_u_xgrad = surface_pairing(alpha_u, u, grid, lat,
                                    [](const std::array<double, 4>& x, int axis) {
                                      return x[static_cast<std::size_t>(axis)];
                                    });
  t.g_xgrad = surface_pairing(g, u, grid, lat, [](const std::array<double, 4>& x, int axis) {
    return x[static_cast<std::size_t>(axis)];
  });
  return t;
}

double max_abs_or_zero(const VectorXcd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

// ---------------------------------------------------------------------------
// Manufactured problems
// ---------------------------------------------------------------------------

ManufacturedProblem manufactured_problem(const BumpProfile& profile, cplx lambda,
                                         const BoundaryFunction& alpha, const Grid& grid) {
  const Lattice lat = lattice(grid);
  if (alpha.values.size() != grid.num_boundary_nodes()) {
    throw std::invalid_argument("manufactured_problem: alpha has wrong boundary size");
  }
  const double s = profile.tangential_decay;
  const double tdec = profile.normal_decay;
  if (!(s > 0) || !(tdec > 0)) {
    throw std::invalid_argument("manufactured_problem: decay rates must be positive");
  }
  const double cn = profile.center[static_cast<std::size_t>(lat.dim - 1)];
  const auto poly = profile.poly;

  const auto q_val = [&](double xn) -> cplx {
    const double d = xn - cn;
    return (poly[0] + poly[1] * xn + poly[2] * xn * xn) * std::exp(-tdec * d * d);
  };
  const auto q_prime = [&](double xn) -> cplx {
    const double d = xn - cn;
    const cplx P = poly[0] + poly[1] * xn + poly[2] * xn * xn;
    const cplx Pp = poly[1] + 2.0 * poly[2] * xn;
    return (Pp - 2 * tdec * d * P) * std::exp(-tdec * d * d);
  };
  const auto q_second = [&](double xn) -> cplx {
    const double d = xn - cn;
    const cplx P = poly[0] + poly[1] * xn + poly[2] * xn * xn;
    const cplx Pp = poly[1] + 2.0 * poly[2] * xn;
    const cplx Ppp = 2.0 * poly[2];
    return (Ppp - 2 * tdec * P - 4 * tdec * d * Pp + 4 * tdec * tdec * d * d * P) *
           std::exp(-tdec * d * d);
  };
  const auto bump = [&](const std::array<double, 4>& x) {
    double rho2 = 0;
    for (int a = 0; a + 1 < lat.dim; ++a) {
      rho2 += sq(x[static_cast<std::size_t>(a)] - profile.center[static_cast<std::size_t>(a)]);
    }
    return std::pair<double, double>{std::exp(-s * rho2), rho2};
  };

  ManufacturedProblem mp;
  mp.lambda = lambda;
  mp.alpha_ref = alpha;
  mp.method = "analytic";
  mp.u.resize(lat.num);
  mp.f.resize(lat.num);
  for (Index r = 0; r < lat.num; ++r) {
    const auto x = grid.node_coord(r);
    const auto [G, rho2] = bump(x);
    const double lapG = (4 * s * s * rho2 - 2 * s * (lat.dim - 1)) * G;
    const double xn = x[static_cast<std::size_t>(lat.dim - 1)];
    const cplx u = profile.amplitude * G * q_val(xn);
    const cplx lap = profile.amplitude * (lapG * q_val(xn) + G * q_second(xn));
    mp.u[r] = u;
    mp.f[r] = -lap - lambda * u;
  }
  mp.g.resize(grid.num_boundary_nodes());
  for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
    const auto x = grid.boundary_coord(b);
    const auto [G, rho2] = bump(x);
    (void)rho2;
    const cplx u0 = profile.amplitude * G * q_val(0.0);
    mp.g[b] = -profile.amplitude * G * q_prime(0.0) + alpha.values[b] * u0;
  }
  check_wall_decay(mp.u, grid, lat);
  return mp;
}

ManufacturedProblem manufactured_problem_fd4(const VectorXcd& u_full, cplx lambda,
                                             const BoundaryFunction& alpha, const Grid& grid) {
  const Lattice lat = lattice(grid);
  if (u_full.size() != lat.num) {
    throw std::invalid_argument("manufactured_problem_fd4: field must be a full-grid node vector");
  }
  if (alpha.values.size() != grid.num_boundary_nodes()) {
    throw std::invalid_argument("manufactured_problem_fd4: alpha has wrong boundary size");
  }
  check_wall_decay(u_full, grid, lat);
  const double h = grid.spacing;
  const double h2 = h * h;

  // Fourth-order second-derivative stencils: central (-1 16 -30 16 -1)/12,
  // and one-sided rows at the wall where no below-wall samples exist.
  static const std::array<double, 6> kEdge0 = {45, -154, 214, -156, 61, -10};
  static const std::array<double, 6> kEdge1 = {10, -15, -4, 14, -6, 1};

  VectorXcd lap = VectorXcd::Zero(lat.num);
  for (int axis = 0; axis < lat.dim; ++axis) {
    const bool is_normal = (axis == lat.dim - 1);
    for (Index r = 0; r < lat.num; ++r) {
      const Index pos = is_normal ? (r % lat.n_norm) : grid.tang_index(r, axis);
      const Index len = is_normal ? lat.n_norm : lat.n_tang;
      cplx acc(0, 0);
      if (is_normal && pos <= 1 && len >= 6) {
        const auto& row = (pos == 0) ? kEdge0 : kEdge1;
        const Index base = (pos == 0) ? r : neighbor(lat, grid, r, axis, -1);
        for (int i = 0; i < 6; ++i) {
          acc += row[static_cast<std::size_t>(i)] * u_full[base + i];
        }
        acc /= 12.0 * h2;
      } else if (is_normal && pos >= len - 2 && len >= 6) {
        const auto& row = (pos == len - 1) ? kEdge0 : kEdge1;
        const Index base = (pos == len - 1) ? r : neighbor(lat, grid, r, axis, 1);
        for (int i = 0; i < 6; ++i) {
          acc += row[static_cast<std::size_t>(i)] * u_full[base - i];
        }
        acc /= 12.0 * h2;
      } else {
        // Central; zero extension is exact because the field decays at the
        // tangential walls and the top.
        const cplx m2 = at_or_zero(u_full, neighbor(lat, grid, r, axis, -2));
        const cplx m1 = at_or_zero(u_full, neighbor(lat, grid, r, axis, -1));
        const cplx p1 = at_or_zero(u_full, neighbor(lat, grid, r, axis, 1));
        const cplx p2 = at_or_zero(u_full, neighbor(lat, grid, r, axis, 2));
        acc = (-m2 + 16.0 * m1 - 30.0 * u_full[r] + 16.0 * p1 - p2) / (12.0 * h2);
      }
      lap[r] += acc;
    }
  }

  ManufacturedProblem mp;
  mp.lambda = lambda;
  mp.alpha_ref = alpha;
  mp.method = "fd4";
  mp.u = u_full;
  mp.f = -lap - lambda * u_full;
  mp.g.resize(grid.num_boundary_nodes());
  if (lat.n_norm < 5) {
    throw std::invalid_argument("manufactured_problem_fd4: need at least 5 normal layers");
  }
  for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
    const Index flat = grid.boundary_index[static_cast<std::size_t>(b)];
    const cplx dn = (-25.0 * u_full[flat] + 48.0 * u_full[flat + 1] - 36.0 * u_full[flat + 2] +
                     16.0 * u_full[flat + 3] - 3.0 * u_full[flat + 4]) /
                    (12.0 * h);
    mp.g[b] = -dn + alpha.values[b] * u_full[flat];
  }
  return mp;
}

// ---------------------------------------------------------------------------
// Identity residuals
// ---------------------------------------------------------------------------

std::vector<IdentityResidualReport> identity_residuals(const ManufacturedProblem& mp,
                                                       const Grid& grid) {
  const Lattice lat = lattice(grid);
  check_sizes(mp, grid, "identity_residuals");
  const IdentityTerms t = identity_terms(mp, grid, lat);
  const cplx lam = mp.lambda;
  const double re_lam = lam.real();
  const double im_lam = lam.imag();
  const int n = lat.dim;

  std::vector<IdentityResidualReport> out;
  out.reserve(6);

  // Complex weak form with the test function equal to u itself.
  {
    const cplx lhs = cplx(t.energy, 0) + cplx(t.alpha_re_u2, t.alpha_im_u2);
    const cplx rhs = lam * t.mass + t.f_u + t.g_u;
    out.push_back(make_report("greens", lhs, rhs, grid));
  }

  if (n >= 2) {
    out.push_back(make_report(
        "I1", cplx(t.energy + t.alpha_re_u2, 0),
        cplx(re_lam * t.mass + t.f_u.real() + t.g_u.real(), 0), grid));
    out.push_back(make_report(
        "I2",
        cplx(-0.5 * (n - 1) * t.mass_inv + t.energy_x + t.alpha_re_u2_x, 0),
        cplx(re_lam * t.mass_x + t.f_u_x.real() + t.g_u_x.real(), 0), grid));
    out.push_back(make_report("I3", cplx(t.alpha_im_u2, 0),
                              cplx(im_lam * t.mass + t.f_u.imag() + t.g_u.imag(), 0), grid));
    out.push_back(make_report(
        "I4", cplx(t.radial_flux.imag() + t.alpha_im_u2_x, 0),
        cplx(im_lam * t.mass_x + t.f_u_x.imag() + t.g_u_x.imag(), 0), grid));
    // conj(u) grad u pairing has the dilation flux conjugated relative to
    // u grad conj(u); Im flips sign, Re of the f pairing does not.
    const double im_u_grad_ubar = -t.dilation_flux.imag();
    const double re_f_dilation = t.f_dilation.real();
    out.push_back(make_report(
        "I5",
        cplx(2 * t.energy + n * t.alpha_re_u2 + 2 * t.alpha_u_xgrad.real(), 0),
        cplx(-2 * im_lam * im_u_grad_ubar + n * t.f_u.real() + 2 * re_f_dilation +
                 n * t.g_u.real() + 2 * t.g_xgrad.real(),
             0),
        grid));
  } else {
    const Index wall = grid.boundary_index[0];
    const double u0sq = std::norm(mp.u[wall]);
    const cplx a0 = mp.alpha_ref.values[0];
    const cplx gu0 = mp.g[0] * std::conj(mp.u[wall]);
    out.push_back(make_report("I1'", cplx(t.energy + a0.real() * u0sq, 0),
                              cplx(re_lam * t.mass + t.f_u.real() + gu0.real(), 0), grid));
    out.push_back(make_report("I2'", cplx(t.energy_x - 0.5 * u0sq, 0),
                              cplx(re_lam * t.mass_x + t.f_u_x.real(), 0), grid));
    out.push_back(make_report("I3'", cplx(a0.imag() * u0sq, 0),
                              cplx(im_lam * t.mass + t.f_u.imag() + gu0.imag(), 0), grid));
    out.push_back(make_report("I4'", cplx(t.radial_flux.imag(), 0),
                              cplx(im_lam * t.mass_x + t.f_u_x.imag(), 0), grid));
    out.push_back(make_report(
        "I5'", cplx(2 * t.energy + a0.real() * u0sq, 0),
        cplx(-2 * im_lam * (-t.dilation_flux.imag()) + t.f_u.real() + 2 * t.f_dilation.real() +
                 gu0.real(),
             0),
        grid));
  }
  return out;
}

void attach_order_estimates(std::vector<IdentityResidualReport>& coarse,
                            const std::vector<IdentityResidualReport>& fine) {
  for (auto& rep : coarse) {
    for (const auto& f : fine) {
      if (f.identity_id == rep.identity_id && f.residual > 0) {
        rep.order_estimate = std::log2(rep.residual / f.residual);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Dilation (virial) identity
// ---------------------------------------------------------------------------

IdentityResidualReport virial_residual(const VectorXcd& u_full, const BoundaryFunction& alpha,
                                       cplx lambda, const std::optional<VirialTerms>& terms,
                                       const Grid& grid) {
  const Lattice lat = lattice(grid);
  if (u_full.size() != lat.num) {
    throw std::invalid_argument("virial_residual: field must be a full-grid node vector");
  }
  if (alpha.values.size() != grid.num_boundary_nodes()) {
    throw std::invalid_argument("virial_residual: alpha has wrong boundary size");
  }
  if (std::abs(lambda.imag()) > 1e-12 * std::max(1.0, std::abs(lambda))) {
    throw std::invalid_argument(
        "virial_residual: the dilation identity applies to real spectral parameters; got Im = " +
        std::to_string(lambda.imag()));
  }
  const int n = lat.dim;
  const double energy = link_energy(u_full, grid, lat, [](const std::array<double, 4>&) { return 1.0; });
  const double mass = weighted_mass(u_full, u_full, grid, [](Index) { return 1.0; }).real();

  const RadialDerivativeField rd = radial_derivative(alpha, grid);
  const cplx surf = surface_sum(grid, [&](Index b, Index flat) {
    return rd.x_dot_grad[b] * std::norm(u_full[flat]);
  });

  const cplx lhs = cplx(energy, 0) + lambda.real() * mass - surf;

  cplx rhs(0, 0);
  if (terms.has_value()) {
    if (terms->f_volume.size() != lat.num || terms->g_boundary.size() != grid.num_boundary_nodes()) {
      throw std::invalid_argument("virial_residual: defect fields have wrong sizes");
    }
    const cplx f_u = weighted_mass(terms->f_volume, u_full, grid, [](Index) { return 1.0; });
    const cplx f_dil = link_pairing(terms->f_volume, u_full, grid, lat,
                                    [](const std::array<double, 4>& x, int axis) {
                                      return x[static_cast<std::size_t>(axis)];
                                    });
    const cplx g_u = surface_sum(grid, [&](Index b, Index flat) {
      return terms->g_boundary[b] * std::conj(u_full[flat]);
    });
    const cplx g_dil = surface_pairing(terms->g_boundary, u_full, grid, lat,
                                       [](const std::array<double, 4>& x, int axis) {
                                         return x[static_cast<std::size_t>(axis)];
                                       });
    rhs = cplx((n - 1) * f_u.real() + 2 * f_dil.real() + (n - 1) * g_u.real() + 2 * g_dil.real(), 0);
  }
  auto rep = make_report("virial", lhs, rhs, grid);
  return rep;
}

// ---------------------------------------------------------------------------
// Sector transform and the two sector inequalities
// ---------------------------------------------------------------------------

VectorXcd u_minus_transform(const VectorXcd& u_full, cplx lambda, const Grid& grid) {
  const Lattice lat = lattice(grid);
  if (u_full.size() != lat.num) {
    throw std::invalid_argument("u_minus_transform: field must be a full-grid node vector");
  }
  if (lambda.imag() == 0.0) {
    throw std::invalid_argument(
        "u_minus_transform: requires Im(lambda) != 0; for real spectral parameters the phase "
        "twist degenerates and no transform is needed");
  }
  const double k0 = lambda.real() > 0 ? std::sqrt(lambda.real()) : 0.0;
  const double sign = lambda.imag() > 0 ? 1.0 : -1.0;
  VectorXcd out(lat.num);
  for (Index r = 0; r < lat.num; ++r) {
    const double phase = -k0 * sign * grid.radial(r);
    out[r] = std::polar(1.0, phase) * u_full[r];
  }
  return out;
}

IdentityResidualReport crucial_inequality_gap(const ManufacturedProblem& mp, const Grid& grid,
                                              SectorInequality which) {
  const Lattice lat = lattice(grid);
  check_sizes(mp, grid, "crucial_inequality_gap");
  const int n = lat.dim;
  if (n < 2) {
    throw std::invalid_argument("crucial_inequality_gap: requires dimension >= 2");
  }
  const cplx lam = mp.lambda;
  if (lam.imag() == 0.0 || std::abs(lam.imag()) > lam.real()) {
    throw std::invalid_argument(
        "crucial_inequality_gap: spectral parameter must satisfy 0 < |Im| <= Re (sector)");
  }
  const double g_peak = max_abs_or_zero(mp.g);
  if (g_peak > 1e-10 * (1.0 + max_abs_or_zero(mp.u))) {
    throw std::invalid_argument(
        "crucial_inequality_gap: requires homogeneous boundary data (g ~ 0); got max |g| = " +
        std::to_string(g_peak));
  }

  const double kappa = std::abs(lam.imag()) / std::sqrt(lam.real());
  const VectorXcd um = u_minus_transform(mp.u, lam, grid);
  const VectorXcd fm = u_minus_transform(mp.f, lam, grid);

  const double energy_m = link_energy(um, grid, lat, [](const std::array<double, 4>&) { return 1.0; });
  const double energy_m_x =
      link_energy(um, grid, lat, [n](const std::array<double, 4>& x) { return full_radius(x, n); });

  // Surface pieces shared or variant-specific. |x| = |x'| on the boundary.
  const VectorXcd& a = mp.alpha_ref.values;
  double alpha_re_u2 = 0, alpha_re_u2_x = 0;
  for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
    const Index flat = grid.boundary_index[static_cast<std::size_t>(b)];
    const double w = grid.surface_weights[b];
    const double xr = tangential_radius(grid.boundary_coord(b), n);
    alpha_re_u2 += w * a[b].real() * std::norm(mp.u[flat]);
    alpha_re_u2_x += w * xr * a[b].real() * std::norm(mp.u[flat]);
  }

  double lhs = energy_m + (static_cast<double>(n - 3) / (n - 1)) * kappa * energy_m_x +
               kappa * alpha_re_u2_x;

  if (which == SectorInequality::kCouplingForm) {
    VectorXcd alpha_um(grid.num_boundary_nodes());
    for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
      alpha_um[b] = a[b] * um[grid.boundary_index[static_cast<std::size_t>(b)]];
    }
    const cplx coupling = surface_pairing(alpha_um, um, grid, lat,
                                          [](const std::array<double, 4>& x, int axis) {
                                            return x[static_cast<std::size_t>(axis)];
                                          });
    lhs += (n - 1) * alpha_re_u2 + 2 * coupling.real();
  } else {
    const RadialDerivativeField rd = radial_derivative(mp.alpha_ref, grid);
    double xgrad_re = 0;
    VectorXcd imalpha_um(grid.num_boundary_nodes());
    for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
      const Index flat = grid.boundary_index[static_cast<std::size_t>(b)];
      xgrad_re += grid.surface_weights[b] * rd.x_dot_grad_re[b] * std::norm(mp.u[flat]);
      imalpha_um[b] = a[b].imag() * um[flat];
    }
    const cplx twist = surface_pairing(imalpha_um, um, grid, lat,
                                       [](const std::array<double, 4>& x, int axis) {
                                         return x[static_cast<std::size_t>(axis)];
                                       });
    lhs += -xgrad_re - 2 * twist.imag();
  }

  const cplx f_u = weighted_mass(mp.f, mp.u, grid, [](Index) { return 1.0; });
  const cplx f_u_x = weighted_mass(mp.f, mp.u, grid, [&](Index r) { return grid.radial(r); });
  const cplx f_dil_m = link_pairing(fm, um, grid, lat, [](const std::array<double, 4>& x, int axis) {
    return x[static_cast<std::size_t>(axis)];
  });
  const double rhs = (n - 1) * f_u.real() + 2 * f_dil_m.real() + kappa * f_u_x.real();

  return make_report(which == SectorInequality::kCouplingForm ? "crucial_33" : "crucial_34",
                     cplx(lhs, 0), cplx(rhs, 0), grid);
}

// ---------------------------------------------------------------------------
// Smooth cutoff and truncation defects
// ---------------------------------------------------------------------------

double cutoff_profile(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double A = std::exp(-1.0 / (2.0 - r));
  const double B = std::exp(-1.0 / (r - 1.0));
  return A / (A + B);
}

double cutoff_profile_derivative(double r) {
  if (r <= 1.0 || r >= 2.0) return 0.0;
  const double A = std::exp(-1.0 / (2.0 - r));
  const double B = std::exp(-1.0 / (r - 1.0));
  const double Ap = -A / sq(2.0 - r);
  const double Bp = B / sq(r - 1.0);
  return (Ap * B - A * Bp) / sq(A + B);
}

namespace {

double cutoff_second_derivative(double r) {
  const double step = 1e-5;
  return (cutoff_profile_derivative(r + step) - cutoff_profile_derivative(r - step)) / (2 * step);
}

double scan_max(const std::function<double(double)>& fn) {
  double best = 0;
  const int samples = 200000;
  for (int i = 1; i < samples; ++i) {
    const double r = 1.0 + static_cast<double>(i) / samples;
    best = std::max(best, std::abs(fn(r)));
  }
  return best;
}

}  // namespace

double cutoff_gradient_constant() {
  static const double c = scan_max(cutoff_profile_derivative);
  return c;
}

double cutoff_curvature_constant(int dim) {
  if (dim < 1 || dim > 3) {
    throw std::invalid_argument("cutoff_curvature_constant: dim must be 1, 2, or 3");
  }
  static std::array<double, 3> cache{0, 0, 0};
  auto& slot = cache[static_cast<std::size_t>(dim - 1)];
  if (slot == 0) {
    slot = scan_max([dim](double r) {
      return cutoff_second_derivative(r) + (dim - 1) * cutoff_profile_derivative(r) / r;
    });
  }
  return slot;
}

std::vector<CutoffErrorRow> cutoff_errors(const VectorXcd& u_full, const Grid& grid,
                                          const std::vector<double>& radii) {
  const Lattice lat = lattice(grid);
  if (u_full.size() != lat.num) {
    throw std::invalid_argument("cutoff_errors: field must be a full-grid node vector");
  }
  const double h = grid.spacing;
  for (double R : radii) {
    if (!(R > 0) || 2 * R > grid.half_width) {
      throw std::invalid_argument(
          "cutoff_errors: each radius must satisfy 0 < 2R <= half_width so the window closes "
          "inside the box");
    }
  }

  // Centered volume derivative with one-sided fallback at lattice edges.
  const auto volume_derivative = [&](Index r, int axis) -> cplx {
    const Index up = neighbor(lat, grid, r, axis, 1);
    const Index dn = neighbor(lat, grid, r, axis, -1);
    if (up >= 0 && dn >= 0) return (u_full[up] - u_full[dn]) / (2 * h);
    if (up >= 0) return (u_full[up] - u_full[r]) / h;
    if (dn >= 0) return (u_full[r] - u_full[dn]) / h;
    return cplx(0, 0);
  };

  std::vector<CutoffErrorRow> out;
  out.reserve(radii.size());
  for (double R : radii) {
    CutoffErrorRow row;
    row.radius = R;
    double e1 = 0, e2 = 0;
    for (Index r = 0; r < lat.num; ++r) {
      const double rad = grid.radial(r);
      const double rho = rad / R;
      if (rho <= 1.0 || rho >= 2.0) continue;
      const double xi_p = cutoff_profile_derivative(rho);
      const double lap_xi =
          (cutoff_second_derivative(rho) + (lat.dim - 1) * cutoff_profile_derivative(rho) / rho) /
          (R * R);
      const auto x = grid.node_coord(r);
      cplx grad_dot(0, 0);
      for (int axis = 0; axis < lat.dim; ++axis) {
        const double dir = x[static_cast<std::size_t>(axis)] / rad;
        grad_dot += (xi_p / R) * dir * volume_derivative(r, axis);
      }
      const cplx defect = 2.0 * grad_dot + u_full[r] * lap_xi;
      const double w = grid.quadrature_weights[r];
      e1 += w * std::norm(defect);
      e2 += w * rad * rad * std::norm(defect);
    }
    row.eps1 = std::sqrt(e1);
    row.eps2 = std::sqrt(e2);

    // Discrete Robin-trace commutator: the window's normal forward difference
    // at the wall times the first interior layer of the field.
    double e3 = 0, e4 = 0;
    for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
      const Index flat = grid.boundary_index[static_cast<std::size_t>(b)];
      const double xr = tangential_radius(grid.boundary_coord(b), lat.dim);
      const double xi_wall = cutoff_profile(xr / R);
      const double xi_up = cutoff_profile(std::sqrt(xr * xr + h * h) / R);
      const cplx commutator = -u_full[flat + 1] * (xi_up - xi_wall) / h;
      const double w = grid.surface_weights[b];
      e3 += w * std::norm(commutator);
      e4 += w * xr * xr * std::norm(commutator);
    }
    row.eps3 = std::sqrt(e3);
    row.eps4 = std::sqrt(e4);
    out.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Singular-weight (Hardy) ratios
// ---------------------------------------------------------------------------

double hardy_ratio(const VectorXcd& psi_full, const Grid& grid, HardyVariant variant) {
  const Lattice lat = lattice(grid);
  if (psi_full.size() != lat.num) {
    throw std::invalid_argument("hardy_ratio: field must be a full-grid node vector");
  }
  if (variant == HardyVariant::kUnweighted && lat.dim < 3) {
    throw std::invalid_argument("hardy_ratio: the unweighted ratio needs dimension >= 3");
  }
  if (variant == HardyVariant::kWeighted && lat.dim < 2) {
    throw std::invalid_argument("hardy_ratio: the weighted ratio needs dimension >= 2");
  }
  const double power = variant == HardyVariant::kUnweighted ? 2.0 : 1.0;
  const double num = inverse_radial_mass(psi_full, grid, power);
  const double den =
      variant == HardyVariant::kUnweighted
          ? link_energy(psi_full, grid, lat, [](const std::array<double, 4>&) { return 1.0; })
          : link_energy(psi_full, grid, lat,
                        [&](const std::array<double, 4>& x) { return full_radius(x, lat.dim); });
  if (den == 0.0) {
    throw std::invalid_argument("hardy_ratio: zero energy denominator");
  }
  return num / den;
}

// ---------------------------------------------------------------------------
// Trace checks
// ---------------------------------------------------------------------------

TraceCheck trace_half_norm_check(const VectorXcd& u_full, const Grid& grid,
                                 const TaperSpec& taper) {
  const Lattice lat = lattice(grid);
  if (lat.dim < 2) {
    throw std::invalid_argument("trace_half_norm_check: requires dimension >= 2");
  }
  if (u_full.size() != lat.num) {
    throw std::invalid_argument("trace_half_norm_check: field must be a full-grid node vector");
  }
  VectorXcd trace(grid.num_boundary_nodes());
  for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
    trace[b] = u_full[grid.boundary_index[static_cast<std::size_t>(b)]];
  }

  TraceCheck out;
  out.trace_norm_sq = sobolev_half_norm_sq(trace, grid, taper);
  out.grad_norm_sq =
      link_energy(u_full, grid, lat, [](const std::array<double, 4>&) { return 1.0; });

  // Decaying-multiplier extension of the trace, level by level: the layer at
  // height k*h applies the symbol exp(-|xi| k h) to the trace.
  VectorXcd extension(lat.num);
  const double h = grid.spacing;
  for (Index k = 0; k < lat.n_norm; ++k) {
    const double depth = static_cast<double>(k) * h;
    const VectorXcd layer = boundary_multiplier_apply(
        trace, grid, [depth](double xi) { return std::exp(-xi * depth); }, taper);
    for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
      extension[grid.boundary_index[static_cast<std::size_t>(b)] + k] = layer[b];
    }
  }
  out.extension_norm_sq =
      link_energy(extension, grid, lat, [](const std::array<double, 4>&) { return 1.0; });
  return out;
}

TraceInterpolation trace_interpolation_check(const VectorXcd& u_full, const Grid& grid,
                                             double epsilon) {
  const Lattice lat = lattice(grid);
  if (!(epsilon > 0)) {
    throw std::invalid_argument("trace_interpolation_check: epsilon must be positive");
  }
  if (u_full.size() != lat.num) {
    throw std::invalid_argument("trace_interpolation_check: field must be a full-grid node vector");
  }
  TraceInterpolation out;
  out.lhs = surface_sum(grid, [&](Index b, Index flat) {
              (void)b;
              return cplx(std::norm(u_full[flat]), 0);
            }).real();
  const double energy =
      link_energy(u_full, grid, lat, [](const std::array<double, 4>&) { return 1.0; });
  const double mass = weighted_mass(u_full, u_full, grid, [](Index) { return 1.0; }).real();
  out.rhs = epsilon * energy + mass / epsilon;
  return out;
}

// ---------------------------------------------------------------------------
// Difference quotients and their exact identities
// ---------------------------------------------------------------------------

namespace {

Index lattice_steps(double delta, double h) {
  const double ratio = delta / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio)) || rounded == 0.0) {
    throw std::invalid_argument(
        "difference quotient: delta must be a nonzero signed multiple of the spacing");
  }
  return static_cast<Index>(rounded);
}

void check_direction(int direction, int dim) {
  if (direction < 0 || direction >= dim) {
    throw std::invalid_argument("difference quotient: direction must be in [0, dim)");
  }
}

// Shifted read with zero extension everywhere.
cplx shifted_zero(const VectorXcd& v, const Grid& grid, const Lattice& lat, Index r, int axis,
                  Index steps) {
  if (axis == lat.dim - 1) {
    const Index k = r % lat.n_norm + steps;
    if (k < 0 || k >= lat.n_norm) return cplx(0, 0);
    return v[r + steps];
  }
  const Index j = grid.tang_index(r, axis) + steps;
  if (j < 0 || j >= lat.n_tang) return cplx(0, 0);
  return v[r + steps * lat.tstride[static_cast<std::size_t>(axis)]];
}

// Shifted read with even reflection below the wall (normal axis only) and
// zero extension elsewhere.
cplx shifted_reflect(const VectorXcd& v, const Grid& grid, const Lattice& lat, Index r, int axis,
                     Index steps) {
  if (axis != lat.dim - 1) return shifted_zero(v, grid, lat, r, axis, steps);
  Index k = r % lat.n_norm + steps;
  if (k < 0) k = -k;  // u(-kh) := u(kh)
  if (k >= lat.n_norm) return cplx(0, 0);
  return v[r - (r % lat.n_norm) + k];
}

}  // namespace

VectorXcd difference_quotient(const VectorXcd& field_full, int direction, double delta,
                              const Grid& grid) {
  const Lattice lat = lattice(grid);
  check_direction(direction, lat.dim);
  if (field_full.size() != lat.num) {
    throw std::invalid_argument("difference_quotient: field must be a full-grid node vector");
  }
  const Index steps = lattice_steps(delta, grid.spacing);
  VectorXcd out(lat.num);
  for (Index r = 0; r < lat.num; ++r) {
    out[r] = (shifted_zero(field_full, grid, lat, r, direction, steps) - field_full[r]) / delta;
  }
  return out;
}

DqResiduals dq_identity_residuals(const VectorXcd& field_full, int direction, double delta,
                                  const Grid& grid) {
  const Lattice lat = lattice(grid);
  check_direction(direction, lat.dim);
  if (field_full.size() != lat.num) {
    throw std::invalid_argument("dq_identity_residuals: field must be a full-grid node vector");
  }
  const Index steps = lattice_steps(delta, grid.spacing);
  const double h = grid.spacing;
  const double cell = std::pow(h, lat.dim);

  DqResiduals out;

  // Pointwise product rule: 2 Re(conj(psi) d psi) = d|psi|^2 - delta |d psi|^2.
  // Zero extension is self-consistent (|0|^2 = 0), so this holds at every
  // node including those whose shifted read falls outside the lattice.
  {
    VectorXcd abs2(lat.num);
    for (Index r = 0; r < lat.num; ++r) abs2[r] = std::norm(field_full[r]);
    double worst = 0;
    for (Index r = 0; r < lat.num; ++r) {
      const cplx dpsi =
          (shifted_zero(field_full, grid, lat, r, direction, steps) - field_full[r]) / delta;
      const cplx dabs2 = (shifted_zero(abs2, grid, lat, r, direction, steps) - abs2[r]) / delta;
      const double defect =
          std::abs(2 * (std::conj(field_full[r]) * dpsi).real() - dabs2.real() + delta * std::norm(dpsi));
      worst = std::max(worst, defect);
    }
    out.product_rule_residual = worst;
  }

  // Summation by parts with phi = psi = field. Below the wall the field is
  // extended by even reflection, which feeds the boundary-strip correction;
  // above the top and beyond the tangential walls it reads as zero.
  {
    const bool is_normal = (direction == lat.dim - 1);
    cplx left(0, 0), right(0, 0);
    for (Index r = 0; r < lat.num; ++r) {
      const cplx dpsi =
          (shifted_reflect(field_full, grid, lat, r, direction, steps) - field_full[r]) / delta;
      const cplx dphi_back =
          (shifted_reflect(field_full, grid, lat, r, direction, -steps) - field_full[r]) / (-delta);
      left += cell * field_full[r] * dpsi;
      right += cell * dphi_back * field_full[r];
    }
    cplx strip(0, 0);
    if (is_normal) {
      const Index lo = steps > 0 ? 0 : steps;
      const Index hi = steps > 0 ? steps : 0;
      const double sign = steps > 0 ? 1.0 : -1.0;
      for (Index t = 0; t < lat.num / lat.n_norm; ++t) {
        for (Index k = lo; k < hi; ++k) {
          const Index base = t * lat.n_norm;  // wall node of this column
          // psi at level k (reflected if below the wall), phi at level k - steps.
          Index kp = k < 0 ? -k : k;
          Index kq = k - steps;
          if (kq < 0) kq = -kq;
          const cplx psi = kp < lat.n_norm ? field_full[base + kp] : cplx(0, 0);
          const cplx phi = kq < lat.n_norm ? field_full[base + kq] : cplx(0, 0);
          strip += sign * (cell / delta) * phi * psi;
        }
      }
    }
    out.ibp_residual = std::abs(left + right + strip);
  }
  return out;
}

double dirichlet_energy(const VectorXcd& field_full, const Grid& grid) {
  const Lattice lat = lattice(grid);
  if (field_full.size() != lat.num) {
    throw std::invalid_argument("dirichlet_energy: field must be a full-grid node vector");
  }
  return link_energy(field_full, grid, lat, [](const std::array<double, 4>&) { return 1.0; });
}

}  // namespace robinspec
