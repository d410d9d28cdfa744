#include "robinspec/operator.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace robinspec {

namespace {

// Full-grid tangential strides, axis 0 slowest; boundary-column strides are
// these divided by n_norm.
std::vector<Index> column_strides(const Grid& grid) {
  const int d = grid.boundary_dim();
  std::vector<Index> st(static_cast<std::size_t>(std::max(d, 1)), 1);
  for (int a = d - 2; a >= 0; --a) {
    st[static_cast<std::size_t>(a)] = st[static_cast<std::size_t>(a + 1)] * grid.n_tang;
  }
  return st;
}

void check_full_size(const Grid& grid, const VectorXcd& u, const char* what) {
  if (u.size() != grid.num_nodes()) {
    throw std::invalid_argument(std::string(what) + ": expected a full-grid field of size " +
                                std::to_string(grid.num_nodes()));
  }
}

struct FacePieces {
  cplx gradient{0, 0};
  cplx wall{0, 0};
  cplx boundary{0, 0};
};

// Forward-difference face sums over the unknown levels k < n_norm-1, matching
// the assembled stiffness term by term. The top-wall face uses the stored
// node value, so fields vanishing there reproduce conj(v)^T K u exactly.
FacePieces face_sums(const DiscreteOperator& op, const VectorXcd& u, const VectorXcd& v) {
  const Grid& g = op.grid;
  const int d = g.boundary_dim();
  const Index Kt = g.n_norm - 1;
  const Index nb = g.num_boundary_nodes();
  const double h = g.spacing;
  const double c_n = std::pow(h, g.dim - 1) / h;
  const auto cst = column_strides(g);

  FacePieces out;
  for (Index b = 0; b < nb; ++b) {
    const Index f0 = b * g.n_norm;
    for (Index k = 0; k < Kt; ++k) {
      const cplx du = u[f0 + k + 1] - u[f0 + k];
      const cplx dv = v[f0 + k + 1] - v[f0 + k];
      out.gradient += c_n * du * std::conj(dv);
    }
    out.boundary += g.surface_weights[b] * op.alpha.values[b] * u[f0] * std::conj(v[f0]);
    for (int a = 0; a < d; ++a) {
      const Index st = cst[static_cast<std::size_t>(a)];
      const Index j = (b / st) % g.n_tang;
      const Index fn = (b + st) * g.n_norm;
      for (Index k = 0; k < Kt; ++k) {
        const double c_t = c_n * (k == 0 ? 0.5 : 1.0);
        if (j + 1 < g.n_tang) {
          const cplx du = u[fn + k] - u[f0 + k];
          const cplx dv = v[fn + k] - v[f0 + k];
          out.gradient += c_t * du * std::conj(dv);
        }
        if (j == 0 || j == g.n_tang - 1) {
          out.wall += 2.0 * c_t * u[f0 + k] * std::conj(v[f0 + k]);
        }
      }
    }
  }
  return out;
}

}  // namespace

Index DiscreteOperator::boundary_unknown(Index b) const {
  return b * (grid.n_norm - 1);
}

VectorXcd DiscreteOperator::apply(const VectorXcd& u) const {
  if (u.size() != size()) throw std::invalid_argument("apply: reduced vector size mismatch");
  VectorXcd ku = stiffness * u;
  return ku.cwiseQuotient(weights.cast<cplx>());
}

SpMatC DiscreteOperator::operator_matrix() const {
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(stiffness.nonZeros()));
  for (Index c = 0; c < stiffness.outerSize(); ++c) {
    for (SpMatC::InnerIterator it(stiffness, c); it; ++it) {
      trips.emplace_back(it.row(), it.col(), it.value() / weights[it.row()]);
    }
  }
  SpMatC a(size(), size());
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

DiscreteOperator assemble(const Grid& grid, const BoundaryFunction& alpha) {
  grid.require_volume("assemble");
  if (alpha.values.size() != grid.num_boundary_nodes()) {
    throw std::invalid_argument("assemble: boundary data does not match the grid");
  }
  const int d = grid.boundary_dim();
  const Index Kt = grid.n_norm - 1;  // unknown normal levels; level Kt is the top wall
  const Index nb = grid.num_boundary_nodes();
  const Index n = nb * Kt;
  const double h = grid.spacing;
  const double c_n = std::pow(h, grid.dim - 1) / h;
  const auto cst = column_strides(grid);

  DiscreteOperator op;
  op.grid = grid;
  op.alpha = alpha;
  op.symmetry_flag = alpha.is_real;
  op.weights.resize(n);
  op.alpha_diag = VectorXcd::Zero(n);
  op.to_full.resize(static_cast<std::size_t>(n));
  op.from_full.assign(static_cast<std::size_t>(grid.num_nodes()), -1);

  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(2 * grid.dim + 1));

  for (Index b = 0; b < nb; ++b) {
    for (Index k = 0; k < Kt; ++k) {
      const Index r = b * Kt + k;
      const Index f = b * grid.n_norm + k;
      op.to_full[static_cast<std::size_t>(r)] = f;
      op.from_full[static_cast<std::size_t>(f)] = r;
      op.weights[r] = grid.quadrature_weights[f];

      // Normal direction: Robin row at k = 0 (ghost-eliminated), Dirichlet
      // top wall folded out at k = Kt.
      double diag_n = (k == 0 ? 1.0 : 2.0) * c_n;
      trips.emplace_back(r, r, cplx(diag_n, 0));
      if (k > 0) trips.emplace_back(r, r - 1, cplx(-c_n, 0));
      if (k + 1 < Kt) trips.emplace_back(r, r + 1, cplx(-c_n, 0));
      if (k == 0) {
        const cplx ad = grid.surface_weights[b] * alpha.values[b];
        op.alpha_diag[r] = ad;
        trips.emplace_back(r, r, ad);
      }

      // Tangential directions: mirror-ghost Dirichlet walls.
      for (int a = 0; a < d; ++a) {
        const Index st = cst[static_cast<std::size_t>(a)];
        const Index j = (b / st) % grid.n_tang;
        const double c_t = c_n * (k == 0 ? 0.5 : 1.0);
        const bool at_wall = (j == 0 || j == grid.n_tang - 1);
        trips.emplace_back(r, r, cplx((at_wall ? 3.0 : 2.0) * c_t, 0));
        if (j > 0) trips.emplace_back(r, (b - st) * Kt + k, cplx(-c_t, 0));
        if (j + 1 < grid.n_tang) trips.emplace_back(r, (b + st) * Kt + k, cplx(-c_t, 0));
      }
    }
  }

  op.stiffness.resize(n, n);
  op.stiffness.setFromTriplets(trips.begin(), trips.end());
  op.stiffness.makeCompressed();
  return op;
}

DiscreteOperator assemble(const Grid& grid, const std::string& alpha_spec) {
  return assemble(grid, sample_alpha(alpha_spec, grid));
}

VectorXcd restrict_field(const DiscreteOperator& op, const VectorXcd& full) {
  check_full_size(op.grid, full, "restrict_field");
  VectorXcd r(op.size());
  for (Index i = 0; i < op.size(); ++i) r[i] = full[op.to_full[static_cast<std::size_t>(i)]];
  return r;
}

VectorXcd extend_field(const DiscreteOperator& op, const VectorXcd& reduced) {
  if (reduced.size() != op.size()) {
    throw std::invalid_argument("extend_field: reduced vector size mismatch");
  }
  VectorXcd full = VectorXcd::Zero(op.grid.num_nodes());
  for (Index i = 0; i < op.size(); ++i) full[op.to_full[static_cast<std::size_t>(i)]] = reduced[i];
  return full;
}

double weighted_norm(const DiscreteOperator& op, const VectorXcd& u_reduced) {
  return std::sqrt(op.weights.dot(u_reduced.cwiseAbs2()));
}

cplx weighted_dot(const DiscreteOperator& op, const VectorXcd& u_reduced,
                  const VectorXcd& v_reduced) {
  cplx s{0, 0};
  for (Index i = 0; i < op.size(); ++i) {
    s += op.weights[i] * u_reduced[i] * std::conj(v_reduced[i]);
  }
  return s;
}

FormResult apply_form(const DiscreteOperator& op, const VectorXcd& u_full,
                      const VectorXcd& v_full, bool include_wall_cells) {
  check_full_size(op.grid, u_full, "apply_form");
  check_full_size(op.grid, v_full, "apply_form");
  const FacePieces p = face_sums(op, u_full, v_full);
  FormResult out;
  out.gradient = p.gradient;
  out.boundary = p.boundary;
  out.wall = p.wall;
  out.value = p.gradient + p.boundary + (include_wall_cells ? p.wall : cplx{0, 0});
  const VectorXcd ur = restrict_field(op, u_full);
  const VectorXcd vr = restrict_field(op, v_full);
  const cplx matrix_form = vr.dot(op.stiffness * ur);
  out.matrix_residual = std::abs(p.gradient + p.wall + p.boundary - matrix_form);
  return out;
}

double greens_identity_residual(const DiscreteOperator& op, const VectorXcd& u_full,
                                const VectorXcd& v_full) {
  const Grid& g = op.grid;
  check_full_size(g, u_full, "greens_identity_residual");
  check_full_size(g, v_full, "greens_identity_residual");
  const int d = g.boundary_dim();
  if (g.n_norm < 4 || (d > 0 && g.n_tang < 4)) {
    throw std::invalid_argument("greens_identity_residual: grid too coarse for edge stencils");
  }
  const double h = g.spacing;
  const double h2 = h * h;
  const auto cst = column_strides(g);

  const FacePieces p = face_sums(op, u_full, v_full);
  const cplx grad = p.gradient;

  // Volume term with one-sided second-order stencils on the edge layers.
  cplx vol{0, 0};
  const Index nn = g.num_nodes();
  for (Index f = 0; f < nn; ++f) {
    cplx lap{0, 0};
    const Index k = g.norm_index(f);
    if (k == 0) {
      lap += (2.0 * u_full[f] - 5.0 * u_full[f + 1] + 4.0 * u_full[f + 2] - u_full[f + 3]) / h2;
    } else if (k == g.n_norm - 1) {
      lap += (2.0 * u_full[f] - 5.0 * u_full[f - 1] + 4.0 * u_full[f - 2] - u_full[f - 3]) / h2;
    } else {
      lap += (u_full[f - 1] - 2.0 * u_full[f] + u_full[f + 1]) / h2;
    }
    for (int a = 0; a < d; ++a) {
      const Index st = cst[static_cast<std::size_t>(a)] * g.n_norm;
      const Index j = g.tang_index(f, a);
      if (j == 0) {
        lap += (2.0 * u_full[f] - 5.0 * u_full[f + st] + 4.0 * u_full[f + 2 * st] -
                u_full[f + 3 * st]) /
               h2;
      } else if (j == g.n_tang - 1) {
        lap += (2.0 * u_full[f] - 5.0 * u_full[f - st] + 4.0 * u_full[f - 2 * st] -
                u_full[f - 3 * st]) /
               h2;
      } else {
        lap += (u_full[f - st] - 2.0 * u_full[f] + u_full[f + st]) / h2;
      }
    }
    vol += g.quadrature_weights[f] * lap * std::conj(v_full[f]);
  }

  // Outward flux through x_n = 0: eta . grad u = -d/dx_n u(x', 0).
  cplx flux{0, 0};
  for (Index b = 0; b < g.num_boundary_nodes(); ++b) {
    const Index f0 = b * g.n_norm;
    const cplx du = (-3.0 * u_full[f0] + 4.0 * u_full[f0 + 1] - u_full[f0 + 2]) / (2 * h);
    flux += g.surface_weights[b] * (-du) * std::conj(v_full[f0]);
  }

  return std::abs(flux - grad - vol);
}

void write_matrix_market(const DiscreteOperator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
  out.precision(17);
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << "% weighted Robin Laplacian, dim=" << op.grid.dim << " L=" << op.grid.half_width
      << " h=" << op.grid.spacing << "\n";
  out << op.size() << " " << op.size() << " " << op.stiffness.nonZeros() << "\n";
  for (Index c = 0; c < op.stiffness.outerSize(); ++c) {
    for (SpMatC::InnerIterator it(op.stiffness, c); it; ++it) {
      const cplx v = it.value() / op.weights[it.row()];
      out << (it.row() + 1) << " " << (it.col() + 1) << " " << v.real() << " " << v.imag()
          << "\n";
    }
  }
  if (!out.good()) throw std::runtime_error("write_matrix_market: write failed for " + path);
}

}  // namespace robinspec
