#include "robinspec/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "robinspec/multipliers.hpp"

namespace robinspec {

namespace {

double weighted_norm_of(const VectorXd& weights, const VectorXcd& v) {
  double total = 0;
  for (Index i = 0; i < v.size(); ++i) total += weights[i] * std::norm(v[i]);
  return std::sqrt(total);
}

// Max column absolute sum of a sparse matrix.
double matrix_norm1(const SpMatC& m) {
  double best = 0;
  for (Index k = 0; k < m.outerSize(); ++k) {
    double col = 0;
    for (SpMatC::InnerIterator it(m, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

std::string format_shift(cplx lambda) {
  std::ostringstream os;
  os << "(" << lambda.real() << (lambda.imag() < 0 ? "" : "+") << lambda.imag() << "i)";
  return os.str();
}

// One shifted system K - lambda W, factored (or preconditioned) once and
// reused across right-hand sides. The stiffness is complex symmetric, so
// transpose solves coincide with plain solves and adjoint solves reduce to
// conjugation around a plain solve.
class ShiftedSystem {
 public:
  ShiftedSystem(const DiscreteOperator& op, cplx lambda, const SolveOptions& options)
      : op_(op), lambda_(lambda), options_(options) {
    const Index n = op.size();
    shifted_ = op.stiffness;
    for (Index i = 0; i < n; ++i) shifted_.coeffRef(i, i) -= lambda * op.weights[i];

    direct_ = options.method == SolveOptions::Method::kDirect ||
              (options.method == SolveOptions::Method::kAuto && n <= options.direct_limit);
    if (direct_) {
      lu_.compute(shifted_);
      if (lu_.info() != Eigen::Success) {
        throw std::runtime_error("shifted solve: sparse factorization failed at shift " +
                                 format_shift(lambda));
      }
      condition_ = matrix_norm1(shifted_) * inverse_norm1_estimate();
      if (!(condition_ < options.failure_condition)) {
        std::ostringstream os;
        os << "shifted solve: system numerically singular at shift " << format_shift(lambda)
           << " (condition estimate " << condition_ << ")";
        throw std::runtime_error(os.str());
      }
      method_ = "sparse_lu";
    } else {
      krylov_.setTolerance(std::min(1e-12, 0.1 * options.target_residual));
      krylov_.setMaxIterations(options.max_iterations);
      krylov_.compute(shifted_);
      condition_ = 0;  // no factorization to probe
      method_ = "bicgstab_jacobi";
    }
  }

  // Algebraic solve of (K - lambda W) x = rhs, no certification.
  VectorXcd raw_solve(const VectorXcd& rhs) {
    if (direct_) return lu_.solve(rhs);
    const VectorXcd x = krylov_.solve(rhs);
    krylov_iterations_ += static_cast<int>(krylov_.iterations());
    return x;
  }

  // (K - lambda W)^H x = rhs via conjugation (the matrix is symmetric).
  VectorXcd adjoint_solve(const VectorXcd& rhs) {
    return raw_solve(rhs.conjugate()).conjugate();
  }

  // Full-grid f -> full-grid u with iterative refinement and an
  // independently measured relative W-residual.
  ResolventSolution solve_full(const VectorXcd& f_full) {
    ResolventSolution out;
    out.diag.condition_estimate = condition_;
    out.diag.method = method_;
    for (const cplx mu : options_.known_eigenvalues) {
      if (std::abs(mu - lambda_) < 1e-10) {
        out.warnings.push_back("shift " + format_shift(lambda_) +
                               " lies within 1e-10 of a known eigenvalue " + format_shift(mu));
      }
    }

    const VectorXcd f_red = restrict_field(op_, f_full);
    const double f_norm = weighted_norm_of(op_.weights, f_red);
    if (f_norm == 0) {
      out.u = VectorXcd::Zero(op_.grid.num_nodes());
      return out;
    }
    const VectorXcd rhs = f_red.cwiseProduct(op_.weights.cast<cplx>());

    const int krylov_before = krylov_iterations_;
    VectorXcd x = raw_solve(rhs);
    int refinements = 0;
    double rel = certified_residual(x, rhs, f_norm);
    while (rel > options_.target_residual && refinements < options_.max_refinement) {
      const VectorXcd defect = rhs - shifted_ * x;
      x += raw_solve(defect);
      ++refinements;
      const double next = certified_residual(x, rhs, f_norm);
      if (next >= rel) break;  // stagnated; keep the best certificate
      rel = next;
    }
    if (rel > options_.target_residual) {
      std::ostringstream os;
      os << "residual target " << options_.target_residual << " not reached at shift "
         << format_shift(lambda_) << " (certified " << rel << ")";
      out.warnings.push_back(os.str());
    }
    out.diag.residual = rel;
    out.diag.iterations = direct_ ? refinements : krylov_iterations_ - krylov_before;
    out.u = extend_field(op_, x);
    return out;
  }

  const DiscreteOperator& op() const { return op_; }
  cplx lambda() const { return lambda_; }

 private:
  // ||(A - lambda) u - f||_W / ||f||_W; the algebraic defect rhs - M x equals
  // W ((A - lambda) x - f), so the field-level residual is W^{-1} defect.
  double certified_residual(const VectorXcd& x, const VectorXcd& rhs, double f_norm) const {
    const VectorXcd defect = rhs - shifted_ * x;
    double total = 0;
    for (Index i = 0; i < defect.size(); ++i) total += std::norm(defect[i]) / op_.weights[i];
    return std::sqrt(total) / f_norm;
  }

  // Hager-style lower estimate of ||(K - lambda W)^{-1}||_1. Transpose solves
  // are plain solves (symmetry), so each pass costs two triangular solves.
  double inverse_norm1_estimate() {
    const Index n = shifted_.rows();
    VectorXcd x = VectorXcd::Constant(n, cplx(1.0 / static_cast<double>(n), 0));
    double best = 0;
    for (int pass = 0; pass < 3; ++pass) {
      const VectorXcd y = lu_.solve(x);
      best = std::max(best, y.cwiseAbs().sum());
      VectorXcd sign(n);
      for (Index i = 0; i < n; ++i) {
        const double a = std::abs(y[i]);
        sign[i] = a == 0 ? cplx(1, 0) : y[i] / a;
      }
      const VectorXcd z = lu_.solve(sign);
      Index j = 0;
      const double zmax = z.cwiseAbs().maxCoeff(&j);
      if (pass > 0 && zmax <= std::abs(z.dot(x))) break;
      x.setZero();
      x[j] = cplx(1, 0);
    }
    return best;
  }

  const DiscreteOperator& op_;
  cplx lambda_;
  SolveOptions options_;
  SpMatC shifted_;
  bool direct_ = true;
  Eigen::SparseLU<SpMatC> lu_;
  Eigen::BiCGSTAB<SpMatC, Eigen::DiagonalPreconditioner<cplx>> krylov_;
  double condition_ = 0;
  std::string method_;
  int krylov_iterations_ = 0;
};

// Largest W-norm singular value of the resolvent at one shift: power
// iteration on the normal operator of W^{1/2} (K - lambda W)^{-1} W^{1/2},
// warm-started from the strongest right-hand side seen in the sweep.
LambdaNormRow operator_norm_row(ShiftedSystem& system, const VectorXcd& seed_red, int max_steps) {
  const DiscreteOperator& op = system.op();
  const Index n = op.size();
  const VectorXcd sqrt_w = op.weights.cwiseSqrt().cast<cplx>();
  const VectorXcd w = op.weights.cast<cplx>();

  VectorXcd z = seed_red.size() == n ? VectorXcd(seed_red.cwiseProduct(sqrt_w))
                                     : VectorXcd::Constant(n, cplx(1, 0));
  if (z.norm() == 0) z = VectorXcd::Constant(n, cplx(1, 0));
  z /= z.norm();

  LambdaNormRow row;
  row.lambda = system.lambda();
  const double dist = system.lambda().real() >= 0 ? std::abs(system.lambda().imag())
                                                  : std::abs(system.lambda());
  row.inv_distance = dist == 0 ? std::numeric_limits<double>::infinity() : 1.0 / dist;

  double sigma_sq = 0;
  int steps = 0;
  for (; steps < max_steps; ++steps) {
    const VectorXcd b = system.raw_solve(z.cwiseProduct(sqrt_w));
    const VectorXcd d = system.adjoint_solve(b.cwiseProduct(w));
    const VectorXcd next = d.cwiseProduct(sqrt_w);
    const double estimate = std::abs(z.dot(next));  // Rayleigh quotient, z normalized
    const double scale = next.norm();
    if (scale == 0) break;
    z = next / scale;
    if (steps > 3 && std::abs(estimate - sigma_sq) <= 1e-6 * estimate) {
      sigma_sq = estimate;
      ++steps;
      break;
    }
    sigma_sq = estimate;
  }
  row.opnorm_proxy = std::sqrt(sigma_sq);
  row.power_steps = steps;
  return row;
}

}  // namespace

ResolventSolution solve(const DiscreteOperator& op, cplx lambda, const VectorXcd& f_full,
                        const SolveOptions& options) {
  if (f_full.size() != op.grid.num_nodes()) {
    throw std::invalid_argument("solve: right-hand side must be a full-grid node vector");
  }
  if (!f_full.allFinite()) {
    throw std::invalid_argument("solve: right-hand side contains non-finite entries");
  }
  ShiftedSystem system(op, lambda, options);
  return system.solve_full(f_full);
}

ResolventSample weighted_estimate(const VectorXcd& u_full, const VectorXcd& f_full, cplx lambda,
                                  const Grid& grid) {
  if (u_full.size() != grid.num_nodes() || f_full.size() != grid.num_nodes()) {
    throw std::invalid_argument("weighted_estimate: u and f must be full-grid node vectors");
  }
  ResolventSample sample;
  sample.lambda = lambda;
  const bool inside = std::abs(lambda.imag()) <= lambda.real();
  sample.sector_tag = inside ? SectorTag::kInside : SectorTag::kOutside;

  double rf_sq = 0, inv_u_sq = 0;
  for (Index r = 0; r < grid.num_nodes(); ++r) {
    const double rad = grid.radial(r);
    rf_sq += grid.quadrature_weights[r] * rad * rad * std::norm(f_full[r]);
    if (rad > 0) {
      inv_u_sq += grid.quadrature_weights[r] * std::norm(u_full[r]) / (rad * rad);
    }
  }
  if (rf_sq == 0) {
    if (u_full.cwiseAbs().maxCoeff() == 0) return sample;  // all ratios zero
    throw std::invalid_argument(
        "weighted_estimate: ||r f|| vanishes for a nonzero field; ratios undefined");
  }
  const double rf = std::sqrt(rf_sq);
  sample.ratio_weighted = std::sqrt(inv_u_sq) / rf;

  // Inside the cone the gradient estimate concerns the phase-twisted field;
  // on the real axis the twist is unnecessary and u itself is measured.
  const bool twist = inside && lambda.imag() != 0;
  const double energy =
      twist ? dirichlet_energy(u_minus_transform(u_full, lambda, grid), grid)
            : dirichlet_energy(u_full, grid);
  sample.ratio_gradient = std::sqrt(energy) / rf;
  return sample;
}

L2BoundCheck l2_bound_check(const VectorXcd& u_full, const VectorXcd& f_full, cplx lambda,
                            const BoundaryFunction& alpha, const Grid& grid) {
  if (lambda.imag() == 0) {
    throw std::invalid_argument("l2_bound_check: needs Im(lambda) != 0");
  }
  if (u_full.size() != grid.num_nodes() || f_full.size() != grid.num_nodes()) {
    throw std::invalid_argument("l2_bound_check: u and f must be full-grid node vectors");
  }
  if (alpha.values.size() != grid.num_boundary_nodes()) {
    throw std::invalid_argument("l2_bound_check: alpha has wrong boundary size");
  }
  L2BoundCheck check;
  double cross = 0;
  for (Index r = 0; r < grid.num_nodes(); ++r) {
    check.lhs += grid.quadrature_weights[r] * std::norm(u_full[r]);
    cross += grid.quadrature_weights[r] * std::abs(f_full[r]) * std::abs(u_full[r]);
  }
  double boundary = 0;
  for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
    const Index flat = grid.boundary_index[static_cast<std::size_t>(b)];
    boundary += grid.surface_weights[b] * std::abs(alpha.values[b].imag()) * std::norm(u_full[flat]);
  }
  check.rhs = (boundary + cross) / std::abs(lambda.imag());
  check.margin = check.rhs - check.lhs;
  return check;
}

std::vector<VectorXcd> default_bump_family(const Grid& grid, int count, unsigned seed) {
  if (grid.boundary_only) {
    throw std::invalid_argument("default_bump_family: needs a volume grid");
  }
  if (count <= 0) {
    throw std::invalid_argument("default_bump_family: count must be positive");
  }
  const double L = grid.half_width;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Draw every profile before touching the grid: the family then depends
  // only on (count, seed, L), not on the resolution.
  struct Profile {
    std::array<double, 3> tangential_center;
    double normal_center, tangential_rate, normal_rate;
    cplx amplitude;
  };
  std::vector<Profile> profiles(static_cast<std::size_t>(count));
  for (auto& p : profiles) {
    for (double& c : p.tangential_center) c = (unit(rng) - 0.5) * L;
    p.normal_center = (0.15 + 0.4 * unit(rng)) * L;
    const double wt = (0.08 + 0.17 * unit(rng)) * L;
    const double wn = (0.08 + 0.17 * unit(rng)) * L;
    p.tangential_rate = 1.0 / (wt * wt);
    p.normal_rate = 1.0 / (wn * wn);
    p.amplitude = std::polar(0.5 + unit(rng), 2 * kPi * unit(rng));
  }

  std::vector<VectorXcd> family;
  family.reserve(profiles.size());
  for (const auto& p : profiles) {
    VectorXcd f(grid.num_nodes());
    for (Index r = 0; r < grid.num_nodes(); ++r) {
      const auto x = grid.node_coord(r);
      double rho2 = 0;
      for (int a = 0; a + 1 < grid.dim; ++a) {
        const double d = x[static_cast<std::size_t>(a)] - p.tangential_center[static_cast<std::size_t>(a)];
        rho2 += d * d;
      }
      const double dn = x[static_cast<std::size_t>(grid.dim - 1)] - p.normal_center;
      f[r] = p.amplitude * std::exp(-p.tangential_rate * rho2 - p.normal_rate * dn * dn);
    }
    family.push_back(std::move(f));
  }
  return family;
}

std::vector<cplx> lambda_rectangle(double re_min, double re_max, int re_count, double im_min,
                                   double im_max, int im_count) {
  if (re_count < 1 || im_count < 1 || re_max < re_min || im_max < im_min) {
    throw std::invalid_argument("lambda_rectangle: need ordered bounds and positive counts");
  }
  std::vector<cplx> shifts;
  shifts.reserve(static_cast<std::size_t>(re_count) * static_cast<std::size_t>(im_count));
  for (int i = 0; i < re_count; ++i) {
    const double re =
        re_count == 1 ? re_min : re_min + (re_max - re_min) * i / static_cast<double>(re_count - 1);
    for (int j = 0; j < im_count; ++j) {
      const double im =
          im_count == 1 ? im_min : im_min + (im_max - im_min) * j / static_cast<double>(im_count - 1);
      shifts.emplace_back(re, im);
    }
  }
  return shifts;
}

SweepResult sweep(const DiscreteOperator& op, const std::vector<cplx>& lambdas,
                  const std::vector<VectorXcd>& f_family, const SweepOptions& options) {
  SweepResult out;
  SweepSummary& summary = out.summary;
  if (lambdas.empty()) {
    summary.no_op = true;
    summary.notes.push_back("no shifts requested; sweep is a no-op");
    return out;
  }
  if (f_family.empty()) {
    throw std::invalid_argument("sweep: right-hand-side family is empty");
  }

  std::vector<cplx> shifts;
  for (const cplx lambda : lambdas) {
    if (std::find(shifts.begin(), shifts.end(), lambda) == shifts.end()) shifts.push_back(lambda);
  }
  if (shifts.size() != lambdas.size()) {
    summary.notes.push_back("deduplicated " + std::to_string(lambdas.size() - shifts.size()) +
                            " duplicate shifts");
  }

  SolveOptions solver_options = options.solver;
  solver_options.known_eigenvalues = options.known_eigenvalues;

  for (const cplx lambda : shifts) {
    bool excluded = false;
    for (const cplx mu : options.known_eigenvalues) {
      if (std::abs(mu - lambda) <= options.exclusion_radius) {
        summary.notes.push_back("shift " + format_shift(lambda) +
                                " skipped: within the exclusion radius of eigenvalue " +
                                format_shift(mu));
        excluded = true;
        break;
      }
    }
    if (excluded) continue;

    try {
      ShiftedSystem system(op, lambda, solver_options);
      double best_ratio = -1.0;
      VectorXcd best_direction;
      for (const VectorXcd& f : f_family) {
        const ResolventSolution solution = system.solve_full(f);
        ResolventSample sample = weighted_estimate(solution.u, f, lambda, op.grid);
        sample.solver_diag = solution.diag;
        const bool inside = sample.sector_tag == SectorTag::kInside;
        (inside ? summary.sup_weighted_inside : summary.sup_weighted_outside) =
            std::max(inside ? summary.sup_weighted_inside : summary.sup_weighted_outside,
                     sample.ratio_weighted);
        (inside ? summary.sup_gradient_inside : summary.sup_gradient_outside) =
            std::max(inside ? summary.sup_gradient_inside : summary.sup_gradient_outside,
                     sample.ratio_gradient);
        out.samples.push_back(std::move(sample));

        const VectorXcd f_red = restrict_field(op, f);
        const double f_norm = weighted_norm_of(op.weights, f_red);
        if (f_norm > 0) {
          const double gain = weighted_norm_of(op.weights, restrict_field(op, solution.u)) / f_norm;
          if (gain > best_ratio) {
            best_ratio = gain;
            best_direction = f_red;
          }
        }
      }
      if (options.operator_norm_proxy) {
        summary.operator_norms.push_back(
            operator_norm_row(system, best_direction, options.power_steps));
      }
    } catch (const std::exception& failure) {
      summary.notes.push_back("shift " + format_shift(lambda) + " failed: " + failure.what());
    }
  }
  summary.sample_count = static_cast<Index>(out.samples.size());
  return out;
}

}  // namespace robinspec
