#include "robinspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

namespace robinspec {

namespace {

SpMatD real_part(const SpMatC& k) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(k.nonZeros()));
  for (Index c = 0; c < k.outerSize(); ++c) {
    for (SpMatC::InnerIterator it(k, c); it; ++it) {
      trips.emplace_back(it.row(), it.col(), it.value().real());
    }
  }
  SpMatD out(k.rows(), k.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

template <typename Scalar>
Eigen::SparseMatrix<Scalar> shifted_pencil(const SpMatC& k, const VectorXd& w, cplx sigma) {
  std::vector<Eigen::Triplet<Scalar>> trips;
  trips.reserve(static_cast<std::size_t>(k.nonZeros()) + static_cast<std::size_t>(k.rows()));
  for (Index c = 0; c < k.outerSize(); ++c) {
    for (SpMatC::InnerIterator it(k, c); it; ++it) {
      if constexpr (std::is_same_v<Scalar, double>) {
        trips.emplace_back(it.row(), it.col(), it.value().real());
      } else {
        trips.emplace_back(it.row(), it.col(), it.value());
      }
    }
  }
  for (Index i = 0; i < k.rows(); ++i) {
    if constexpr (std::is_same_v<Scalar, double>) {
      trips.emplace_back(i, i, -(sigma.real() * w[i]));
    } else {
      trips.emplace_back(i, i, -(sigma * w[i]));
    }
  }
  Eigen::SparseMatrix<Scalar> out(k.rows(), k.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

EigenPair certified_pair(const DiscreteOperator& op, cplx lambda, VectorXcd u) {
  const double norm = weighted_norm(op, u);
  if (norm > 0) u /= norm;
  EigenPair p;
  p.eigenvalue = lambda;
  p.vector = std::move(u);
  p.residual = eigen_residual(op, lambda, p.vector);
  p.localization = localization_score(op, p.vector);
  p.wall_mass = wall_mass_fraction(op, p.vector);
  return p;
}

// Merge candidates: keep the best-certified representative of each cluster
// of eigenvalues closer than 1e-8 * max(1, |lambda|).
std::vector<EigenPair> dedupe(std::vector<EigenPair> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const EigenPair& a, const EigenPair& b) { return a.residual < b.residual; });
  std::vector<EigenPair> kept;
  for (auto& p : pairs) {
    const double tol = 1e-8 * std::max(1.0, std::abs(p.eigenvalue));
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const EigenPair& q) {
      return std::abs(q.eigenvalue - p.eigenvalue) <= tol;
    });
    if (!dup) kept.push_back(std::move(p));
  }
  std::sort(kept.begin(), kept.end(), [](const EigenPair& a, const EigenPair& b) {
    if (a.eigenvalue.real() != b.eigenvalue.real())
      return a.eigenvalue.real() < b.eigenvalue.real();
    return a.eigenvalue.imag() < b.eigenvalue.imag();
  });
  return kept;
}

struct KrylovOut {
  std::vector<cplx> values;
  std::vector<VectorXcd> vectors;
  int steps = 0;
};

// Shift-invert Lanczos with full reorthogonalization on the symmetrized
// pencil W^{-1/2} K W^{-1/2}; returns up to `count` pairs nearest sigma.
KrylovOut lanczos_shift_invert(const SpMatD& pencil, const VectorXd& w, double sigma, int count,
                               int m, unsigned seed) {
  const Index n = w.size();
  Eigen::SparseLU<SpMatD> lu(pencil);
  if (lu.info() != Eigen::Success) throw std::runtime_error("factorization failed");

  const VectorXd sqw = w.cwiseSqrt();
  const auto apply = [&](const VectorXd& v) -> VectorXd {
    return sqw.cwiseProduct(lu.solve(sqw.cwiseProduct(v)));
  };

  m = static_cast<int>(std::min<Index>(m, n));
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  MatrixXd v(n, m + 1);
  for (Index i = 0; i < n; ++i) v(i, 0) = gauss(rng);
  v.col(0).normalize();

  VectorXd alpha(m), beta(m);
  int steps = m;
  for (int j = 0; j < m; ++j) {
    VectorXd wv = apply(v.col(j));
    alpha[j] = v.col(j).dot(wv);
    wv -= alpha[j] * v.col(j);
    if (j > 0) wv -= beta[j - 1] * v.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      const VectorXd coeff = v.leftCols(j + 1).transpose() * wv;
      wv -= v.leftCols(j + 1) * coeff;
    }
    beta[j] = wv.norm();
    if (beta[j] <= 1e-14 * std::max(1.0, std::abs(alpha[j]))) {
      steps = j + 1;
      break;
    }
    v.col(j + 1) = wv / beta[j];
  }

  MatrixXd t = MatrixXd::Zero(steps, steps);
  for (int j = 0; j < steps; ++j) {
    t(j, j) = alpha[j];
    if (j + 1 < steps) t(j, j + 1) = t(j + 1, j) = beta[j];
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);

  std::vector<int> order(static_cast<std::size_t>(steps));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
  });

  KrylovOut out;
  out.steps = steps;
  const double top = std::abs(es.eigenvalues()[order[0]]);
  for (int idx : order) {
    const double theta = es.eigenvalues()[idx];
    if (std::abs(theta) <= 1e-13 * top) break;
    if (static_cast<int>(out.values.size()) >= count) break;
    const VectorXd y = v.leftCols(steps) * es.eigenvectors().col(idx);
    out.values.emplace_back(sigma + 1.0 / theta, 0.0);
    out.vectors.emplace_back(y.cwiseQuotient(sqw).cast<cplx>());
  }
  return out;
}

// Shift-invert Arnoldi for the complex-symmetric pencil; standard Hermitian
// inner products, Ritz pairs of (K - sigma W)^{-1} W mapped back by
// lambda = sigma + 1/theta.
KrylovOut arnoldi_shift_invert(const SpMatC& pencil, const VectorXd& w, cplx sigma, int count,
                               int m, unsigned seed) {
  const Index n = w.size();
  Eigen::SparseLU<SpMatC> lu(pencil);
  if (lu.info() != Eigen::Success) throw std::runtime_error("factorization failed");

  m = static_cast<int>(std::min<Index>(m, n));
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  MatrixXcd v(n, m + 1);
  for (Index i = 0; i < n; ++i) v(i, 0) = cplx(gauss(rng), gauss(rng));
  v.col(0).normalize();

  MatrixXcd h = MatrixXcd::Zero(m + 1, m);
  int steps = m;
  for (int j = 0; j < m; ++j) {
    VectorXcd wv = lu.solve(w.cast<cplx>().cwiseProduct(v.col(j)));
    for (int pass = 0; pass < 2; ++pass) {
      const VectorXcd coeff = v.leftCols(j + 1).adjoint() * wv;
      h.col(j).head(j + 1) += coeff;
      wv -= v.leftCols(j + 1) * coeff;
    }
    const double nrm = wv.norm();
    h(j + 1, j) = nrm;
    if (nrm <= 1e-14) {
      steps = j + 1;
      break;
    }
    v.col(j + 1) = wv / nrm;
  }

  Eigen::ComplexEigenSolver<MatrixXcd> es(h.topLeftCorner(steps, steps));
  std::vector<int> order(static_cast<std::size_t>(steps));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
  });

  KrylovOut out;
  out.steps = steps;
  const double top = std::abs(es.eigenvalues()[order[0]]);
  for (int idx : order) {
    const cplx theta = es.eigenvalues()[idx];
    if (std::abs(theta) <= 1e-13 * top) break;
    if (static_cast<int>(out.values.size()) >= count) break;
    out.values.push_back(sigma + 1.0 / theta);
    out.vectors.emplace_back(v.leftCols(steps) * es.eigenvectors().col(idx));
  }
  return out;
}

}  // namespace

double eigen_residual(const DiscreteOperator& op, cplx lambda, const VectorXcd& u) {
  const VectorXcd misfit = op.stiffness * u - lambda * op.weights.cast<cplx>().cwiseProduct(u);
  double num = 0;
  for (Index i = 0; i < misfit.size(); ++i) num += std::norm(misfit[i]) / op.weights[i];
  const double den = weighted_norm(op, u);
  return den > 0 ? std::sqrt(num) / den : 0.0;
}

double localization_score(const DiscreteOperator& op, const VectorXcd& u) {
  const Grid& g = op.grid;
  const double half = g.half_width / 2;
  double inner = 0, total = 0;
  for (Index r = 0; r < u.size(); ++r) {
    const auto x = g.node_coord(op.to_full[static_cast<std::size_t>(r)]);
    const double mass = op.weights[r] * std::norm(u[r]);
    total += mass;
    bool in = x[static_cast<std::size_t>(g.dim - 1)] <= half + 1e-12;
    for (int a = 0; a + 1 < g.dim; ++a) in = in && std::abs(x[static_cast<std::size_t>(a)]) <= half + 1e-12;
    if (in) inner += mass;
  }
  return total > 0 ? inner / total : 0.0;
}

double wall_mass_fraction(const DiscreteOperator& op, const VectorXcd& u) {
  const Grid& g = op.grid;
  double wall = 0, total = 0;
  for (Index r = 0; r < u.size(); ++r) {
    const Index f = op.to_full[static_cast<std::size_t>(r)];
    const double mass = op.weights[r] * std::norm(u[r]);
    total += mass;
    bool at_wall = g.norm_index(f) == g.n_norm - 2;
    for (int a = 0; a + 1 < g.dim; ++a) {
      const Index j = g.tang_index(f, a);
      at_wall = at_wall || j == 0 || j == g.n_tang - 1;
    }
    if (at_wall) wall += mass;
  }
  return total > 0 ? wall / total : 0.0;
}

Spectrum eig_selfadjoint(const DiscreteOperator& op, int count, double shift,
                         const EigOptions& opts) {
  if (!op.symmetry_flag) {
    throw std::invalid_argument(
        "eig_selfadjoint: operator is not real-symmetric; use eig_nonselfadjoint");
  }
  if (count < 1) throw std::invalid_argument("eig_selfadjoint: count must be positive");
  const Index n = op.size();
  count = static_cast<int>(std::min<Index>(count, n));

  Spectrum spec;
  spec.shifts = {cplx(shift, 0)};

  if (n <= opts.dense_threshold) {
    spec.method = "dense_generalized";
    spec.iterations = {static_cast<int>(n)};
    const MatrixXd a = MatrixXd(real_part(op.stiffness));
    const MatrixXd b = MatrixXd(op.weights.asDiagonal());
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(a, b);
    if (es.info() != Eigen::Success) throw std::runtime_error("eig_selfadjoint: dense solve failed");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
      return std::abs(es.eigenvalues()[i] - shift) < std::abs(es.eigenvalues()[j] - shift);
    });
    std::vector<EigenPair> pairs;
    for (int i = 0; i < count; ++i) {
      pairs.push_back(certified_pair(op, cplx(es.eigenvalues()[order[static_cast<std::size_t>(i)]], 0),
                                es.eigenvectors().col(order[static_cast<std::size_t>(i)]).cast<cplx>()));
    }
    spec.pairs = dedupe(std::move(pairs));
    return spec;
  }

  spec.method = "lanczos_shift_invert";
  int m = std::max(opts.max_steps, 3 * count + 20);
  double sigma = shift;
  for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
    KrylovOut out;
    try {
      out = lanczos_shift_invert(shifted_pencil<double>(op.stiffness, op.weights, cplx(sigma, 0)),
                                 op.weights, sigma, count, m, opts.seed);
    } catch (const std::runtime_error&) {
      // shift sits on the spectrum: nudge it once, then give up
      const double nudge = 1e-6 * std::max(1.0, std::abs(sigma));
      if (sigma != shift) throw std::runtime_error("eig_selfadjoint: factorization failed at shift and perturbed shift");
      sigma = shift + nudge;
      --attempt;
      continue;
    }
    std::vector<EigenPair> pairs;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      pairs.push_back(certified_pair(op, out.values[i], std::move(out.vectors[i])));
    }
    pairs = dedupe(std::move(pairs));
    const bool enough = static_cast<int>(pairs.size()) >= count;
    const bool certified = std::all_of(pairs.begin(), pairs.end(), [&](const EigenPair& p) {
      return p.residual <= opts.residual_tolerance;
    });
    spec.pairs = std::move(pairs);
    spec.iterations = {out.steps};
    if ((enough && certified) || m >= n) break;
    if (attempt == opts.max_restarts) {
      spec.warnings.push_back("lanczos did not certify every requested pair at tolerance");
      spec.complete = false;
      break;
    }
    m = std::min<int>(2 * m, static_cast<int>(n));
  }
  return spec;
}

Spectrum eig_nonselfadjoint(const DiscreteOperator& op, const std::vector<cplx>& shifts,
                            int count_per_shift, const EigOptions& opts) {
  if (shifts.empty()) throw std::invalid_argument("eig_nonselfadjoint: need at least one shift");
  if (count_per_shift < 1) throw std::invalid_argument("eig_nonselfadjoint: count must be positive");
  const Index n = op.size();
  const int count = static_cast<int>(std::min<Index>(count_per_shift, n));

  Spectrum spec;
  spec.shifts = shifts;
  std::vector<EigenPair> pairs;

  if (n <= opts.dense_threshold) {
    spec.method = "dense_complex";
    const MatrixXcd a = MatrixXcd(op.operator_matrix());
    Eigen::ComplexEigenSolver<MatrixXcd> es(a);
    if (es.info() != Eigen::Success) throw std::runtime_error("eig_nonselfadjoint: dense solve failed");
    for (const cplx& sigma : shifts) {
      spec.iterations.push_back(static_cast<int>(n));
      std::vector<int> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int i, int j) {
        return std::abs(es.eigenvalues()[i] - sigma) < std::abs(es.eigenvalues()[j] - sigma);
      });
      for (int i = 0; i < count; ++i) {
        pairs.push_back(certified_pair(op, es.eigenvalues()[order[static_cast<std::size_t>(i)]],
                                  es.eigenvectors().col(order[static_cast<std::size_t>(i)])));
      }
    }
    spec.pairs = dedupe(std::move(pairs));
    return spec;
  }

  spec.method = "arnoldi_shift_invert";
  for (const cplx& shift : shifts) {
    int m = std::max(opts.max_steps, 3 * count + 20);
    cplx sigma = shift;
    for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
      KrylovOut out;
      try {
        out = arnoldi_shift_invert(shifted_pencil<cplx>(op.stiffness, op.weights, sigma),
                                   op.weights, sigma, count, m, opts.seed);
      } catch (const std::runtime_error&) {
        const double nudge = 1e-6 * std::max(1.0, std::abs(sigma));
        if (sigma != shift) throw std::runtime_error("eig_nonselfadjoint: factorization failed at shift and perturbed shift");
        sigma = shift + cplx(nudge, nudge);
        --attempt;
        continue;
      }
      std::vector<EigenPair> local;
      for (std::size_t i = 0; i < out.values.size(); ++i) {
        local.push_back(certified_pair(op, out.values[i], std::move(out.vectors[i])));
      }
      const bool enough = static_cast<int>(local.size()) >= count;
      const bool certified = std::all_of(local.begin(), local.end(), [&](const EigenPair& p) {
        return p.residual <= opts.residual_tolerance;
      });
      if ((enough && certified) || m >= n) {
        spec.iterations.push_back(out.steps);
        for (auto& p : local) pairs.push_back(std::move(p));
        break;
      }
      if (attempt == opts.max_restarts) {
        spec.iterations.push_back(out.steps);
        for (auto& p : local) pairs.push_back(std::move(p));
        spec.warnings.push_back("arnoldi did not certify every requested pair at tolerance");
        spec.complete = false;
        break;
      }
      m = std::min<int>(2 * m, static_cast<int>(n));
    }
  }
  spec.pairs = dedupe(std::move(pairs));
  return spec;
}

Spectrum classify(Spectrum spectrum, const Grid& grid, const ClassifyOptions& opts) {
  (void)grid;  // geometry already folded into the stored localization scores
  for (EigenPair& p : spectrum.pairs) {
    p.inside_cone = p.eigenvalue.real() >= std::abs(p.eigenvalue.imag()) - opts.cone_tol;
    p.localized =
        p.localization >= opts.localization_threshold && p.wall_mass <= opts.wall_mass_tolerance;
    p.classified = true;
  }
  return spectrum;
}

}  // namespace robinspec
