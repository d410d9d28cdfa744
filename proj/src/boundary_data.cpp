#include "robinspec/boundary_data.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "robinspec/expression.hpp"

namespace robinspec {

namespace {

double radial_of(const double* x, int d) {
  double s = 0;
  for (int a = 0; a < d; ++a) s += x[a] * x[a];
  return std::sqrt(s);
}

std::map<std::string, std::string> parse_kv(const std::string& body) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("alpha spec: expected key=value, got '" + item + "'");
    }
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

double kv_num(const std::map<std::string, std::string>& kv, const std::string& key, double def) {
  const auto it = kv.find(key);
  if (it == kv.end()) return def;
  return std::stod(it->second);
}

}  // namespace

AlphaSpec AlphaSpec::parse(const std::string& text) {
  AlphaSpec s;
  s.source = text;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "constant") {
    s.kind = Kind::kConstant;
    const auto kv = parse_kv(body);
    s.c = cplx(kv_num(kv, "c", kv_num(kv, "re", 0.0)), kv_num(kv, "im", 0.0));
  } else if (head == "radial") {
    s.kind = Kind::kRadial;
    const auto kv = parse_kv(body);
    s.a = kv_num(kv, "a", 1.0);
    s.p = kv_num(kv, "p", 1.0);
  } else if (head == "phase") {
    s.kind = Kind::kPhase;
    const auto kv = parse_kv(body);
    s.a = kv_num(kv, "a", 1.0);
    s.theta = kv_num(kv, "theta", 0.0);
  } else if (head == "expr") {
    s.kind = Kind::kExpression;
    s.expr_text = body;
    Expression::parse(body);  // validate eagerly
  } else {
    throw std::invalid_argument("alpha spec: unknown preset '" + head +
                                "' (expected constant|radial|phase|expr)");
  }
  return s;
}

cplx AlphaSpec::eval(const double* x, int boundary_dim) const {
  switch (kind) {
    case Kind::kConstant: return c;
    case Kind::kRadial: return a / std::pow(1.0 + radial_of(x, boundary_dim), p);
    case Kind::kPhase: {
      const double r = radial_of(x, boundary_dim);
      return a * std::exp(cplx(0, theta)) / (1.0 + r * r);
    }
    case Kind::kExpression: {
      // Parsed per call only in the sampling loop below; see sample_alpha.
      Expression e = Expression::parse(expr_text);
      return e.eval(x, boundary_dim);
    }
  }
  return {};
}

cplx AlphaSpec::analytic_gradient(const double* x, int boundary_dim, int axis) const {
  const double r = radial_of(x, boundary_dim);
  switch (kind) {
    case Kind::kConstant: return {0, 0};
    case Kind::kRadial:
      if (r == 0) return {0, 0};
      return -a * p * std::pow(1.0 + r, -p - 1.0) * (x[axis] / r);
    case Kind::kPhase: {
      const cplx amp = a * std::exp(cplx(0, theta));
      const double den = 1.0 + r * r;
      return amp * (-2.0 * x[axis] / (den * den));
    }
    case Kind::kExpression:
      throw std::logic_error("alpha spec: no analytic gradient for expressions");
  }
  return {};
}

MatrixXcd boundary_gradient_fd(const VectorXcd& field, const Grid& grid) {
  const int d = grid.boundary_dim();
  const Index nb = grid.num_boundary_nodes();
  if (field.size() != nb) {
    throw std::invalid_argument("boundary_gradient_fd: field size mismatch");
  }
  MatrixXcd out = MatrixXcd::Zero(nb, std::max(d, 1));
  if (d == 0) return out;
  const Index M = grid.n_tang;
  const double h = grid.spacing;
  // Boundary flattening: axis 0 slowest, axis d-1 fastest.
  std::vector<Index> stride(static_cast<std::size_t>(d), 1);
  for (int a = d - 2; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] = stride[static_cast<std::size_t>(a + 1)] * M;
  }
  for (int a = 0; a < d; ++a) {
    const Index st = stride[static_cast<std::size_t>(a)];
    for (Index b = 0; b < nb; ++b) {
      const Index j = (b / st) % M;
      cplx val;
      if (j == 0) {
        val = (-3.0 * field[b] + 4.0 * field[b + st] - field[b + 2 * st]) / (2 * h);
      } else if (j == M - 1) {
        val = (3.0 * field[b] - 4.0 * field[b - st] + field[b - 2 * st]) / (2 * h);
      } else {
        val = (field[b + st] - field[b - st]) / (2 * h);
      }
      out(b, a) = val;
    }
  }
  return out;
}

BoundaryFunction sample_alpha(const AlphaSpec& spec, const Grid& grid) {
  const int d = grid.boundary_dim();
  const Index nb = grid.num_boundary_nodes();
  BoundaryFunction bf;
  bf.source = spec.source;
  bf.values.resize(nb);

  std::optional<Expression> expr;
  if (spec.kind == AlphaSpec::Kind::kExpression) expr.emplace(Expression::parse(spec.expr_text));

  for (Index b = 0; b < nb; ++b) {
    const auto x = grid.boundary_coord(b);
    const cplx v = expr ? expr->eval(x.data(), d) : spec.eval(x.data(), d);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::runtime_error("sample_alpha: non-finite value at a boundary node");
    }
    bf.values[b] = v;
  }

  if (spec.has_analytic_gradient() && d >= 1) {
    bf.tangential_gradient.resize(nb, d);
    for (Index b = 0; b < nb; ++b) {
      const auto x = grid.boundary_coord(b);
      for (int a = 0; a < d; ++a) {
        bf.tangential_gradient(b, a) = spec.analytic_gradient(x.data(), d, a);
      }
    }
    bf.gradient_method = "analytic";
  } else if (d >= 1) {
    bf.tangential_gradient = boundary_gradient_fd(bf.values, grid);
    bf.gradient_method = "centered_fd";
  } else {
    bf.tangential_gradient.resize(nb, 0);
    bf.gradient_method = "analytic";  // dim 1: the boundary is a point, no gradient
  }

  bf.max_abs = bf.values.size() ? bf.values.cwiseAbs().maxCoeff() : 0.0;
  const double max_im = bf.values.size() ? bf.values.imag().cwiseAbs().maxCoeff() : 0.0;
  bf.is_real = max_im <= 1e-14 * std::max(bf.max_abs, 1e-300);
  return bf;
}

BoundaryFunction sample_alpha(const std::string& spec, const Grid& grid) {
  return sample_alpha(AlphaSpec::parse(spec), grid);
}

RadialDerivativeField radial_derivative(const BoundaryFunction& alpha, const Grid& grid) {
  const int d = grid.boundary_dim();
  const Index nb = grid.num_boundary_nodes();
  RadialDerivativeField out;
  out.method = alpha.gradient_method;
  out.x_dot_grad = VectorXcd::Zero(nb);
  out.x_dot_grad_re = VectorXd::Zero(nb);
  for (Index b = 0; b < nb; ++b) {
    const auto x = grid.boundary_coord(b);
    cplx s{0, 0};
    for (int a = 0; a < d; ++a) s += x[static_cast<std::size_t>(a)] * alpha.tangential_gradient(b, a);
    out.x_dot_grad[b] = s;
    out.x_dot_grad_re[b] = s.real();
  }
  return out;
}

VectorXd divergence_field(const BoundaryFunction& alpha, const Grid& grid) {
  const int d = grid.boundary_dim();
  const Index nb = grid.num_boundary_nodes();
  VectorXd out = VectorXd::Zero(nb);
  for (int a = 0; a < d; ++a) {
    VectorXcd prod(nb);
    for (Index b = 0; b < nb; ++b) {
      const auto x = grid.boundary_coord(b);
      prod[b] = x[static_cast<std::size_t>(a)] * alpha.values[b].imag();
    }
    const MatrixXcd g = boundary_gradient_fd(prod, grid);
    out += g.col(a).real();
  }
  return out;
}

std::string boundary_csv(const BoundaryFunction& alpha, const Grid& grid) {
  std::ostringstream os;
  const int d = grid.boundary_dim();
  for (int a = 0; a < d; ++a) os << "x" << (a + 1) << ",";
  os << "re_alpha,im_alpha\n";
  os.precision(17);
  for (Index b = 0; b < grid.num_boundary_nodes(); ++b) {
    const auto x = grid.boundary_coord(b);
    for (int a = 0; a < d; ++a) os << x[static_cast<std::size_t>(a)] << ",";
    os << alpha.values[b].real() << "," << alpha.values[b].imag() << "\n";
  }
  return os.str();
}

}  // namespace robinspec
