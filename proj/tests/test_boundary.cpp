#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "robinspec/boundary_data.hpp"
#include "robinspec/expression.hpp"
#include "robinspec/grid.hpp"

using namespace robinspec;

namespace {

double max_abs_diff(const VectorXcd& a, const VectorXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("expression parser evaluates complex arithmetic") {
  const double x[2] = {0.3, -0.4};
  auto ev = [&](const char* s) { return Expression::parse(s).eval(x, 2); };
  CHECK(ev("1+2*3").real() == doctest::Approx(7.0));
  CHECK(ev("(1+i)*(1-i)").real() == doctest::Approx(2.0));
  CHECK(std::abs(ev("exp(i*pi)") - cplx(-1, 0)) <= 1e-15);
  CHECK(ev("x1^2+x2^2").real() == doctest::Approx(0.25));
  CHECK(ev("r").real() == doctest::Approx(0.5));  // r = |x'|
  CHECK(ev("re(3+4*i)").real() == doctest::Approx(3.0));
  CHECK(ev("im(3+4*i)").real() == doctest::Approx(4.0));
  CHECK(std::abs(ev("conj(1+2*i)") - cplx(1, -2)) <= 1e-15);
  CHECK(ev("-2^2").real() == doctest::Approx(-4.0));  // unary minus binds looser than power
  CHECK_THROWS_AS(Expression::parse("1+"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("bogus(1)"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("x3").eval(x, 2), std::invalid_argument);
}

TEST_CASE("alpha spec strings parse into presets") {
  const double origin[3] = {0, 0, 0};
  const double far[3] = {3.0, 4.0, 0.0};  // r = 5

  const AlphaSpec c = AlphaSpec::parse("constant:c=-1");
  CHECK(c.eval(origin, 2) == cplx(-1, 0));
  const AlphaSpec ci = AlphaSpec::parse("constant:re=1,im=2");
  CHECK(ci.eval(far, 2) == cplx(1, 2));

  const AlphaSpec rad = AlphaSpec::parse("radial:a=2,p=2");
  CHECK(rad.eval(origin, 2).real() == doctest::Approx(2.0));
  CHECK(rad.eval(far, 2).real() == doctest::Approx(2.0 / 36.0));

  const AlphaSpec ph = AlphaSpec::parse("phase:a=0.1,theta=0.4");
  const cplx expect = 0.1 * std::exp(cplx(0, 0.4)) / 26.0;
  CHECK(std::abs(ph.eval(far, 2) - expect) <= 1e-15);

  const AlphaSpec ex = AlphaSpec::parse("expr:exp(-r^2)*(1+0.5*i)");
  CHECK(std::abs(ex.eval(origin, 2) - cplx(1, 0.5)) <= 1e-15);

  CHECK_THROWS_AS(AlphaSpec::parse("gauss:a=1"), std::invalid_argument);
  CHECK_THROWS_AS(AlphaSpec::parse("radial:a"), std::invalid_argument);
  CHECK_THROWS_AS(AlphaSpec::parse("expr:1+"), std::invalid_argument);
}

TEST_CASE("sampling records realness and gradient provenance") {
  const Grid g = build_grid(2, 4.0, 0.25);
  const BoundaryFunction real_rad = sample_alpha("radial:a=1,p=1", g);
  CHECK(real_rad.is_real);
  CHECK(real_rad.gradient_method == "analytic");
  CHECK(real_rad.max_abs == doctest::Approx(1.0 / (1.0 + 0.125)));

  const BoundaryFunction ph = sample_alpha("phase:a=0.1,theta=0.4", g);
  CHECK_FALSE(ph.is_real);

  const BoundaryFunction ex = sample_alpha("expr:1/(1+r)", g);
  CHECK(ex.is_real);
  CHECK(ex.gradient_method == "centered_fd");

  CHECK_THROWS_AS(sample_alpha("expr:1/(abs(x1)-0.125)", g), std::runtime_error);
}

TEST_CASE("finite-difference tangential gradient matches closed forms") {
  // The phase preset is smooth across the axis (it depends on r^2), so the
  // second-order stencils see bounded third derivatives everywhere.
  const AlphaSpec spec = AlphaSpec::parse("phase:a=1,theta=0.4");
  auto worst_fd_error = [&](double h) {
    const Grid g = build_grid(3, 4.0, h);
    const BoundaryFunction analytic = sample_alpha(spec, g);
    REQUIRE(analytic.gradient_method == "analytic");
    const MatrixXcd fd = boundary_gradient_fd(analytic.values, g);
    double worst = 0;
    for (Index b = 0; b < g.num_boundary_nodes(); ++b) {
      for (int a = 0; a < 2; ++a) {
        worst = std::max(worst, std::abs(fd(b, a) - analytic.tangential_gradient(b, a)));
      }
    }
    return worst;
  };
  const double coarse = worst_fd_error(0.125);
  CHECK(coarse <= 2.5e-2);  // h^2 * max third derivative / 6, with headroom
  const double fine = worst_fd_error(0.0625);
  const double ratio = coarse / fine;  // halving h divides the error by about 4
  CHECK(ratio >= 2.5);
  CHECK(ratio <= 7.0);
}

TEST_CASE("radial preset gradient formula agrees with difference quotients") {
  const AlphaSpec spec = AlphaSpec::parse("radial:a=2,p=1.5");
  const double pts[][2] = {{0.7, -0.3}, {1.5, 2.0}, {-4.0, 0.2}};
  const double step = 1e-6;
  for (const auto& p : pts) {
    for (int axis = 0; axis < 2; ++axis) {
      double lo[2] = {p[0], p[1]}, hi[2] = {p[0], p[1]};
      lo[axis] -= step;
      hi[axis] += step;
      const cplx dq = (spec.eval(hi, 2) - spec.eval(lo, 2)) / (2 * step);
      CHECK(std::abs(spec.analytic_gradient(p, 2, axis) - dq) <= 1e-7);
    }
  }
}

TEST_CASE("radial derivative x.grad matches r alpha'(r)") {
  const Grid g = build_grid(2, 4.0, 0.125);
  const double a = 2.0, p = 1.5;
  const BoundaryFunction bf = sample_alpha("radial:a=2,p=1.5", g);
  const RadialDerivativeField rd = radial_derivative(bf, g);
  CHECK(rd.method == "analytic");
  double worst = 0;
  for (Index b = 0; b < g.num_boundary_nodes(); ++b) {
    const auto x = g.boundary_coord(b);
    const double r = std::abs(x[0]);
    const double expect = -a * p * r * std::pow(1.0 + r, -p - 1.0);
    worst = std::max(worst, std::abs(rd.x_dot_grad[b] - cplx(expect, 0)));
  }
  CHECK(worst <= 1e-13);
  CHECK(max_abs_diff(rd.x_dot_grad, rd.x_dot_grad_re.cast<cplx>()) <= 1e-15);
}

TEST_CASE("divergence of the tangential imaginary drift") {
  const Grid g = build_grid(2, 6.0, 0.0625);

  // Real coupling: no drift at all.
  const VectorXd zero_div = divergence_field(sample_alpha("radial:a=1,p=2", g), g);
  CHECK(zero_div.cwiseAbs().maxCoeff() <= 1e-14);

  // div(x' g(r)) = (n-1) g + r g' with g = a sin(theta) / (1+r^2) in n = 2.
  const double s = 0.1 * std::sin(0.4);
  const VectorXd dv = divergence_field(sample_alpha("phase:a=0.1,theta=0.4", g), g);
  double worst = 0;
  for (Index b = 0; b < g.num_boundary_nodes(); ++b) {
    const auto x = g.boundary_coord(b);
    const double r2 = x[0] * x[0];
    const double expect = s * (1.0 / (1.0 + r2) - 2.0 * r2 / ((1.0 + r2) * (1.0 + r2)));
    worst = std::max(worst, std::abs(dv[b] - expect));
  }
  CHECK(worst <= 2e-3);
}

TEST_CASE("boundary table lists coordinates then values") {
  const Grid g = build_grid(2, 1.0, 0.5);
  const std::string csv = boundary_csv(sample_alpha("constant:c=-1", g), g);
  CHECK(csv.substr(0, csv.find('\n')) == "x1,re_alpha,im_alpha");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 nodes
}
