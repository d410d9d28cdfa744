#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "robinspec/grid.hpp"

using namespace robinspec;

TEST_CASE("interval grid: node counts and trapezoid weights") {
  const Grid g = build_grid(1, 10.0, 0.1);
  CHECK(g.dim == 1);
  CHECK(g.n_norm == 101);
  CHECK(g.num_nodes() == 101);
  CHECK(g.num_boundary_nodes() == 1);
  CHECK(g.normal_nodes.front() == 0.0);
  CHECK(g.normal_nodes.back() == doctest::Approx(10.0));
  double wsum = 0;
  for (Index f = 0; f < g.num_nodes(); ++f) wsum += g.quadrature_weights[f];
  CHECK(wsum == doctest::Approx(10.0).epsilon(1e-13));
  CHECK(g.quadrature_weights[0] == doctest::Approx(0.05));
  CHECK(g.quadrature_weights[50] == doctest::Approx(0.1));
  CHECK(g.surface_weights[0] == 1.0);
}

TEST_CASE("half-plane grid: cell-centred tangential, vertex normal") {
  const Grid g = build_grid(2, 1.0, 0.5);
  CHECK(g.n_tang == 4);
  CHECK(g.n_norm == 3);
  CHECK(g.num_nodes() == 12);
  REQUIRE(g.tangential_nodes.size() == 4);
  CHECK(g.tangential_nodes[0] == doctest::Approx(-0.75));
  CHECK(g.tangential_nodes[1] == doctest::Approx(-0.25));
  CHECK(g.tangential_nodes[2] == doctest::Approx(0.25));
  CHECK(g.tangential_nodes[3] == doctest::Approx(0.75));
  REQUIRE(g.normal_nodes.size() == 3);
  CHECK(g.normal_nodes[0] == doctest::Approx(0.0));
  CHECK(g.normal_nodes[1] == doctest::Approx(0.5));
  CHECK(g.normal_nodes[2] == doctest::Approx(1.0));
  double wsum = 0;
  for (Index f = 0; f < g.num_nodes(); ++f) wsum += g.quadrature_weights[f];
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-13));  // (2L)^{n-1} * L
  double ssum = 0;
  for (Index b = 0; b < g.num_boundary_nodes(); ++b) ssum += g.surface_weights[b];
  CHECK(ssum == doctest::Approx(2.0).epsilon(1e-13));  // (2L)^{n-1}
}

TEST_CASE("half-space grid: counts and weight sum") {
  const Grid g = build_grid(3, 1.0, 0.5);
  CHECK(g.num_nodes() == 48);
  CHECK(g.num_boundary_nodes() == 16);
  double wsum = 0;
  for (Index f = 0; f < g.num_nodes(); ++f) wsum += g.quadrature_weights[f];
  CHECK(wsum == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("quadrature integrates linear functions exactly") {
  const Grid g = build_grid(2, 1.0, 0.25);
  double sx = 0, sn = 0;
  for (Index f = 0; f < g.num_nodes(); ++f) {
    const auto x = g.node_coord(f);
    sx += g.quadrature_weights[f] * x[0];
    sn += g.quadrature_weights[f] * x[1];
  }
  CHECK(std::abs(sx) <= 1e-14);
  CHECK(sn == doctest::Approx(1.0).epsilon(1e-13));  // (2L)^{n-1} * L^2/2
}

TEST_CASE("coordinate reconstruction round-trips index decomposition") {
  const Grid g = build_grid(3, 1.0, 0.5);
  for (Index f = 0; f < g.num_nodes(); ++f) {
    const auto x = g.node_coord(f);
    CHECK(x[0] ==
          doctest::Approx(g.tangential_nodes[static_cast<std::size_t>(g.tang_index(f, 0))]));
    CHECK(x[1] ==
          doctest::Approx(g.tangential_nodes[static_cast<std::size_t>(g.tang_index(f, 1))]));
    CHECK(x[2] == doctest::Approx(g.normal_nodes[static_cast<std::size_t>(g.norm_index(f))]));
    const Index b = g.boundary_index[static_cast<std::size_t>(f / g.n_norm)];
    CHECK(b == (f / g.n_norm) * g.n_norm);
  }
}

TEST_CASE("doubling the box extends the node set") {
  const Grid small = build_grid(2, 1.0, 0.5);
  const Grid big = build_grid(2, 2.0, 0.5);
  auto contains = [](const std::vector<double>& xs, double v) {
    return std::any_of(xs.begin(), xs.end(), [v](double x) { return std::abs(x - v) < 1e-12; });
  };
  for (double t : small.tangential_nodes) CHECK(contains(big.tangential_nodes, t));
  for (double z : small.normal_nodes) CHECK(contains(big.normal_nodes, z));
}

TEST_CASE("grid construction rejects bad shapes") {
  CHECK_THROWS_AS(build_grid(1, 1.0, 0.3), std::invalid_argument);   // non-integral L/h
  CHECK_THROWS_AS(build_grid(2, 1.0, 1.0), std::invalid_argument);   // ratio below 2
  CHECK_THROWS_AS(build_grid(2, 1.0, -0.5), std::invalid_argument);  // negative spacing
  CHECK_THROWS_AS(build_grid(5, 1.0, 0.5), std::invalid_argument);   // unsupported dimension
  CHECK_THROWS_AS(build_grid(3, 10.0, 0.05), std::length_error);     // over the node cap
  GridOptions tiny;
  tiny.max_nodes = 10;
  CHECK_THROWS_AS(build_grid(2, 1.0, 0.25, tiny), std::length_error);
}

TEST_CASE("dimension four only exists as a boundary lattice") {
  const Grid g = build_grid(4, 1.0, 0.5);
  CHECK(g.boundary_only);
  CHECK(g.num_boundary_nodes() == 64);
  CHECK(g.boundary_dim() == 3);
  CHECK_THROWS_AS(g.node_coord(0), std::logic_error);
  const Grid g3 = build_boundary_grid(3, 1.0, 0.5);
  CHECK(g3.boundary_only);
  CHECK(g3.num_boundary_nodes() == 16);
}

TEST_CASE("radial weight flags the singular interval origin") {
  const Grid g1 = build_grid(1, 2.0, 0.5);
  const auto w1 = radial_weight(g1);
  CHECK(w1.singular_index == 0);
  CHECK(w1.r[1] == doctest::Approx(0.5));
  const Grid g2 = build_grid(2, 2.0, 0.5);
  const auto w2 = radial_weight(g2);
  CHECK(w2.singular_index == -1);
  double rmin = 1e300;
  for (Index f = 0; f < g2.num_nodes(); ++f) rmin = std::min(rmin, w2.r[f]);
  CHECK(rmin == doctest::Approx(0.25));  // cell centring keeps |x'| >= h/2
}
