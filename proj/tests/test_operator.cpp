#include <doctest.h>

#include <cmath>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/nonlocal_operator.hpp"
#include "core/quadrature_oracle.hpp"
#include "core/stepper.hpp"
#include "support.hpp"

using namespace peri;
using testing::max_abs;
using testing::max_abs_diff;

namespace {

// Measured spectral-vs-oracle gaps, frozen so that drift is noticed. The
// transform convolution is not the integral operator, so these are not small.
constexpr double kExample41Gap = 0.934472;
constexpr double kLinearPotentialGap = 0.983314;

NodalField preset_initial(const SimConfig& c, const SpectralGrid& g) {
  BoundaryConditions bc = c.boundary;
  bc.duration = c.duration;
  return init_state([&](double zp, double zr) { return c.initial.evaluate(zp, zr, c.depth); }, g, bc).theta;
}

NodalField constant(const SpectralGrid& g, double v) { return NodalField(std::vector<double>(g.size(), v)); }

double relative_gap(const NodalField& a, const NodalField& b) {
  return max_abs_diff(a.values, b.values) / max_abs(b.values);
}

// Primitive of phi(r) = (r - 1 + delta) / delta from 1 - delta to s.
double distributed_primitive(double s, double delta) {
  return s <= 1.0 - delta ? 0.0 : (s - 1.0 + delta) * (s - 1.0 + delta) / (2.0 * delta);
}

}  // namespace

TEST_SUITE("operator") {

TEST_CASE("zero conductivity leaves only the sink") {
  const SimConfig c = preset("example-4.1");
  const SpectralGrid g(32, 0.0, c.depth);
  auto rng = testing::rng(41);
  for (double sink : {0.0, -700.0, 3.5e-3}) {
    RhsWorkspace w(g, KernelFamily::Distributed, 0.15, sink, RhsOptions{true, true});
    const NodalField theta(testing::uniform_vector(rng, g.size(), 0.08, 0.28));
    for (double v : rhs_spectral(theta, w, c.soil).values) CHECK(v == sink);
    const NodalField oracle =
        rhs_quadrature_oracle(theta, g, w.kernel(), c.soil, constant(g, sink), RhsOptions{true, true});
    for (double v : oracle.values) CHECK(v == sink);
  }
}

TEST_CASE("residual content everywhere gives a vanishing right-hand side") {
  const SimConfig c = preset("example-4.1");
  const SpectralGrid g(24, 0.0, c.depth);
  RhsWorkspace w(g, KernelFamily::Distributed, 0.15, 0.0);
  CHECK(max_abs(rhs_spectral(constant(g, c.soil.theta_r), w, c.soil).values) <= 1e-12);
}

TEST_CASE("sink enters additively") {
  const SimConfig c = preset("example-4.2");
  const SpectralGrid g(40, 0.0, c.depth);
  const NodalField theta = preset_initial(c, g);
  RhsWorkspace w0(g, KernelFamily::Distributed, 0.15, 0.0);
  const NodalField r0 = rhs_spectral(theta, w0, c.soil);
  for (double s : {-100.0, 1e-3}) {
    RhsWorkspace ws(g, KernelFamily::Distributed, 0.15, s);
    const NodalField rs = rhs_spectral(theta, ws, c.soil);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(rs.values[i] == r0.values[i] + s);
  }
}

TEST_CASE("workspace is reusable and deterministic") {
  const SimConfig c = preset("example-4.2");
  const SpectralGrid g(50, 0.0, c.depth);
  const NodalField theta = preset_initial(c, g);
  RhsWorkspace w(g, KernelFamily::Distributed, 0.15, 0.0);
  const NodalField a = rhs_spectral(theta, w, c.soil);
  rhs_spectral(constant(g, 0.3), w, c.soil);
  const NodalField b = rhs_spectral(theta, w, c.soil);
  CHECK(a.values == b.values);
  CHECK(w.grid().n_modes() == 100);
  CHECK(w.kernel_coeffs().coeffs == forward_transform(w.kernel().nodal_values, w.grid()).coeffs);
}

TEST_CASE("non-finite input raises a step failure naming the node") {
  const SimConfig c = preset("example-4.2");
  const SpectralGrid g(16, 0.0, c.depth);
  RhsWorkspace w(g, KernelFamily::Distributed, 0.15, 0.0);
  NodalField theta = constant(g, 0.25);
  theta.values[5] = std::nan("");
  try {
    rhs_spectral(theta, w, c.soil);
    FAIL("expected StepFailure");
  } catch (const StepFailure& e) {
    CHECK(e.node() == 5);
  }
  CHECK_THROWS_AS(rhs_spectral(NodalField(std::vector<double>(5, 0.2)), w, c.soil), std::invalid_argument);
}

TEST_CASE("oracle: flat potential gives zero interaction") {
  const SimConfig c = preset("example-4.2");
  const SpectralGrid g(16, 0.0, c.depth);
  const KernelSpec spec = KernelSpec::build(KernelFamily::Distributed, 0.15, SpectralGrid(32, 0.0, c.depth));
  const QuadratureOracle o(constant(g, c.soil.theta_s), g, spec, c.soil, RhsOptions{false, false});
  for (double v : o.interaction(g).values) CHECK(v == 0.0);
}

TEST_CASE("oracle: mesh doubling and global balance for the three soils") {
  for (const char* name : {"example-4.1", "example-4.2", "example-4.3"}) {
    CAPTURE(name);
    const SimConfig c = preset(name);
    const SpectralGrid g(32, 0.0, c.depth);
    const KernelSpec spec = KernelSpec::build(c.kernel, c.delta, SpectralGrid(64, 0.0, c.depth));
    const NodalField theta = preset_initial(c, g);
    const QuadratureOracle coarse(theta, g, spec, c.soil);
    const QuadratureOracle fine(theta, g, spec, c.soil, {}, 2 * coarse.mesh_cells());
    const NodalField a = coarse.interaction(g), b = fine.interaction(g);
    CHECK(relative_gap(a, b) <= 1e-8);

    const auto bal = fine.balance();
    CHECK(std::abs(bal.integral) <= 1e-6 * bal.magnitude);
  }
}

TEST_CASE("oracle: balance for random smooth profiles") {
  const SimConfig c = preset("example-4.2");
  const SpectralGrid g(64, 0.0, c.depth);
  const KernelSpec spec = KernelSpec::build(KernelFamily::Distributed, 0.15, SpectralGrid(128, 0.0, c.depth));
  auto rng = testing::rng(42);
  for (int trial = 0; trial < 3; ++trial) {
    const double a0 = testing::uniform(rng, 0.2, 0.35), a1 = testing::uniform(rng, -0.05, 0.05);
    const double a2 = testing::uniform(rng, -0.05, 0.05), k = testing::uniform(rng, 1, 4);
    NodalField theta(std::vector<double>(g.size()));
    for (std::size_t h = 0; h < g.size(); ++h) {
      const double z = g.nodes()[h];
      theta.values[h] = a0 + a1 * z + a2 * std::sin(k * z);
    }
    const QuadratureOracle o(theta, g, spec, c.soil);
    const auto bal = o.balance();
    CHECK(std::abs(bal.integral) <= 1e-6 * bal.magnitude);
  }
}

TEST_CASE("mass balance helpers") {
  const SpectralGrid g(20, 0.0, 30.0);
  CHECK(mass_balance(constant(g, 0.0), constant(g, 0.0), g) == 0.0);
  CHECK(total_mass_change(constant(g, -700.0), g) == doctest::Approx(-700.0 * 30.0).epsilon(1e-14));
  CHECK(mass_balance(constant(g, 2.0), constant(g, 2.0), g) == 0.0);
}

TEST_CASE("constant content, linear potential: closed form") {
  const SimConfig c = preset("example-4.1");
  const double delta = 0.15;
  const SpectralGrid g(48, 0.0, c.depth);
  const double theta0 = 0.2;
  const double k = conductivity(theta0, c.soil);
  const double L = g.map_scale();
  const double sign = (g.to_physical(1.0) - g.to_physical(0.0)) / L;
  RhsWorkspace w(g, KernelFamily::Distributed, delta, 0.0);
  const QuadratureOracle o(constant(g, theta0), g, w.kernel(), c.soil);
  const NodalField spectral = rhs_spectral(constant(g, theta0), w, c.soil);

  NodalField exact(std::vector<double>(g.size()));
  double oracle_err = 0.0;
  for (std::size_t h = 0; h < g.size(); ++h) {
    const double z = g.nodes()[h];
    exact.values[h] =
        sign * L * L * k * (distributed_primitive(1.0 - z, delta) - distributed_primitive(1.0 + z, delta));
    oracle_err = std::max(oracle_err, std::abs(o.interaction_at(z) - exact.values[h]));
  }
  CHECK(oracle_err <= 1e-10 * max_abs(exact.values));
  const double gap = relative_gap(spectral, exact);
  MESSAGE("linear potential: spectral vs closed form relative gap " << gap);
  CHECK(gap == doctest::Approx(kLinearPotentialGap).epsilon(1e-3));
}

TEST_CASE("example 4.1 at t = 0: spectral against the oracle") {
  const SimConfig c = preset("example-4.1");
  const SpectralGrid g = c.make_grid();
  const NodalField theta = preset_initial(c, g);
  RhsWorkspace w(g, c.kernel, c.delta, 0.0);
  const NodalField spectral = rhs_spectral(theta, w, c.soil);
  const NodalField oracle = rhs_quadrature_oracle(theta, g, w.kernel(), c.soil, constant(g, 0.0));
  const double gap = relative_gap(spectral, oracle);
  MESSAGE("example 4.1: spectral vs oracle relative gap " << gap << ", oracle max " << max_abs(oracle.values));
  CHECK(gap == doctest::Approx(kExample41Gap).epsilon(1e-3));
}

TEST_CASE("spectral right-hand side converges in N at t = 0") {
  const SimConfig c = preset("example-4.2");
  std::vector<double> prev;
  double prev_diff = 1e300;
  const SpectralGrid probe(16, 0.0, c.depth);
  for (int n : {32, 64, 128, 256}) {
    const SpectralGrid g(n, 0.0, c.depth);
    RhsWorkspace w(g, c.kernel, c.delta, 0.0);
    const NodalField r = rhs_spectral(preset_initial(c, g), w, c.soil);
    const LobattoInterpolant p(g, r.values);
    std::vector<double> at;
    for (double z : probe.nodes()) at.push_back(p(z));
    if (!prev.empty()) {
      const double d = max_abs_diff(at, prev);
      CHECK(d < prev_diff);
      prev_diff = d;
    }
    prev = at;
  }
}

}
