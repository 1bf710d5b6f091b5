#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/verify.hpp"

using namespace peri;

namespace {

SimConfig dry(int n_modes = 16) {
  SimConfig c = preset("example-4.1");
  c.label = "dry";
  c.n_modes = n_modes;
  c.testing.zero_conductivity = true;
  c.sink = -2e-4;
  c.duration = 20.0;
  c.dt = 0.5;
  c.boundary = {0.2, 0.2, 0.15, 0.15, c.duration};
  c.initial.surface = 0.2;
  c.initial.bottom = 0.15;
  return c;
}

bool has_check(const std::vector<CheckResult>& checks, const std::string& prefix, bool passed) {
  return std::any_of(checks.begin(), checks.end(),
                     [&](const CheckResult& c) { return c.name.rfind(prefix, 0) == 0 && c.passed == passed; });
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("transform harness passes by default") {
  const TransformReport r = verify_transforms();
  for (const CheckResult& c : r.checks) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
  CHECK(r.passed());
  CHECK(r.decay_n == std::vector<int>{4, 8, 16, 32});
  CHECK(r.lines().back() == "transforms: all checks passed");
}

TEST_CASE("degenerate degree") {
  const TransformReport r = verify_transforms(2);
  CHECK(r.passed());
  CHECK(has_check(r.checks, "polynomial exactness N=2", true));
  CHECK(r.decay_n.empty());
  CHECK_THROWS_AS(verify_transforms(1), std::invalid_argument);
}

TEST_CASE("an injected fault is detected") {
  const TransformReport r = verify_transforms(64, true);
  CHECK_FALSE(r.passed());
  CHECK(has_check(r.checks, "round trip", false));
  CHECK(r.lines().back() == "transforms: FAILED");
}

TEST_CASE("operator harness on a zero-conductivity config") {
  const OperatorReport r = verify_operator(dry(), {8, 16, 32});
  REQUIRE(r.discrepancy.size() == 3);
  for (const DiscrepancyRow& row : r.discrepancy) CHECK(row.max_abs <= 1e-12);
  CHECK(r.distances.size() == 2);
  // Boundary nodes keep their data while the interior drifts, so the
  // interpolants differ near the ends; the gap still shrinks with N.
  CHECK(r.distances[1].distance < r.distances[0].distance);
  CHECK(r.clamp_counts == std::vector<std::size_t>{0, 0, 0});
  CHECK(has_check(r.checks, "K == 0", true));
  CHECK(r.passed());
}

TEST_CASE("operator harness: beta and failed runs") {
  SimConfig c = preset("example-4.1");
  c.duration = 1.2;
  c.snapshots = 2;
  c.boundary.duration = 1.2;
  const OperatorReport r = verify_operator(c, {16, 32});
  CHECK(std::abs(r.beta_closed - r.beta_quadrature) <= 1e-8);
  CHECK(r.beta_closed == doctest::Approx(0.158119).epsilon(1e-5));
  CHECK(has_check(r.checks, "beta", true));
  CHECK(std::isnan(r.distances.front().order));

  c.kernel = KernelFamily::Uniform;
  c.clamp_limit = 1;
  const OperatorReport bad = verify_operator(c, {16});
  CHECK(has_check(bad.checks, "all runs completed", false));
  CHECK_FALSE(bad.passed());
}

TEST_CASE("operator harness rejects bad N lists") {
  CHECK_THROWS_AS(verify_operator(dry(), {}), ConfigError);
  CHECK_THROWS_AS(verify_operator(dry(), {16, 8}), ConfigError);
  CHECK_THROWS_AS(verify_operator(dry(), {16, 16}), ConfigError);
  CHECK_THROWS_AS(verify_operator(dry(), {1}), ConfigError);
}

TEST_CASE("trajectory distance") {
  const SpectralGrid a(8, 0.0, 30.0), b(16, 0.0, 30.0), common(32, 0.0, 30.0);
  auto sample = [](const SpectralGrid& g, double shift) {
    NodalField f(std::vector<double>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = 0.2 + 0.01 * g.nodes()[i] * g.nodes()[i] + shift;
    return f;
  };
  CHECK(trajectory_distance(a, sample(a, 0.0), b, sample(b, 0.0), common) <= 1e-14);
  // Chebyshev weights sum to pi, so a constant c has norm |c| sqrt(pi).
  CHECK(trajectory_distance(a, sample(a, 0.1), b, sample(b, 0.0), common) ==
        doctest::Approx(0.1 * std::sqrt(M_PI)).epsilon(1e-10));
}

}
