#include "core/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "core/chebyshev.hpp"
#include "core/errors.hpp"
#include "core/nonlocal_operator.hpp"
#include "core/quadrature_oracle.hpp"

namespace peri {
namespace {

constexpr double kTransformTol = 1e-12;
// Distances at round-off level count as converged.
constexpr double kConvergedDistance = 1e-13;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? m : std::numeric_limits<double>::infinity();
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

std::vector<int> degrees_up_to(int max_degree) {
  if (max_degree < 4) return {std::max(max_degree, 2)};
  std::vector<int> out;
  for (int n = 4; n <= max_degree; n *= 2) out.push_back(n);
  return out;
}

std::string check_line(const CheckResult& c) {
  return std::string(c.passed ? "PASS " : "FAIL ") + c.name + (c.detail.empty() ? "" : "  " + c.detail);
}

}  // namespace

bool TransformReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> TransformReport::lines() const {
  std::vector<std::string> out;
  for (const CheckResult& c : checks) out.push_back(check_line(c));
  if (!decay_n.empty()) {
    std::string rates = "exp(z) projection errors:";
    for (std::size_t i = 0; i < decay_n.size(); ++i) {
      rates += " N=" + std::to_string(decay_n[i]) + ":" + sci(decay_errors[i]);
    }
    out.push_back(rates);
  }
  out.push_back(passed() ? "transforms: all checks passed" : "transforms: FAILED");
  return out;
}

TransformReport verify_transforms(int max_degree, bool inject_fault) {
  if (max_degree < 2) throw std::invalid_argument("max_degree must be >= 2");
  TransformReport report;
  std::mt19937_64 rng(0x5eed0001);
  const std::vector<int> degrees = degrees_up_to(max_degree);

  double round_trip = 0.0, direct = 0.0, linearity = 0.0;
  for (int n : degrees) {
    const SpectralGrid g(n, -1.0, 1.0);
    const NodalField u(random_vector(rng, g.size()));
    const NodalField v(random_vector(rng, g.size()));
    ChebSeries cu = forward_transform(u, g);
    if (inject_fault) cu.coeffs[1] = 0.5 - cu.coeffs[1];
    round_trip = std::max(round_trip, max_abs_diff(inverse_transform(cu, g).values, u.values));
    direct = std::max(direct, max_abs_diff(cu.coeffs, forward_transform_direct(u, g).coeffs));

    const double a = 0.75, b = -1.25;
    NodalField mix(std::vector<double>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) mix.values[i] = a * u.values[i] + b * v.values[i];
    const ChebSeries cmix = forward_transform(mix, g);
    const ChebSeries cv = forward_transform(v, g);
    const ChebSeries cu_clean = forward_transform(u, g);
    for (std::size_t k = 0; k < cmix.coeffs.size(); ++k) {
      linearity = std::max(linearity, std::abs(cmix.coeffs[k] - a * cu_clean.coeffs[k] - b * cv.coeffs[k]));
    }
  }
  const std::string range = "N=" + std::to_string(degrees.front()) + ".." + std::to_string(degrees.back());
  report.checks.push_back({"round trip " + range, round_trip <= kTransformTol, "max err " + sci(round_trip)});
  report.checks.push_back({"fast vs direct transform " + range, direct <= kTransformTol, "max err " + sci(direct)});
  report.checks.push_back({"linearity " + range, linearity <= kTransformTol, "max err " + sci(linearity)});

  double product = 0.0;
  int product_max_n = 0;
  for (int n : degrees) {
    if (n > 64) break;
    product_max_n = n;
    const SpectralGrid fine(2 * n, -1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      const ChebSeries a(random_vector(rng, n + 1));
      const ChebSeries b(random_vector(rng, n + 1));
      const NodalField av = inverse_transform(pad_to(a, 2 * n), fine);
      const NodalField bv = inverse_transform(pad_to(b, 2 * n), fine);
      NodalField ab(std::vector<double>(fine.size()));
      for (std::size_t i = 0; i < fine.size(); ++i) ab.values[i] = av.values[i] * bv.values[i];
      product = std::max(product, max_abs_diff(series_product(a, b).coeffs, forward_transform(ab, fine).coeffs));
    }
  }
  report.checks.push_back({"product formula N<=" + std::to_string(product_max_n), product <= kTransformTol,
                           "max err " + sci(product)});

  const ChebSeries t1({0.0, 1.0});
  const ChebSeries t1t1 = series_product(t1, t1);
  const double identity = max_abs_diff(t1t1.coeffs, {0.5, 0.0, 0.5});
  report.checks.push_back({"T1*T1 = (T0 + T2)/2", identity <= 1e-15, "err " + sci(identity)});

  if (degrees.size() == 1 && degrees.front() < 4) {
    const SpectralGrid g(degrees.front(), -1.0, 1.0);
    const double err = projection_error([](double z) { return 1.0 - 2.0 * z * z; }, g);
    report.checks.push_back({"polynomial exactness N=" + std::to_string(g.n_modes()), err <= 1e-14, "err " + sci(err)});
    return report;
  }

  for (int n : {4, 8, 16, 32}) {
    if (n > max_degree) break;
    report.decay_n.push_back(n);
    report.decay_errors.push_back(projection_error([](double z) { return std::exp(z); }, SpectralGrid(n, -1.0, 1.0)));
  }
  bool decay_ok = report.decay_n.size() >= 2;
  std::string worst;
  for (std::size_t i = 1; i < report.decay_errors.size(); ++i) {
    const double prev = report.decay_errors[i - 1], cur = report.decay_errors[i];
    if (prev <= 1e-13) break;
    const bool ok = cur <= prev / 10.0 || cur <= 1e-13;
    if (!ok) worst = "N=" + std::to_string(report.decay_n[i]);
    decay_ok = decay_ok && ok;
  }
  if (report.decay_n.size() >= 2) {
    report.checks.push_back({"exp(z) projection decay >= 10x per doubling", decay_ok, worst});
  }

  if (max_degree >= 8) {
    std::vector<double> ln, le;
    for (int n : {8, 16, 32, 64, 128}) {
      if (n > max_degree) break;
      ln.push_back(std::log(n));
      le.push_back(std::log(projection_error([](double z) { return std::abs(z); }, SpectralGrid(n, -1.0, 1.0))));
    }
    const double mx = [&] { double s = 0; for (double x : ln) s += x; return s / ln.size(); }();
    const double my = [&] { double s = 0; for (double y : le) s += y; return s / le.size(); }();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < ln.size(); ++i) {
      sxy += (ln[i] - mx) * (le[i] - my);
      sxx += (ln[i] - mx) * (ln[i] - mx);
    }
    const double slope = sxy / sxx;
    report.checks.push_back({"|z| projection log-log slope in [-2.5, -0.5]", slope >= -2.5 && slope <= -0.5,
                             "slope " + std::to_string(slope)});
  }
  return report;
}

double trajectory_distance(const SpectralGrid& ga, const NodalField& a, const SpectralGrid& gb, const NodalField& b,
                           const SpectralGrid& common) {
  const LobattoInterpolant ia(ga, a.values);
  const LobattoInterpolant ib(gb, b.values);
  NodalField diff(std::vector<double>(common.size()));
  for (std::size_t i = 0; i < common.size(); ++i) {
    const double z = common.nodes()[i];
    diff.values[i] = ia(z) - ib(z);
  }
  return weighted_norm(diff, common);
}

bool OperatorReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> OperatorReport::lines() const {
  std::vector<std::string> out;
  out.push_back("spectral vs quadrature oracle at t = 0:");
  out.push_back("       N   max|spectral-oracle|   max|oracle|");
  for (const DiscrepancyRow& r : discrepancy) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "  %6d   %20.6e   %11.4e", r.n_modes, r.max_abs, r.oracle_max);
    out.push_back(buf);
  }
  if (!distances.empty()) {
    out.push_back("self-convergence at final time (weighted norm):");
    out.push_back("  N_coarse  N_fine      distance     order");
    for (const DistanceRow& r : distances) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "  %8d  %6d  %12.6e  %8.3f", r.n_coarse, r.n_fine, r.distance, r.order);
      out.push_back(buf);
    }
  }
  if (!clamp_counts.empty()) {
    std::string c = "clamp counts:";
    for (std::size_t i = 0; i < clamp_counts.size(); ++i) c += " " + std::to_string(clamp_counts[i]);
    out.push_back(c);
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "beta: closed form %.15g, quadrature %.15g", beta_closed, beta_quadrature);
  out.push_back(buf);
  for (const CheckResult& c : checks) out.push_back(check_line(c));
  out.push_back(passed() ? "operator: all checks passed" : "operator: FAILED");
  return out;
}

OperatorReport verify_operator(const SimConfig& config, const std::vector<int>& n_list) {
  if (n_list.empty()) throw ConfigError("n_list must not be empty");
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end()) {
    throw ConfigError("n_list must be strictly ascending");
  }
  OperatorReport report;

  std::vector<SpectralGrid> grids;
  std::vector<NodalField> finals;
  bool all_completed = true;
  std::string failure;
  for (int n : n_list) {
    SimConfig c = config;
    c.n_modes = n;
    c.dx.reset();
    c.validate();
    const SpectralGrid g = c.make_grid();

    RhsWorkspace w(g, c.kernel, c.delta, c.sink, c.testing);
    BoundaryConditions bc = c.boundary;
    bc.duration = c.duration;
    const SimState s0 = init_state(
        [&](double zp, double zr) { return c.initial.evaluate(zp, zr, c.depth); }, g, bc);
    const NodalField spectral = rhs_spectral(s0.theta, w, c.soil);
    const NodalField sink(std::vector<double>(g.size(), c.sink));
    const NodalField oracle = rhs_quadrature_oracle(s0.theta, g, w.kernel(), c.soil, sink, c.testing);
    DiscrepancyRow row{n, max_abs_diff(spectral.values, oracle.values), 0.0};
    for (double v : oracle.values) row.oracle_max = std::max(row.oracle_max, std::abs(v));
    report.discrepancy.push_back(row);

    const Trajectory t = run(c);
    if (!t.completed()) {
      all_completed = false;
      failure += " N=" + std::to_string(n) + ": " + t.failure->message;
    }
    report.clamp_counts.push_back(t.final_state.diagnostics.clamp_count);
    grids.push_back(g);
    finals.push_back(t.final_state.theta);
  }

  if (config.testing.zero_conductivity) {
    double worst = 0.0;
    for (const DiscrepancyRow& r : report.discrepancy) worst = std::max(worst, r.max_abs);
    report.checks.push_back({"K == 0: spectral and oracle agree to 1e-12", worst <= 1e-12, "max " + sci(worst)});
  }
  report.checks.push_back({"all runs completed", all_completed, failure});

  const SpectralGrid& common = grids.back();
  for (std::size_t i = 1; i < grids.size(); ++i) {
    DistanceRow r{n_list[i - 1], n_list[i], trajectory_distance(grids[i - 1], finals[i - 1], grids[i], finals[i], common),
                  std::numeric_limits<double>::quiet_NaN()};
    if (!report.distances.empty()) {
      const DistanceRow& p = report.distances.back();
      r.order = std::log(p.distance / r.distance) / std::log(static_cast<double>(r.n_fine) / p.n_fine);
    }
    report.distances.push_back(r);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < report.distances.size(); ++i) {
    const double d = report.distances[i].distance;
    decreasing = decreasing && (d < report.distances[i - 1].distance || d <= kConvergedDistance);
  }
  if (report.distances.size() >= 2) {
    report.checks.push_back({"successive distances decrease", decreasing, ""});
  }

  const SpectralGrid fine(2 * n_list.back(), 0.0, config.depth, config.orientation);
  const BetaValue beta = compute_beta(config.kernel, config.delta, fine.smallest_positive_node());
  report.beta_closed = beta.closed_form;
  report.beta_quadrature = beta.quadrature;
  const double beta_err = std::abs(beta.closed_form - beta.quadrature);
  report.checks.push_back({"beta closed form vs quadrature <= 1e-8", beta_err <= 1e-8, "diff " + sci(beta_err)});
  return report;
}

}  // namespace peri
