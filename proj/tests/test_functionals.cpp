#include <doctest.h>

#include <cmath>
#include <vector>

#include "asg/analytics.hpp"
#include "asg/campaigns.hpp"
#include "asg/engine.hpp"
#include "asg/functionals.hpp"
#include "asg/rng.hpp"

using namespace asg;

namespace {

// Path started at n0 with an absolute time origin, simulated to cover
// [origin, origin + span].
MarginalPath simulated_path(const ModelParams& p, std::int64_t n0, double span,
                            std::uint64_t seed, std::uint64_t idx) {
  RandomStream rng = stream_for(seed, idx);
  const double origin = expected_hitting_time_of(p, n0);
  MarginalPath path = simulate_marginal(p, n0, MarginalStop{.horizon = span}, rng);
  path.time_origin = origin;
  return path;
}

}  // namespace

TEST_CASE("x_eps is zero at t=0 and on a path pinned to 2/s") {
  // jumps placed so that N(s_j) = 2/s_j exactly at the evaluation times
  MarginalPath path;
  path.params = ModelParams{0.0, 0.0};
  path.n0 = 100;
  path.time_origin = 0.02;  // = 2/100
  path.times = {0.005, 0.02};  // local; absolute 0.025 and 0.04
  path.levels = {80, 50};
  path.stop_time = 0.04;
  const double eps = 1e-2;
  const std::vector<double> grid = {0.0, 2.0, 2.5, 4.0};  // eps*t = .02, .025, .04
  const PathFunctional x = x_eps_path(path, eps, grid);
  for (double v : x.values) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("x_eps rejects grid points beyond coverage") {
  MarginalPath path;
  path.params = ModelParams{0.0, 0.0};
  path.n0 = 10;
  path.time_origin = 0.2;
  path.stop_time = 0.1;
  CHECK_THROWS_AS((void)x_eps_path(path, 0.1, {10.0}), std::invalid_argument);
  CHECK_THROWS_AS((void)x_eps_path(path, 0.1, {1.0}), std::invalid_argument);  // before origin
}

TEST_CASE("martingale with no events is pure compensator") {
  // M_t = -(1/2) int_0^t s (mu - lambda)(n0) ds, trajectory start at 0
  const ModelParams p{1.0, 0.5};
  MarginalPath path;
  path.params = p;
  path.n0 = 7;
  path.time_origin = 0.0;
  path.stop_time = 0.3;
  const std::vector<double> grid = {0.1, 0.2, 0.3};
  const PathFunctional m = martingale_path(path, grid);
  const double drift = p.death_rate(7) - p.birth_rate(7);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double expect = -0.25 * drift * grid[i] * grid[i];
    CHECK(m.values[i] == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("without selection there are no upward jumps in the martingale sums") {
  const ModelParams p{0.5, 0.0};
  MarginalPath path = simulated_path(p, 200, 0.5, 21, 0);
  // M is well-defined and finite; the up-jump sum is structurally empty since
  // a sigma=0 path never moves up
  for (std::size_t i = 0; i < path.levels.size(); ++i) {
    const std::int64_t prev = i == 0 ? path.n0 : path.levels[i - 1];
    REQUIRE(path.levels[i] == prev - 1);
  }
  const PathFunctional m = martingale_path(path, {path.time_origin + 0.4});
  CHECK(std::isfinite(m.values[0]));
}

TEST_CASE("residual on a zero-event path matches the closed form") {
  const ModelParams p{0.0, 0.0};
  MarginalPath path;
  path.params = p;
  path.n0 = 8;
  path.time_origin = 0.05;
  path.stop_time = 0.2;
  const PathFunctional r = residual_path(path, {0.25});
  // I3 = int_tau^T (s n/2 - 1)^2 / s ds with n = 8, tau = 0.05, T = 0.25
  const double tau = 0.05, T = 0.25, n = 8.0;
  const double i3 = n * n * (T * T - tau * tau) / 8.0 - n * (T - tau) + std::log(T / tau);
  const double i_ns = 0.5 * n * (T * T - tau * tau);
  const double expect = -i3 + 0.25 * (1.0 - p.theta + p.sigma) * i_ns;
  CHECK(r.values[0] == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("theta=1 sigma=0 kills the second residual term") {
  const ModelParams p{1.0, 0.0};
  MarginalPath path;
  path.params = p;
  path.n0 = 5;
  path.time_origin = 0.1;
  path.stop_time = 0.2;
  const double tau = 0.1, T = 0.3, n = 5.0;
  const PathFunctional r = residual_path(path, {T});
  const double i3 = n * n * (T * T - tau * tau) / 8.0 - n * (T - tau) + std::log(T / tau);
  CHECK(r.values[0] == doctest::Approx(-i3).epsilon(1e-13));  // (1 - theta + sigma) = 0
}

TEST_CASE("pathwise decomposition identity holds to machine precision") {
  for (auto [theta, sigma] : {std::pair{0.0, 0.0}, std::pair{1.0, 1.0}, std::pair{0.5, 2.0}}) {
    const ModelParams p{theta, sigma};
    MarginalPath path = simulated_path(p, 2'000, 0.05, 33, 1);
    const double tau = path.time_origin;
    const std::vector<double> grid = {tau + 0.001, tau + 0.01, tau + 0.03, tau + 0.05};
    CHECK(decomposition_residual(path, grid) < 1e-9);
  }
}

TEST_CASE("y identity holds pathwise to machine precision") {
  const ModelParams p{1.0, 1.0};
  MarginalPath path = simulated_path(p, 1'000, 0.08, 34, 2);
  const double tau = path.time_origin;
  const std::vector<double> grid = {tau + 0.005, tau + 0.02, tau + 0.05, tau + 0.08};
  CHECK(y_identity_residual(path, grid) < 1e-10);
  // and the identity also holds for zero-origin paths (L vanishes at 0)
  MarginalPath raw = path;
  raw.time_origin = 0.0;
  const std::vector<double> raw_grid = {0.005, 0.02, 0.05, 0.08};
  CHECK(y_identity_residual(raw, raw_grid) < 1e-10);
}

TEST_CASE("y_paths returns the rescaled pair") {
  const ModelParams p{0.0, 0.0};
  MarginalPath path = simulated_path(p, 500, 0.05, 35, 3);
  const double eps = 1e-2;
  const std::vector<double> grid = {1.0, 2.0, 3.0};
  const YPair pair = y_paths(path, eps, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(pair.y_eps.values[i] == doctest::Approx(pair.y.values[i] / std::sqrt(eps)));
}

TEST_CASE("l_eps compensator: piecewise-exact integral vs quadrature oracle") {
  const ModelParams p{0.0, 0.0};
  // staircase pinned to N = 2/s at segment left ends: jumps at s_m = 2/m
  MarginalPath path;
  path.params = p;
  path.n0 = 4'000;
  path.time_origin = 2.0 / 4000.0;
  std::int64_t m = 4'000;
  while (m > 50) {
    --m;
    path.times.push_back(2.0 / static_cast<double>(m) - path.time_origin);
    path.levels.push_back(m);
  }
  path.stop_time = path.times.back();

  const double eps = 1e-3;
  const double t = (2.0 / 51.0) / eps;  // inside coverage
  const double got = l_eps_compensator(path, eps, t);

  // Simpson quadrature of the exact staircase integrand (test-only oracle)
  const double a = path.time_origin, b = eps * t;
  const int panels = 200'000;
  double quad = 0.0;
  const double h = (b - a) / panels;
  auto f = [&](double s) {
    const double local = std::max(0.0, std::min(s, b) - path.time_origin);
    const double n = static_cast<double>(path.level_at(local));
    return std::pow(s, 4.0) * n * (n - 1.0 + p.theta + p.sigma) / 2.0;
  };
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + i * h;
    quad += (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h)) * h / 6.0;
  }
  quad /= 4.0 * eps * eps * eps;
  CHECK(got == doctest::Approx(quad).epsilon(5e-4));

  // leading small-eps behaviour with N ~ 2/s: t^3/6 - eps t^4/16
  const double closed = t * t * t / 6.0 - eps * std::pow(t, 4.0) / 16.0;
  CHECK(got == doctest::Approx(closed).epsilon(0.05));
}

TEST_CASE("l_eps jumps respect the uniform bound") {
  const ModelParams p{1.0, 1.0};
  MarginalPath path = simulated_path(p, 3'000, 0.02, 36, 4);
  const double eps = 1e-2;
  const double T = (path.time_origin + 0.02) / eps;
  const double bound = std::pow(eps * T, 2.0) / (2.0 * eps * std::sqrt(eps));
  CHECK(max_l_eps_jump(path, eps, T) <= bound * (1.0 + 1e-12));
}

TEST_CASE("sup_deviation matches a dense-grid oracle on random paths") {
  RandomStream rng = stream_for(37, 0);
  const ModelParams p{1.0, 1.0};
  for (int rep = 0; rep < 25; ++rep) {
    MarginalPath path = simulate_marginal(p, 40, MarginalStop{.horizon = 0.4}, rng);
    path.time_origin = 0.05;
    const int k = rep % 2 == 0 ? 2 : 3;
    const double t = 0.05 + 0.4;
    const double exact = sup_deviation(path, t, k);
    double grid_sup = -1e300;
    const int steps = 20'000;
    for (int i = 0; i <= steps; ++i) {
      const double s = 0.05 + (t - 0.05) * i / steps;
      const double x = 0.5 * s * static_cast<double>(path.level_at(s - path.time_origin)) - 1.0;
      grid_sup = std::max(grid_sup, std::pow(x, k));
    }
    REQUIRE(exact >= grid_sup - 1e-12);
    REQUIRE(exact <= grid_sup + 1e-3 * (std::fabs(grid_sup) + 1.0));
  }
}

TEST_CASE("streamed path stats agree with the full accumulator replay") {
  const ModelParams p{1.0, 1.0};
  const std::uint64_t seed = 77, idx = 9;
  const std::int64_t n0 = 500;
  const double origin = expected_hitting_time_of(p, n0);
  const double horizon_abs = origin + 0.05;
  const std::vector<double> targets = {origin + 0.01, origin + 0.03, horizon_abs};

  RandomStream rng_stream = stream_for(seed, idx);
  const StreamedPathStats lean =
      streamed_path_stats(p, n0, origin, horizon_abs, targets, rng_stream);

  // identical draws -> identical event sequence for the materialized path
  RandomStream rng_path = stream_for(seed, idx);
  MarginalPath path = simulate_marginal(p, n0, MarginalStop{.horizon = horizon_abs - origin},
                                        rng_path);
  path.time_origin = origin;

  FunctionalAccumulator acc(p, n0, origin);
  double sup_raw = std::fabs(acc.x() - acc.y());
  std::size_t k = 0;
  std::vector<double> qv(targets.size(), 0.0);
  auto take = [&](double s) {
    while (k < targets.size() && targets[k] <= s) {
      acc.advance_to(targets[k]);
      qv[k] = acc.qv_integral();
      ++k;
    }
  };
  for (std::size_t e = 0; e < path.times.size(); ++e) {
    const double s = origin + path.times[e];
    take(s);
    acc.advance_to(s);
    sup_raw = std::max(sup_raw, std::fabs(acc.x() - acc.y()));
    acc.apply_jump(s, path.levels[e]);
    sup_raw = std::max(sup_raw, std::fabs(acc.x() - acc.y()));
  }
  take(horizon_abs);
  acc.advance_to(horizon_abs);
  sup_raw = std::max(sup_raw, std::fabs(acc.x() - acc.y()));

  CHECK(lean.sup_xy_raw == doctest::Approx(sup_raw).epsilon(1e-10));
  for (std::size_t j = 0; j < targets.size(); ++j)
    CHECK(lean.qv_at_targets[j] == doctest::Approx(qv[j]).epsilon(1e-10));
}

TEST_CASE("coupled trajectory projection matches counts_at") {
  RandomStream rng = stream_for(41, 0);
  const ModelParams p{1.0, 2.0};
  CoupledTrajectory traj = simulate_coupled(p, 30, StopCondition{.level = 2}, rng);
  const MarginalPath path = coordinate_path(traj, Coord::asg);
  RandomStream probe = stream_for(41, 1);
  for (int i = 0; i < 200; ++i) {
    const double t = probe.uniform01() * traj.stop_time;
    REQUIRE(path.level_at(t) == traj.counts_at(t).asg);
  }
}
