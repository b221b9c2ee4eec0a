#include "asg/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asg {

FunctionalAccumulator::FunctionalAccumulator(const ModelParams& params, std::int64_t n0,
                                             double origin)
    : params_(params), n0_(n0), origin_(origin), s_(origin), n_(n0) {
  if (origin < 0.0) throw std::invalid_argument("FunctionalAccumulator: negative time origin");
}

void FunctionalAccumulator::advance_to(double s) {
  if (s < s_) throw std::invalid_argument("FunctionalAccumulator: time must be nondecreasing");
  if (s == s_) return;
  const double a = s_;
  const double b = s;
  const double n = static_cast<double>(n_);
  const double drift = params_.death_rate(n_) - params_.birth_rate(n_);
  const double d2 = b * b - a * a;
  const double d3 = b * b * b - a * a * a;
  const double d5 = std::pow(b, 5.0) - std::pow(a, 5.0);

  i_drift_s_.add(drift * 0.5 * d2);
  // dL = s dM = -(1/2) s^2 (mu - lambda) ds between jumps
  const double l_start = l_.total();
  l_.add(-drift * d3 / 6.0);
  // int_a^b Y_s/s ds with L_s = alpha - beta s^3 on the segment
  const double beta = drift / 6.0;
  if (a > 0.0) {
    const double alpha = l_start + beta * a * a * a;
    i_y_over_s_.add(alpha * (1.0 / b - 1.0 / a) + 0.5 * beta * d2);
  } else {
    // L vanishes at 0, so the integrand extends to s = 0 with alpha = 0
    i_y_over_s_.add(0.5 * beta * d2);
  }

  if (a > 0.0) {
    // the 1/s integrands start at the first positive time (zero-origin
    // trajectories pick them up from the first event on)
    const double log_ba = std::log(b / a);
    i_x_over_s_.add(0.5 * n * (b - a) - log_ba);
    i_x2_over_s_.add(n * n * d2 / 8.0 - n * (b - a) + log_ba);
  }
  i_n_s_.add(0.5 * n * d2);
  i_qv_.add(params_.holding_rate(n_) * d5 / 5.0);
  s_ = b;
}

void FunctionalAccumulator::apply_jump(double s, std::int64_t new_level) {
  advance_to(s);
  if (new_level == n_ - 1) {
    down_s_.add(s);
    l_.add(0.5 * s * s);  // down jump: dM = +s/2, dL = +s^2/2
  } else if (new_level == n_ + 1) {
    up_s_.add(s);
    l_.add(-0.5 * s * s);
  } else {
    throw std::invalid_argument("FunctionalAccumulator: jumps must be +-1");
  }
  max_l_jump_ = std::max(max_l_jump_, 0.5 * s * s);
  n_ = new_level;
}

double FunctionalAccumulator::martingale() const {
  return 0.5 * (down_s_.total() - up_s_.total()) - 0.5 * i_drift_s_.total();
}

double FunctionalAccumulator::y() const {
  if (s_ <= 0.0) return 0.0;
  return -l_.total() / s_;
}

double FunctionalAccumulator::residual() const {
  return -i_x2_over_s_.total() + 0.25 * (1.0 - params_.theta + params_.sigma) * i_n_s_.total();
}

double FunctionalAccumulator::decomposition_residual() const {
  return std::fabs(0.5 * s_ * static_cast<double>(n_) - anchor() + i_x_over_s_.total() +
                   martingale() - residual());
}

double FunctionalAccumulator::y_identity_residual() const {
  return std::fabs(y() + i_y_over_s_.total() + martingale());
}

namespace {

// Walks a materialized path, interleaving event application with grid
// queries. query(acc) is called once per grid time, in order.
template <class Query>
void walk(const MarginalPath& path, const std::vector<double>& abs_grid, Query&& query) {
  FunctionalAccumulator acc(path.params, path.n0, path.time_origin);
  const double end = path.time_origin + path.stop_time;
  std::size_t e = 0;
  for (double t : abs_grid) {
    if (t < path.time_origin || t > end * (1.0 + 1e-12))
      throw std::invalid_argument("path functional: grid point outside covered window");
    while (e < path.times.size() && path.time_origin + path.times[e] <= t) {
      acc.apply_jump(path.time_origin + path.times[e], path.levels[e]);
      ++e;
    }
    acc.advance_to(t);
    query(acc);
  }
}

std::vector<double> checked_sorted(std::vector<double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("path functional: grid must be increasing");
  return grid;
}

}  // namespace

PathFunctional x_eps_path(const MarginalPath& path, double epsilon, std::vector<double> grid) {
  PathFunctional out;
  out.kind = FunctionalKind::x_eps;
  out.epsilon = epsilon;
  out.grid = checked_sorted(std::move(grid));
  out.values.reserve(out.grid.size());
  const double scale = 1.0 / std::sqrt(epsilon);
  for (double t : out.grid) {
    if (t == 0.0) {
      out.values.push_back(0.0);
      continue;
    }
    const double s = epsilon * t;
    if (s < path.time_origin || s > path.time_origin + path.stop_time * (1.0 + 1e-12))
      throw std::invalid_argument("x_eps_path: grid point beyond trajectory coverage");
    const double n = static_cast<double>(path.level_at(s - path.time_origin));
    out.values.push_back(scale * (0.5 * s * n - 1.0));
  }
  return out;
}

PathFunctional martingale_path(const MarginalPath& path, std::vector<double> grid) {
  PathFunctional out;
  out.kind = FunctionalKind::martingale;
  out.grid = checked_sorted(std::move(grid));
  walk(path, out.grid, [&](const FunctionalAccumulator& acc) { out.values.push_back(acc.martingale()); });
  return out;
}

PathFunctional residual_path(const MarginalPath& path, std::vector<double> grid) {
  PathFunctional out;
  out.kind = FunctionalKind::residual;
  out.grid = checked_sorted(std::move(grid));
  walk(path, out.grid, [&](const FunctionalAccumulator& acc) { out.values.push_back(acc.residual()); });
  return out;
}

YPair y_paths(const MarginalPath& path, double epsilon, std::vector<double> grid) {
  YPair out;
  out.y.kind = FunctionalKind::y;
  out.y_eps.kind = FunctionalKind::y_eps;
  out.y.epsilon = out.y_eps.epsilon = epsilon;
  out.y.grid = out.y_eps.grid = checked_sorted(std::move(grid));
  std::vector<double> abs_grid;
  abs_grid.reserve(out.y.grid.size());
  for (double t : out.y.grid) abs_grid.push_back(epsilon * t);
  const double scale = 1.0 / std::sqrt(epsilon);
  walk(path, abs_grid, [&](const FunctionalAccumulator& acc) {
    out.y.values.push_back(acc.y());
    out.y_eps.values.push_back(scale * acc.y());
  });
  return out;
}

double l_eps_compensator(const MarginalPath& path, double epsilon, double t) {
  double value = 0.0;
  walk(path, {epsilon * t},
       [&](const FunctionalAccumulator& acc) { value = acc.qv_integral(); });
  return value / (4.0 * epsilon * epsilon * epsilon);
}

double max_l_eps_jump(const MarginalPath& path, double epsilon, double T) {
  double worst = 0.0;
  walk(path, {epsilon * T},
       [&](const FunctionalAccumulator& acc) { worst = acc.max_l_jump(); });
  return worst / (epsilon * std::sqrt(epsilon));
}

double sup_deviation(const MarginalPath& path, double t, int k) {
  if (k < 1) throw std::invalid_argument("sup_deviation: k must be >= 1");
  const double origin = path.time_origin;
  if (t <= origin) throw std::invalid_argument("sup_deviation: t before the time origin");
  auto dev_pow = [k](double s, std::int64_t n) {
    return std::pow(0.5 * s * static_cast<double>(n) - 1.0, k);
  };
  double best = dev_pow(origin, path.n0);
  std::int64_t n = path.n0;
  double seg_start = origin;
  for (std::size_t e = 0; e < path.times.size(); ++e) {
    const double s = origin + path.times[e];
    if (s > t) break;
    // right end of the finished segment, then left end of the next one
    best = std::max(best, dev_pow(s, n));
    n = path.levels[e];
    best = std::max(best, dev_pow(s, n));
    seg_start = s;
  }
  (void)seg_start;
  const double end = std::min(t, origin + path.stop_time);
  if (end < t * (1.0 - 1e-12))
    throw std::invalid_argument("sup_deviation: trajectory does not cover [origin, t]");
  best = std::max(best, dev_pow(end, n));
  return best;
}

double decomposition_residual(const MarginalPath& path, const std::vector<double>& grid) {
  if (!(path.time_origin > 0.0))
    throw std::invalid_argument(
        "decomposition_residual: needs a positive time origin so all integrals share a start");
  double worst = 0.0;
  walk(path, checked_sorted(grid), [&](const FunctionalAccumulator& acc) {
    worst = std::max(worst, acc.decomposition_residual());
  });
  return worst;
}

double y_identity_residual(const MarginalPath& path, const std::vector<double>& grid) {
  double worst = 0.0;
  walk(path, checked_sorted(grid), [&](const FunctionalAccumulator& acc) {
    worst = std::max(worst, acc.y_identity_residual());
  });
  return worst;
}

namespace {

// Minimal walker for the streaming campaigns: L_t = int u dM_u and the
// quadratic-variation integral only.
struct LeanWalk {
  const ModelParams& params;
  double s;
  std::int64_t n;
  double l = 0.0;
  double qv = 0.0;
  double max_jump = 0.0;

  LeanWalk(const ModelParams& p, std::int64_t n0, double origin) : params(p), s(origin), n(n0) {}

  void advance(double to) {
    if (to <= s) return;
    const double drift = params.death_rate(n) - params.birth_rate(n);
    l -= drift * (to * to * to - s * s * s) / 6.0;
    qv += params.holding_rate(n) * (std::pow(to, 5.0) - std::pow(s, 5.0)) / 5.0;
    s = to;
  }

  void jump(double at, std::int64_t new_n) {
    advance(at);
    const double dl = 0.5 * at * at;
    l += (new_n < n) ? dl : -dl;
    max_jump = std::max(max_jump, dl);
    n = new_n;
  }

  double xy_gap() const {
    const double x = 0.5 * s * static_cast<double>(n) - 1.0;
    const double y = s > 0.0 ? -l / s : 0.0;
    return std::fabs(x - y);
  }
};

}  // namespace

StreamedPathStats streamed_path_stats(const ModelParams& params, std::int64_t n0, double origin,
                                      double horizon_abs, std::span<const double> qv_targets_abs,
                                      RandomStream& rng) {
  StreamedPathStats out;
  out.qv_at_targets.assign(qv_targets_abs.size(), 0.0);
  LeanWalk walk(params, n0, origin);
  std::size_t next_target = 0;
  out.sup_xy_raw = walk.xy_gap();
  auto take_targets_below = [&](double s_abs) {
    while (next_target < qv_targets_abs.size() && qv_targets_abs[next_target] <= s_abs) {
      walk.advance(qv_targets_abs[next_target]);
      out.qv_at_targets[next_target] = walk.qv;
      ++next_target;
    }
  };
  simulate_marginal_visit(params, n0, MarginalStop{.horizon = horizon_abs - origin}, rng,
                          [&](double t_loc, std::int64_t, std::int64_t new_n) {
                            const double s_abs = origin + t_loc;
                            take_targets_below(s_abs);
                            walk.advance(s_abs);
                            out.sup_xy_raw = std::max(out.sup_xy_raw, walk.xy_gap());
                            walk.jump(s_abs, new_n);
                            out.sup_xy_raw = std::max(out.sup_xy_raw, walk.xy_gap());
                          });
  take_targets_below(horizon_abs);
  walk.advance(horizon_abs);
  out.sup_xy_raw = std::max(out.sup_xy_raw, walk.xy_gap());
  out.max_l_jump = walk.max_jump;
  return out;
}

}  // namespace asg
