#include "asg/campaigns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>

#include "asg/functionals.hpp"
#include "asg/numeric.hpp"
#include "asg/parallel.hpp"
#include "asg/special.hpp"

namespace asg {

namespace {

// Disjoint stream-index domains so campaigns sharing a master seed never
// reuse a replicate stream.
constexpr std::uint64_t kCltMarginal = 1ull << 32;
constexpr std::uint64_t kCltMarginalAux = 2ull << 32;
constexpr std::uint64_t kCltPath = 3ull << 32;
constexpr std::uint64_t kCltPathAux = 4ull << 32;
constexpr std::uint64_t kStepTime = 5ull << 32;
constexpr std::uint64_t kJumpChain = 6ull << 32;
constexpr std::uint64_t kCoupling = 7ull << 32;
constexpr std::uint64_t kSupDev = 8ull << 32;
constexpr std::uint64_t kMartingale = 9ull << 32;
constexpr std::uint64_t kGriffiths = 10ull << 32;
constexpr std::uint64_t kEpsStride = 1ull << 28;

std::string fmt_t(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

McReport make_report(const RunOptions& opts, std::int64_t replicates) {
  McReport rep;
  rep.config_hash = opts.config_hash;
  rep.master_seed = opts.seed;
  rep.replicates = replicates;
  return rep;
}

// Right-continuous levels at increasing absolute times, streamed off one
// simulation from n_start whose local clock starts at origin_abs.
void levels_at_times(const ModelParams& params, std::int64_t n_start, double origin_abs,
                     std::span<const double> abs_targets, RandomStream& rng,
                     std::span<std::int64_t> out) {
  std::size_t k = 0;
  std::int64_t cur = n_start;
  const double horizon = abs_targets.back() - origin_abs;
  if (horizon < 0.0) throw std::invalid_argument("levels_at_times: target before origin");
  simulate_marginal_visit(params, n_start, MarginalStop{.horizon = horizon},
                          rng, [&](double t_loc, std::int64_t, std::int64_t new_n) {
                            const double s = origin_abs + t_loc;
                            while (k < abs_targets.size() && abs_targets[k] < s) out[k++] = cur;
                            cur = new_n;
                          });
  while (k < abs_targets.size()) out[k++] = cur;
}

// Local time needed to come down from n_hi to n_lo (the prephase of the
// truncation-sensitivity configuration).
double prephase_elapsed(const ModelParams& params, std::int64_t n_hi, std::int64_t n_lo,
                        RandomStream& rng) {
  double elapsed = 0.0;
  simulate_marginal_visit(params, n_hi, MarginalStop{.level = n_lo}, rng,
                          [&](double t, std::int64_t, std::int64_t) { elapsed = t; });
  return elapsed;
}

McRow row(std::string experiment, std::string statistic, double estimate, double se,
          double target, std::string tag, double t = std::numeric_limits<double>::quiet_NaN(),
          double epsilon = std::numeric_limits<double>::quiet_NaN()) {
  McRow r;
  r.experiment = std::move(experiment);
  r.statistic = std::move(statistic);
  r.estimate = estimate;
  r.stderr_of_estimate = se;
  r.target = target;
  r.tag = std::move(tag);
  r.t = t;
  r.epsilon = epsilon;
  return r;
}

}  // namespace

double expected_hitting_time_of(const ModelParams& params, std::int64_t n0) {
  if (params.sigma == 0.0) return kingman_tail_mean(n0, params.theta);
  const std::int64_t n_max = n0 + std::max<std::int64_t>(2000, n0 / 4);
  return tail_hitting_moments(params, n0, 1, n_max).raw[1];
}

McReport step_time_campaign(const ModelParams& params, std::int64_t n_from,
                            std::int64_t replicates, const RunOptions& opts) {
  if (n_from < 2) throw std::invalid_argument("step_time_campaign: n_from must be >= 2");
  std::vector<double> times(static_cast<std::size_t>(replicates));
  for_each_replicate(replicates, opts.threads, [&](std::int64_t r) {
    RandomStream rng = stream_for(opts.seed, kStepTime + static_cast<std::uint64_t>(r));
    double t_hit = 0.0;
    simulate_marginal_visit(params, n_from, MarginalStop{.level = n_from - 1}, rng,
                            [&](double t, std::int64_t, std::int64_t) { t_hit = t; });
    times[static_cast<std::size_t>(r)] = t_hit;
  });
  const Summary s = summarize(times);
  const MomentTable tab = asg_step_moments(params, n_from + 200, 1, n_from);
  McReport rep = make_report(opts, replicates);
  rep.rows.push_back(row("step-time", "mean_T_" + std::to_string(n_from), s.mean, s.se,
                         tab.at(n_from, 1), "derived"));
  return rep;
}

McReport jump_chain_campaign(const ModelParams& params, std::int64_t n0,
                             std::int64_t replicates, const RunOptions& opts) {
  constexpr std::size_t kMaxLevel = 512;
  std::vector<std::atomic<std::int64_t>> ups(kMaxLevel), downs(kMaxLevel);
  for (auto& a : ups) a.store(0);
  for (auto& a : downs) a.store(0);

  for_each_replicate(replicates, opts.threads, [&](std::int64_t r) {
    RandomStream rng = stream_for(opts.seed, kJumpChain + static_cast<std::uint64_t>(r));
    simulate_marginal_visit(params, n0, MarginalStop{.level = 1}, rng,
                            [&](double, std::int64_t old_n, std::int64_t new_n) {
                              const std::size_t lvl = std::min<std::size_t>(
                                  static_cast<std::size_t>(old_n), kMaxLevel - 1);
                              if (new_n > old_n)
                                ups[lvl].fetch_add(1, std::memory_order_relaxed);
                              else
                                downs[lvl].fetch_add(1, std::memory_order_relaxed);
                            });
  });

  std::vector<BinomialCell> cells;
  McReport rep = make_report(opts, replicates);
  for (std::size_t lvl = 2; lvl + 1 < kMaxLevel; ++lvl) {
    const std::int64_t u = ups[lvl].load();
    const std::int64_t d = downs[lvl].load();
    if (u + d == 0) continue;
    const double p = params.up_probability(static_cast<std::int64_t>(lvl));
    cells.push_back(BinomialCell{u + d, u, p});
    if (u + d >= 1000)
      rep.rows.push_back(row("jump-chain", "up_freq_level_" + std::to_string(lvl),
                             static_cast<double>(u) / static_cast<double>(u + d),
                             std::sqrt(p * (1 - p) / static_cast<double>(u + d)), p, "paper"));
  }
  const ChiSquareResult chi = binomial_chi_square(cells);
  McRow chi_row = row("jump-chain", "up_prob_chi_square", chi.statistic,
                      std::numeric_limits<double>::quiet_NaN(), static_cast<double>(chi.df),
                      "paper");
  chi_row.p_value = chi.p_value;
  rep.rows.push_back(chi_row);
  return rep;
}

McReport coupling_audit(const ModelParams& params, std::int64_t n0, std::int64_t trajectories,
                        const RunOptions& opts) {
  std::atomic<std::int64_t> order_violations{0};
  std::atomic<std::int64_t> identity_violations{0};
  std::atomic<std::int64_t> time_violations{0};
  std::atomic<std::int64_t> events_checked{0};
  const bool degenerate = params.theta == 0.0 && params.sigma == 0.0;

  for_each_replicate(trajectories, opts.threads, [&](std::int64_t r) {
    RandomStream rng = stream_for(opts.seed, kCoupling + static_cast<std::uint64_t>(r));
    CoupledTrajectory traj =
        simulate_coupled(params, n0, StopCondition{.level = 1}, rng);
    std::int64_t bad_order = 0, bad_ident = 0, bad_time = 0;
    double prev_t = 0.0;
    for (const EventRecord& e : traj.events) {
      if (!e.counts.ordered()) ++bad_order;
      if (degenerate &&
          !(e.counts.kingman == e.counts.kingman_mutation && e.counts.kingman == e.counts.asg))
        ++bad_ident;
      if (!(e.time > prev_t)) ++bad_time;
      prev_t = e.time;
    }
    order_violations.fetch_add(bad_order, std::memory_order_relaxed);
    identity_violations.fetch_add(bad_ident, std::memory_order_relaxed);
    time_violations.fetch_add(bad_time, std::memory_order_relaxed);
    events_checked.fetch_add(static_cast<std::int64_t>(traj.events.size()),
                             std::memory_order_relaxed);
  });

  McReport rep = make_report(opts, trajectories);
  rep.rows.push_back(row("coupling-check", "order_violations",
                         static_cast<double>(order_violations.load()), 0.0, 0.0, "trivial"));
  if (degenerate)
    rep.rows.push_back(row("coupling-check", "identity_violations",
                           static_cast<double>(identity_violations.load()), 0.0, 0.0, "trivial"));
  rep.rows.push_back(row("coupling-check", "time_order_violations",
                         static_cast<double>(time_violations.load()), 0.0, 0.0, "trivial"));
  rep.rows.push_back(row("coupling-check", "events_checked",
                         static_cast<double>(events_checked.load()),
                         std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN(), "n/a"));
  return rep;
}

McReport sup_deviation_campaign(const ModelParams& params, std::vector<double> t_list, int k,
                                std::int64_t n0, std::int64_t replicates,
                                const RunOptions& opts) {
  if (t_list.empty() || k < 1 || k > 6)
    throw std::invalid_argument("sup_deviation_campaign: need times and 1 <= k <= 6");
  std::sort(t_list.begin(), t_list.end(), std::greater<>());  // presented largest first
  const double t_max = t_list.front();
  const double origin = expected_hitting_time_of(params, n0);
  if (t_max <= origin * 4.0)
    throw std::invalid_argument("sup_deviation_campaign: t too small for this n0");

  std::vector<std::vector<double>> sups(
      t_list.size(), std::vector<double>(static_cast<std::size_t>(replicates)));
  for_each_replicate(replicates, opts.threads, [&](std::int64_t r) {
    RandomStream rng = stream_for(opts.seed, kSupDev + static_cast<std::uint64_t>(r));
    MarginalPath path =
        simulate_marginal(params, n0, MarginalStop{.horizon = t_max - origin}, rng);
    path.time_origin = origin;
    for (std::size_t i = 0; i < t_list.size(); ++i)
      sups[i][static_cast<std::size_t>(r)] = sup_deviation(path, t_list[i], k);
  });

  McReport rep = make_report(opts, replicates);
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    const Summary s = summarize(sups[i]);
    rep.rows.push_back(row("supdev", "sup_dev_pow" + std::to_string(k), s.mean, s.se, 0.0,
                           "paper", t_list[i]));
  }
  return rep;
}

McReport martingale_campaign(const ModelParams& params, std::vector<double> t_list,
                             std::int64_t n0, std::int64_t replicates, const RunOptions& opts) {
  if (t_list.empty()) throw std::invalid_argument("martingale_campaign: empty time list");
  std::sort(t_list.begin(), t_list.end());
  const double t_max = t_list.back();
  const double origin = expected_hitting_time_of(params, n0);
  if (t_list.front() <= origin * 4.0)
    throw std::invalid_argument("martingale_campaign: t too small for this n0");

  std::vector<std::vector<double>> m_vals(
      t_list.size(), std::vector<double>(static_cast<std::size_t>(replicates)));
  std::vector<double> residuals(static_cast<std::size_t>(replicates));
  for_each_replicate(replicates, opts.threads, [&](std::int64_t r) {
    RandomStream rng = stream_for(opts.seed, kMartingale + static_cast<std::uint64_t>(r));
    MarginalPath path =
        simulate_marginal(params, n0, MarginalStop{.horizon = t_max - origin}, rng);
    path.time_origin = origin;
    PathFunctional m = martingale_path(path, t_list);
    for (std::size_t i = 0; i < t_list.size(); ++i)
      m_vals[i][static_cast<std::size_t>(r)] = m.values[i];
    residuals[static_cast<std::size_t>(r)] = decomposition_residual(path, t_list);
  });

  McReport rep = make_report(opts, replicates);
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    const Summary s = summarize(m_vals[i]);
    rep.rows.push_back(row("martingale", "mean_M", s.mean, s.se, 0.0, "paper", t_list[i]));
    std::vector<double> m2(m_vals[i].size());
    for (std::size_t j = 0; j < m2.size(); ++j) m2[j] = m_vals[i][j] * m_vals[i][j] / t_list[i];
    const Summary s2 = summarize(m2);
    rep.rows.push_back(row("martingale", "m2_over_t", s2.mean, s2.se,
                           std::numeric_limits<double>::quiet_NaN(), "paper", t_list[i]));
  }
  const double worst_residual = *std::max_element(residuals.begin(), residuals.end());
  rep.rows.push_back(row("martingale", "decomp_residual_max", worst_residual,
                         std::numeric_limits<double>::quiet_NaN(), 0.0, "paper"));
  rep.rows.push_back(row("martingale", "decomp_bias_bound",
                         std::fabs(0.5 * origin * static_cast<double>(n0) - 1.0),
                         std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN(), "derived"));
  return rep;
}

McReport griffiths_campaign(const ModelParams& params, double t_raw, std::int64_t n0,
                            std::int64_t replicates, const RunOptions& opts) {
  const double origin = expected_hitting_time_of(params, n0);
  if (t_raw <= origin * 4.0)
    throw std::invalid_argument("griffiths_campaign: t too small for this n0");
  std::vector<double> counts(static_cast<std::size_t>(replicates));
  const std::array<double, 1> targets = {t_raw};
  for_each_replicate(replicates, opts.threads, [&](std::int64_t r) {
    RandomStream rng = stream_for(opts.seed, kGriffiths + static_cast<std::uint64_t>(r));
    std::array<std::int64_t, 1> out{};
    levels_at_times(params, n0, origin, targets, rng, out);
    counts[static_cast<std::size_t>(r)] = static_cast<double>(out[0]);
  });
  const Summary s = summarize(counts);
  McReport rep = make_report(opts, replicates);
  rep.rows.push_back(row("griffiths", "mean_N", s.mean, s.se, 2.0 / t_raw, "paper", t_raw));
  const double var_se = s.variance * std::sqrt(2.0 / static_cast<double>(replicates - 1));
  rep.rows.push_back(
      row("griffiths", "var_N", s.variance, var_se, 2.0 / (3.0 * t_raw), "paper", t_raw));
  return rep;
}

McReport cdi_campaign(const ModelParams& params, std::vector<double> t_list,
                      const RunOptions& opts) {
  McReport rep = make_report(opts, 0);
  constexpr double kTie = 1e-10;
  for (double t : t_list) {
    const NuResult nu = nu_speed(params, t);
    const double nu_d = static_cast<double>(nu.nu);
    rep.rows.push_back(row("cdi", "nu", nu_d, std::numeric_limits<double>::quiet_NaN(),
                           2.0 / t, "derived", t));
    rep.rows.push_back(row("cdi", "t_nu_half", 0.5 * t * nu_d,
                           std::numeric_limits<double>::quiet_NaN(), 1.0, "paper", t));
    const bool sandwich = nu.expected_hit_at_nu <= t * (1.0 + kTie) &&
                          (nu.nu == 0 || t < nu.expected_hit_above * (1.0 + kTie));
    rep.rows.push_back(row("cdi", "sandwich_ok", sandwich ? 1.0 : 0.0,
                           std::numeric_limits<double>::quiet_NaN(), 1.0, "paper", t));
    const double bound = nu.nu > 1 ? 1.0 / (nu_d - 1.0) + 0.01 : 1.0;
    rep.rows.push_back(row("cdi", "abs_t_nu_half_minus_1", std::fabs(0.5 * t * nu_d - 1.0),
                           std::numeric_limits<double>::quiet_NaN(), bound, "paper", t));
  }
  return rep;
}

namespace {

struct PathPhaseResult {
  double sup_xy = 0.0;                 // already scaled by eps^{-1/2}
  std::vector<double> l_eps;           // per grid t
  double max_jump_ratio = 0.0;         // max |jump of L_eps| / theoretical bound
};

struct CltContext {
  const CltConfig& cfg;
  std::int64_t n0_eff = 0;
  double origin_fixed = 0.0;  // E[T_{n0_eff}]
  double origin_top = 0.0;    // E[T_{2 n0_eff}] when prephase_mult == 2
};

// Per-replicate start state: level n0_eff at the given absolute origin.
double replicate_origin(const CltContext& ctx, const ModelParams& params, std::uint64_t seed,
                        std::uint64_t aux_index) {
  if (ctx.cfg.prephase_mult <= 1) return ctx.origin_fixed;
  RandomStream aux = stream_for(seed, aux_index);
  return ctx.origin_top + prephase_elapsed(params, 2 * ctx.n0_eff, ctx.n0_eff, aux);
}

PathPhaseResult run_path_replicate(const CltContext& ctx, const ModelParams& params,
                                   double eps, double origin, RandomStream& rng) {
  const auto& grid = ctx.cfg.t_grid;
  const double horizon_abs = eps * grid.back();
  std::vector<double> targets_abs(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) targets_abs[j] = eps * grid[j];

  const StreamedPathStats stats =
      streamed_path_stats(params, ctx.n0_eff, origin, horizon_abs, targets_abs, rng);

  PathPhaseResult out;
  out.sup_xy = stats.sup_xy_raw / std::sqrt(eps);
  out.l_eps.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    out.l_eps[j] = stats.qv_at_targets[j] / (4.0 * eps * eps * eps);
  const double jump_bound = 0.5 * horizon_abs * horizon_abs / (eps * std::sqrt(eps));
  out.max_jump_ratio = (stats.max_l_jump / (eps * std::sqrt(eps))) / jump_bound;
  return out;
}

double covariance_se(std::span<const double> xs, std::span<const double> ys, double cov) {
  const Summary sx = summarize(xs);
  const Summary sy = summarize(ys);
  CompensatedSum m22;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double a = xs[i] - sx.mean;
    const double b = ys[i] - sy.mean;
    m22.add(a * a * b * b);
  }
  const double n = static_cast<double>(xs.size());
  return std::sqrt(std::max(0.0, m22.total() / n - cov * cov) / n);
}

}  // namespace

McReport clt_campaign(const CltConfig& config, const RunOptions& opts) {
  const ModelParams& params = config.params;
  params.validate();
  if (config.eps_list.empty() || config.t_grid.empty())
    throw std::invalid_argument("clt_campaign: empty epsilon list or time grid");
  if (!std::is_sorted(config.t_grid.begin(), config.t_grid.end()))
    throw std::invalid_argument("clt_campaign: t_grid must be increasing");
  if (!std::is_sorted(config.eps_list.begin(), config.eps_list.end(), std::greater<>()))
    throw std::invalid_argument("clt_campaign: eps_list must be decreasing");
  if (config.replicates_marginal < 100)
    throw std::invalid_argument("clt_campaign: too few replicates for the requested tests");

  McReport rep = make_report(opts, config.replicates_marginal);
  const double t_min = config.t_grid.front();
  const double t_max = config.t_grid.back();

  auto make_context = [&](double eps) {
    CltContext ctx{config};
    const double window_start = config.truncation_margin * eps * t_min;
    ctx.n0_eff = std::max(config.n0, static_cast<std::int64_t>(std::ceil(2.0 / window_start)));
    ctx.origin_fixed = expected_hitting_time_of(params, ctx.n0_eff);
    if (config.prephase_mult > 1)
      ctx.origin_top = expected_hitting_time_of(params, 2 * ctx.n0_eff);
    return ctx;
  };

  // ---- marginal phase: finite-dimensional tests on eps_list[0]
  {
    const double eps = config.eps_list.front();
    const CltContext ctx = make_context(eps);
    const std::size_t nt = config.t_grid.size();
    std::vector<double> abs_targets(nt);
    for (std::size_t j = 0; j < nt; ++j) abs_targets[j] = eps * config.t_grid[j];

    const std::int64_t reps = config.replicates_marginal;
    std::vector<std::vector<double>> xs(nt, std::vector<double>(static_cast<std::size_t>(reps)));
    const double scale = 1.0 / std::sqrt(eps);
    for_each_replicate(reps, opts.threads, [&](std::int64_t r) {
      const double origin = replicate_origin(ctx, params, opts.seed,
                                             kCltMarginalAux + static_cast<std::uint64_t>(r));
      RandomStream rng = stream_for(opts.seed, kCltMarginal + static_cast<std::uint64_t>(r));
      std::vector<std::int64_t> levels(nt);
      levels_at_times(params, ctx.n0_eff, origin, abs_targets, rng, levels);
      for (std::size_t j = 0; j < nt; ++j)
        xs[j][static_cast<std::size_t>(r)] =
            scale * (0.5 * abs_targets[j] * static_cast<double>(levels[j]) - 1.0);
    });

    for (std::size_t j = 0; j < nt; ++j) {
      const double t = config.t_grid[j];
      const Summary s = summarize(xs[j]);
      rep.rows.push_back(row("clt", "mean_X", s.mean, s.se, 0.0, "derived", t, eps));
      const double var_se = s.variance * std::sqrt(2.0 / static_cast<double>(reps - 1));
      rep.rows.push_back(row("clt", "var_X", s.variance, var_se, t / 6.0, "derived", t, eps));
      const double sd = std::sqrt(t / 6.0);
      KsResult ks = ks_one_sample(xs[j], [sd](double x) { return normal_cdf(x / sd); });
      McRow ks_row = row("clt", "ks_d", ks.statistic, std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN(), "derived", t, eps);
      ks_row.p_value = ks.p_value;
      rep.rows.push_back(ks_row);
    }
    for (std::size_t i = 0; i < nt; ++i) {
      for (std::size_t j = i + 1; j < nt; ++j) {
        const double ti = config.t_grid[i];
        const double tj = config.t_grid[j];
        const double cov = sample_covariance(xs[i], xs[j]);
        const double target = ti * ti * ti / (6.0 * ti * tj);  // (ti ^ tj)^3 / (6 ti tj)
        rep.rows.push_back(row("clt", "cov[" + fmt_t(ti) + "," + fmt_t(tj) + "]", cov,
                               covariance_se(xs[i], xs[j], cov), target, "derived", tj, eps));
      }
    }
    rep.rows.push_back(row("clt", "n0_effective", static_cast<double>(ctx.n0_eff),
                           std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::quiet_NaN(), "n/a",
                           std::numeric_limits<double>::quiet_NaN(), eps));
  }

  // ---- path phase: sup |X_eps - Y_eps|, <L_eps>, jump bound, per eps
  std::vector<double> sup_means, sup_ses;
  for (std::size_t e = 0; e < config.eps_list.size(); ++e) {
    const double eps = config.eps_list[e];
    const CltContext ctx = make_context(eps);
    const std::int64_t reps = config.replicates_path;
    std::vector<double> sups(static_cast<std::size_t>(reps));
    std::vector<std::vector<double>> l_eps(config.t_grid.size(),
                                           std::vector<double>(static_cast<std::size_t>(reps)));
    std::vector<double> jump_ratios(static_cast<std::size_t>(reps));
    for_each_replicate(reps, opts.threads, [&](std::int64_t r) {
      const std::uint64_t stripe = kEpsStride * static_cast<std::uint64_t>(e);
      const double origin = replicate_origin(
          ctx, params, opts.seed, kCltPathAux + stripe + static_cast<std::uint64_t>(r));
      RandomStream rng =
          stream_for(opts.seed, kCltPath + stripe + static_cast<std::uint64_t>(r));
      PathPhaseResult res = run_path_replicate(ctx, params, eps, origin, rng);
      sups[static_cast<std::size_t>(r)] = res.sup_xy;
      for (std::size_t j = 0; j < config.t_grid.size(); ++j)
        l_eps[j][static_cast<std::size_t>(r)] = res.l_eps[j];
      jump_ratios[static_cast<std::size_t>(r)] = res.max_jump_ratio;
    });
    const Summary ssup = summarize(sups);
    sup_means.push_back(ssup.mean);
    sup_ses.push_back(ssup.se);
    rep.rows.push_back(row("clt", "sup_xy", ssup.mean, ssup.se,
                           std::numeric_limits<double>::quiet_NaN(), "paper", t_max, eps));
    for (std::size_t j = 0; j < config.t_grid.size(); ++j) {
      const double t = config.t_grid[j];
      const Summary sl = summarize(l_eps[j]);
      rep.rows.push_back(
          row("clt", "l_eps_compensator", sl.mean, sl.se, t * t * t / 6.0, "paper", t, eps));
    }
    rep.rows.push_back(row("clt", "max_l_jump_ratio",
                           *std::max_element(jump_ratios.begin(), jump_ratios.end()),
                           std::numeric_limits<double>::quiet_NaN(), 1.0, "paper", t_max, eps));
  }
  for (std::size_t e = 0; e + 1 < config.eps_list.size(); ++e) {
    const double ratio = sup_means[e] / sup_means[e + 1];
    const double rel = std::sqrt(sup_ses[e] * sup_ses[e] / (sup_means[e] * sup_means[e]) +
                                 sup_ses[e + 1] * sup_ses[e + 1] /
                                     (sup_means[e + 1] * sup_means[e + 1]));
    rep.rows.push_back(row("clt", "sup_xy_ratio", ratio, std::fabs(ratio) * rel,
                           std::sqrt(config.eps_list[e] / config.eps_list[e + 1]), "paper",
                           t_max, config.eps_list[e]));
  }

  // ---- speed-of-coming-down check at the raw evaluation times
  {
    const double eps = config.eps_list.front();
    for (double t : config.t_grid) {
      const double s = eps * t;
      const NuResult nu = nu_speed(params, s);
      rep.rows.push_back(row("clt", "s_nu_half", 0.5 * s * static_cast<double>(nu.nu),
                             std::numeric_limits<double>::quiet_NaN(), 1.0, "paper", t, eps));
    }
  }

  if (config.include_griffiths && params.theta == 0.0 && params.sigma == 0.0) {
    McReport g = griffiths_campaign(params, 0.01, config.n0, config.replicates_marginal, opts);
    rep.append(std::move(g));
  }
  return rep;
}

}  // namespace asg
