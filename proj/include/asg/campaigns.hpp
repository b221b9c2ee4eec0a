#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asg/analytics.hpp"
#include "asg/engine.hpp"
#include "asg/stats.hpp"

namespace asg {

struct RunOptions {
  std::uint64_t seed = 20260801;
  int threads = 0;  // 0 = hardware concurrency
  std::string config_hash;
};

// E[T_{n0}] of the selection chain, used as the absolute time origin when a
// trajectory started at n0 stands in for the process from infinity.
double expected_hitting_time_of(const ModelParams& params, std::int64_t n0);

// Mean single-step hitting time T_{n_from, n_from-1} of the asg coordinate
// against the backward-recursion value, plus the embedded-jump-chain
// up-probability chi-square against p_n = sigma/(n-1+theta+sigma).
McReport step_time_campaign(const ModelParams& params, std::int64_t n_from,
                            std::int64_t replicates, const RunOptions& opts);

McReport jump_chain_campaign(const ModelParams& params, std::int64_t n0,
                             std::int64_t replicates, const RunOptions& opts);

// Pathwise audit of the coupling order (and of event-identity when
// theta = sigma = 0) across full coupled trajectories.
McReport coupling_audit(const ModelParams& params, std::int64_t n0, std::int64_t trajectories,
                        const RunOptions& opts);

// Monte Carlo E[sup_{s<=t} (s N_s/2 - 1)^k] over a decreasing t list.
McReport sup_deviation_campaign(const ModelParams& params, std::vector<double> t_list, int k,
                                std::int64_t n0, std::int64_t replicates, const RunOptions& opts);

// Martingale statistics at the given times: mean M_t, E[M_t^2]/t, and the
// pathwise decomposition residual (exact-anchor form) with its documented
// truncation-bias bound.
McReport martingale_campaign(const ModelParams& params, std::vector<double> t_list,
                             std::int64_t n0, std::int64_t replicates, const RunOptions& opts);

// Mean and variance of the raw count at a small positive time, against the
// 2/t and 2/(3t) small-time Gaussian approximation.
McReport griffiths_campaign(const ModelParams& params, double t_raw, std::int64_t n0,
                            std::int64_t replicates, const RunOptions& opts);

// Deterministic speed-of-coming-down table: nu_t, t*nu_t/2 and the hitting
// time sandwich per t.
McReport cdi_campaign(const ModelParams& params, std::vector<double> t_list,
                      const RunOptions& opts);

struct CltConfig {
  ModelParams params;
  std::vector<double> eps_list = {1e-4, 2.5e-5};  // decreasing
  std::vector<double> t_grid = {0.25, 0.5, 1.0};  // increasing
  std::int64_t replicates_marginal = 10'000;
  std::int64_t replicates_path = 1'000;
  std::int64_t n0 = 10'000;  // floor for the effective truncation level
  // The simulated window starts this fraction of eps*min(t_grid) before the
  // first evaluation time; the effective start level is ~2/(margin eps t_min).
  double truncation_margin = 0.1;
  // 2 runs a common-random-numbers prephase from twice the effective start
  // level (the truncation-sensitivity configuration).
  int prephase_mult = 1;
  // Adds the raw-time mean/variance check at t = 0.01 when theta = sigma = 0.
  bool include_griffiths = true;
};

// The functional-CLT campaign: per-epsilon marginal tests of X_eps(t) against
// Normal(0, t/6) (KS + variance), the empirical covariance against
// (s^t)^3/(6 s t), E[sup|X_eps - Y_eps|] decay across eps_list, the <L_eps>
// compensator against t^3/6, the jump bound, and the t*nu_t/2 analytics
// check. Marginal tests run on eps_list[0]; path statistics on every eps.
McReport clt_campaign(const CltConfig& config, const RunOptions& opts);

}  // namespace asg
