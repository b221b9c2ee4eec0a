#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asg/engine.hpp"
#include "asg/numeric.hpp"

namespace asg {

// Running exact integrals of a piecewise-constant level path on the absolute
// time axis (local time + origin). Between jumps every integrand below is a
// polynomial or 1/s in s, so all accumulation is closed-form piecewise; no
// quadrature grids anywhere.
class FunctionalAccumulator {
 public:
  FunctionalAccumulator(const ModelParams& params, std::int64_t n0, double origin);

  // Integrate the current segment forward to absolute time s.
  void advance_to(double s);
  // advance_to(s), then apply a jump to new_level at s.
  void apply_jump(double s, std::int64_t new_level);

  double time() const { return s_; }
  std::int64_t level() const { return n_; }
  double origin() const { return origin_; }

  // t N_t / 2 - 1 at the current time.
  double x() const { return 0.5 * s_ * static_cast<double>(n_) - 1.0; }
  // Compensated jump integral M_t (zero at the origin).
  double martingale() const;
  // Y_t = -(1/t) int_origin^t u dM_u.
  double y() const;
  // R_t = -int (sN/2-1)^2/s ds + ((1-theta+sigma)/4) int s N ds.
  double residual() const;
  // int (sN/2 - 1)/s ds from the origin.
  double x_over_s_integral() const { return i_x_over_s_.total(); }
  // int Y_s / s ds from the origin (piecewise closed form).
  double y_over_s_integral() const { return i_y_over_s_.total(); }
  // int s^4 N(N-1+theta+sigma)/2 ds from the origin.
  double qv_integral() const { return i_qv_.total(); }
  // Anchor value of the decomposition identity, origin * n0 / 2 - 1 + ... is
  // handled by callers; this returns origin * n0 / 2.
  double anchor() const { return 0.5 * origin_ * static_cast<double>(n0_); }
  // |t N_t/2 - anchor + int (sN/2-1)/s ds + M_t - R_t|, exact pathwise zero
  // up to rounding.
  double decomposition_residual() const;
  // |Y_t + int Y/s ds + M_t|, exact pathwise zero up to rounding.
  double y_identity_residual() const;
  // largest |jump of int u dM| seen so far (s^2/2 at jump times)
  double max_l_jump() const { return max_l_jump_; }

 private:
  ModelParams params_;
  std::int64_t n0_ = 0;
  double origin_ = 0.0;
  double s_ = 0.0;
  std::int64_t n_ = 0;

  CompensatedSum down_s_, up_s_;          // sums of jump times
  CompensatedSum i_drift_s_;              // int s (mu - lambda)(N) ds
  CompensatedSum l_;                      // int u dM_u (jumps + drift)
  CompensatedSum i_x_over_s_, i_x2_over_s_, i_n_s_, i_qv_, i_y_over_s_;
  double max_l_jump_ = 0.0;
};

enum class FunctionalKind : int {
  x_eps,
  martingale,
  residual,
  y,
  y_eps,
  l_eps_compensator,
  sup_deviation,
};

// Time-sampled derived process. For rescaled kinds (x_eps, y_eps,
// l_eps_compensator) the grid holds rescaled times t and the path is read at
// absolute time epsilon * t; for raw kinds the grid holds absolute times.
struct PathFunctional {
  FunctionalKind kind = FunctionalKind::x_eps;
  double epsilon = 0.0;
  std::vector<double> grid;
  std::vector<double> values;
  std::uint64_t source_id = 0;
};

// X_eps(t) = eps^{-1/2} (eps t / 2 * N_{eps t} - 1); value at t = 0 is 0 by
// definition. Grid points outside the covered absolute window throw.
PathFunctional x_eps_path(const MarginalPath& path, double epsilon, std::vector<double> grid);

PathFunctional martingale_path(const MarginalPath& path, std::vector<double> grid);

PathFunctional residual_path(const MarginalPath& path, std::vector<double> grid);

struct YPair {
  PathFunctional y;      // Y at absolute times eps * t
  PathFunctional y_eps;  // eps^{-1/2} Y_{eps t} on the rescaled grid
};
YPair y_paths(const MarginalPath& path, double epsilon, std::vector<double> grid);

// <L_eps>_t = (1/(4 eps^3)) int_0^{eps t} s^4 N_s (N_s - 1 + theta + sigma)/2 ds.
double l_eps_compensator(const MarginalPath& path, double epsilon, double t);

// Largest jump of L_eps on [0, T] (rescaled T); bounded by eps^{-3/2}(eps T)^2/2.
double max_l_eps_jump(const MarginalPath& path, double epsilon, double T);

// sup over s in [origin, t] of (s N_s / 2 - 1)^k, evaluated exactly at both
// endpoints of every constant segment (and at t).
double sup_deviation(const MarginalPath& path, double t, int k);

// max over the grid of the pathwise decomposition residual (exact-anchor
// form); grid in absolute time.
double decomposition_residual(const MarginalPath& path, const std::vector<double>& grid);

// max over the grid of |Y_t + int Y/s + M_t|; grid in absolute time.
double y_identity_residual(const MarginalPath& path, const std::vector<double>& grid);

// One-pass statistics for large campaigns, streamed off a marginal
// simulation without materializing the path: raw sup over segment endpoints
// of |X_s - Y_s| on [origin, horizon], the quadratic-variation integral at
// increasing absolute targets, and the largest jump of int u dM. Agrees with
// FunctionalAccumulator replay (cross-checked in the tests).
struct StreamedPathStats {
  double sup_xy_raw = 0.0;
  std::vector<double> qv_at_targets;
  double max_l_jump = 0.0;
};

StreamedPathStats streamed_path_stats(const ModelParams& params, std::int64_t n0, double origin,
                                      double horizon_abs, std::span<const double> qv_targets_abs,
                                      RandomStream& rng);

}  // namespace asg
