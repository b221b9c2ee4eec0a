#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "asg/model.hpp"

namespace asg {

enum class MomentMethod { closed_form_kingman, backward_recursion, linear_solve_oracle, monte_carlo };

std::string to_string(MomentMethod m);

// Top-of-range policy for the backward recursions. Numerically both
// initialize level n_max with the no-birth step moments k! (2/(n(n-1+theta)))^k;
// 'reflecting' marks tables that are exact for the chain truncated at n_max
// (births disabled there), 'kingman_closed_form' marks tables approximating
// the untruncated chain, with the boundary sensitivity reported.
enum class BoundaryPolicy { kingman_closed_form, reflecting };

// Grid of per-level moments: hitting-time moments a(n,k) or excursion-count
// moments E[H_n^k], with k = 1..k_max and n in [n_min, n_max].
struct MomentTable {
  ModelParams params;
  std::int64_t n_min = 1;
  std::int64_t n_max = 0;
  int k_max = 0;
  MomentMethod method = MomentMethod::backward_recursion;
  BoundaryPolicy boundary = BoundaryPolicy::kingman_closed_form;
  double truncation_error = 0.0;  // max relative boundary sensitivity
  std::vector<double> values;     // (n - n_min) * k_max + (k - 1)

  double at(std::int64_t n, int k) const;
  double& at(std::int64_t n, int k);

  // Columns: n, k, value, method, truncation_error.
  void write_csv(std::ostream& os) const;
};

// k-th moment of the single-step hitting time of the Kingman coalescent with
// mutation: k! 2^k / (n(n-1+theta))^k. Throws when n(n-1+theta) = 0 (the
// level is absorbing, no transition exists).
double kingman_step_moment(std::int64_t n, int k, double theta);

// Moments a(n,k) = E[(T_{n,n-1})^k] of the selection chain's single-step
// hitting times, solved backward in n and forward in k from the first-step
// recursion. Boundary row at n_max per the policy above.
MomentTable asg_step_moments(const ModelParams& params, std::int64_t n_max, int k_max,
                             std::int64_t n_min = 1,
                             BoundaryPolicy boundary = BoundaryPolicy::kingman_closed_form);

// Lean k = 1 column of the above: means[n] = a(n,1) for n in [n_min, n_max].
std::vector<double> asg_step_means(const ModelParams& params, std::int64_t n_max,
                                   std::int64_t n_min = 1);

// Raw moments of sum_{i=lo..hi} T_{i,i-1} (independent by the strong Markov
// property); steps must cover [lo, hi]. Returns moments[0..k_max].
std::vector<double> compose_step_moments(const MomentTable& steps, std::int64_t lo,
                                         std::int64_t hi, int k_max);

struct TailMoments {
  std::vector<double> raw;         // raw[k] = E[(T_n)^k], k = 0..k_max
  std::vector<double> tail_error;  // reported tail-bound error per k
  std::int64_t n_max_used = 0;
};

// Moments of the hitting time of level n from the truncated start, with the
// beyond-n_max remainder estimated by closed-form/integral comparison and
// reported as an explicit error bar.
TailMoments tail_hitting_moments(const ModelParams& params, std::int64_t n, int k_max,
                                 std::int64_t n_max);

// Exact mean of the Kingman-with-mutation tail sum_{i>n} 2/(i(i-1+theta)).
double kingman_tail_mean(std::int64_t n, double theta);

// Independent verification oracle: dense linear solve of the absorption-time
// moment systems m_k = k (-Q)^{-1} m_{k-1} on transient levels {m..n_max},
// absorbing at m-1, births disabled at n_max. at(n,k) = E[(T_{n -> m-1})^k].
MomentTable absorption_moment_oracle(std::int64_t m, std::int64_t n_max,
                                     const ModelParams& params, int k_max);

// Moments of H_n, the number of upward jumps between the first visits to n
// and n-1, from the Laplace-transform recursion evaluated at 0. Zero table
// when sigma = 0.
MomentTable h_moments(const ModelParams& params, std::int64_t n_max, int k_max);

struct NuResult {
  std::int64_t nu = 0;
  double expected_hit_at_nu = 0.0;     // E[T_nu]
  double expected_hit_above = 0.0;     // E[T_{nu-1}]; +inf when unreachable
  std::int64_t n_max_used = 0;
  double tail_error = 0.0;
};

// Speed of coming down from infinity: smallest n >= 0 with E[T_n] <= t.
// Ties at floating-point equality resolve toward "reached" (relative slack
// 1e-10). n_max = 0 sizes the truncation automatically.
NuResult nu_speed(const ModelParams& params, double t, std::int64_t n_max = 0);

}  // namespace asg
