#include "asg/analytics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "asg/numeric.hpp"
#include "asg/special.hpp"

namespace asg {

std::string to_string(MomentMethod m) {
  switch (m) {
    case MomentMethod::closed_form_kingman: return "closed-form-kingman";
    case MomentMethod::backward_recursion: return "backward-recursion";
    case MomentMethod::linear_solve_oracle: return "linear-solve-oracle";
    case MomentMethod::monte_carlo: return "monte-carlo";
  }
  return "?";
}

double MomentTable::at(std::int64_t n, int k) const {
  if (n < n_min || n > n_max || k < 1 || k > k_max)
    throw std::out_of_range("MomentTable::at: index outside stored range");
  return values[static_cast<std::size_t>(n - n_min) * k_max + static_cast<std::size_t>(k - 1)];
}

double& MomentTable::at(std::int64_t n, int k) {
  if (n < n_min || n > n_max || k < 1 || k > k_max)
    throw std::out_of_range("MomentTable::at: index outside stored range");
  return values[static_cast<std::size_t>(n - n_min) * k_max + static_cast<std::size_t>(k - 1)];
}

void MomentTable::write_csv(std::ostream& os) const {
  os << "n,k,value,method,truncation_error\n";
  char buf[64];
  for (std::int64_t n = n_min; n <= n_max; ++n) {
    for (int k = 1; k <= k_max; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", at(n, k));
      os << n << ',' << k << ',' << buf << ',' << to_string(method) << ',';
      std::snprintf(buf, sizeof buf, "%.3g", truncation_error);
      os << buf << '\n';
    }
  }
}

double kingman_step_moment(std::int64_t n, int k, double theta) {
  if (n < 1 || k < 1) throw std::invalid_argument("kingman_step_moment: need n >= 1, k >= 1");
  const double rate = 0.5 * static_cast<double>(n) * (static_cast<double>(n) - 1.0 + theta);
  if (rate <= 0.0)
    throw std::invalid_argument("kingman_step_moment: absorbing level, no transition exists");
  double m = 1.0;
  for (int j = 1; j <= k; ++j) m *= static_cast<double>(j) / rate;
  return m;
}

namespace {

// One backward sweep of the first-step moment identity
//   a(n,k) (1 - p_n) = E[xi_n^k]
//                      + p_n sum_{j=1}^{k} C(k,j) E[xi_n^{k-j}] S_j(n)
// with S_j(n) = sum_{i=0}^{j} C(j,i) a(n+1,i) a(n,j-i), the (j=k, i=0) term
// moved to the left-hand side.
MomentTable step_moments_raw(const ModelParams& params, std::int64_t n_max, int k_max,
                             std::int64_t n_min, BoundaryPolicy boundary) {
  params.validate();
  if (k_max < 1) throw std::invalid_argument("asg_step_moments: k_max must be >= 1");
  if (n_min < 1 || (params.theta == 0.0 && n_min < 2))
    throw std::invalid_argument("asg_step_moments: lowest level has no downward transition");
  if (n_max < n_min + 10) throw std::invalid_argument("asg_step_moments: n_max must be >= n_min + 10");

  MomentTable tab;
  tab.params = params;
  tab.n_min = n_min;
  tab.n_max = n_max;
  tab.k_max = k_max;
  tab.method = MomentMethod::backward_recursion;
  tab.boundary = boundary;
  tab.values.assign(static_cast<std::size_t>(n_max - n_min + 1) * k_max, 0.0);

  const auto binom = pascal_triangle(k_max);
  for (int k = 1; k <= k_max; ++k) tab.at(n_max, k) = kingman_step_moment(n_max, k, params.theta);

  std::vector<double> xi(static_cast<std::size_t>(k_max) + 1);  // E[xi_n^m]
  auto a = [&](std::int64_t n, int k) -> double { return k == 0 ? 1.0 : tab.at(n, k); };

  for (std::int64_t n = n_max - 1; n >= n_min; --n) {
    const double rate = params.holding_rate(n);
    const double p = params.up_probability(n);
    if (p >= 1.0) throw std::invalid_argument("asg_step_moments: up-probability 1, level is a trap");
    xi[0] = 1.0;
    for (int m = 1; m <= k_max; ++m) xi[m] = xi[m - 1] * static_cast<double>(m) / rate;
    for (int k = 1; k <= k_max; ++k) {
      double cross = 0.0;
      if (p > 0.0) {
        for (int j = 1; j <= k; ++j) {
          double inner = 0.0;
          for (int i = 0; i <= j; ++i) {
            if (j == k && i == 0) continue;  // the unknown a(n,k) term
            inner += binom[j][i] * a(n + 1, i) * a(n, j - i);
          }
          cross += binom[k][j] * xi[k - j] * inner;
        }
      }
      tab.at(n, k) = (xi[k] + p * cross) / (1.0 - p);
    }
  }
  return tab;
}

}  // namespace

MomentTable asg_step_moments(const ModelParams& params, std::int64_t n_max, int k_max,
                             std::int64_t n_min, BoundaryPolicy boundary) {
  MomentTable tab = step_moments_raw(params, n_max, k_max, n_min, boundary);
  if (boundary == BoundaryPolicy::kingman_closed_form && params.sigma > 0.0) {
    // boundary sensitivity: rerun with half the range and compare safely
    // below the smaller boundary
    const std::int64_t half = n_max / 2;
    if (half >= n_min + 10) {
      MomentTable probe = step_moments_raw(params, half, k_max, n_min, boundary);
      const std::int64_t hi = std::max(n_min, half - 5);
      double worst = 0.0;
      for (std::int64_t n = n_min; n <= hi; ++n)
        for (int k = 1; k <= k_max; ++k) {
          const double v = tab.at(n, k);
          if (v > 0.0) worst = std::max(worst, std::fabs(probe.at(n, k) - v) / v);
        }
      tab.truncation_error = worst;
    }
  }
  return tab;
}

std::vector<double> asg_step_means(const ModelParams& params, std::int64_t n_max,
                                   std::int64_t n_min) {
  params.validate();
  if (n_min < 1 || (params.theta == 0.0 && n_min < 2))
    throw std::invalid_argument("asg_step_means: lowest level has no downward transition");
  std::vector<double> means(static_cast<std::size_t>(n_max - n_min + 1), 0.0);
  auto idx = [&](std::int64_t n) { return static_cast<std::size_t>(n - n_min); };
  means[idx(n_max)] = kingman_step_moment(n_max, 1, params.theta);
  for (std::int64_t n = n_max - 1; n >= n_min; --n) {
    const double p = params.up_probability(n);
    means[idx(n)] = (1.0 / params.holding_rate(n) + p * means[idx(n + 1)]) / (1.0 - p);
  }
  return means;
}

std::vector<double> compose_step_moments(const MomentTable& steps, std::int64_t lo,
                                         std::int64_t hi, int k_max) {
  if (lo < steps.n_min || hi > steps.n_max || k_max > steps.k_max)
    throw std::invalid_argument("compose_step_moments: range not covered by the table");
  const auto binom = pascal_triangle(k_max);
  std::vector<double> m(static_cast<std::size_t>(k_max) + 1, 0.0);
  m[0] = 1.0;
  std::vector<double> next(m.size());
  for (std::int64_t i = lo; i <= hi; ++i) {
    for (int k = 0; k <= k_max; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) {
        const double step = (k - j == 0) ? 1.0 : steps.at(i, k - j);
        s += binom[k][j] * m[j] * step;
      }
      next[k] = s;
    }
    m = next;
  }
  return m;
}

double kingman_tail_mean(std::int64_t n, double theta) {
  const double nn = static_cast<double>(n);
  if (theta == 0.0) return 2.0 / nn;  // telescoping, exact
  if (theta == 1.0) return 2.0 * trigamma(nn + 1.0);
  return 2.0 / (theta - 1.0) * (digamma(nn + theta) - digamma(nn + 1.0));
}

TailMoments tail_hitting_moments(const ModelParams& params, std::int64_t n, int k_max,
                                 std::int64_t n_max) {
  params.validate();
  if (n < 0 || k_max < 1) throw std::invalid_argument("tail_hitting_moments: bad arguments");
  if (n == 0 && params.theta == 0.0)
    throw std::invalid_argument("tail_hitting_moments: level 0 unreachable without mutation");
  if (n_max < n + 20) throw std::invalid_argument("tail_hitting_moments: n_max too small, increase it");

  const MomentTable steps = asg_step_moments(params, n_max, k_max, n + 1);
  std::vector<double> partial = compose_step_moments(steps, n + 1, n_max, k_max);

  // cumulants of the remainder sum_{i > n_max} T_{i,i-1}, Kingman closed
  // forms (the sigma correction enters the error bar, not the estimate)
  std::vector<double> kap(static_cast<std::size_t>(k_max) + 1, 0.0);
  kap[1] = kingman_tail_mean(n_max, params.theta);
  const std::int64_t direct_span = 2000;
  for (int k = 2; k <= k_max; ++k) {
    double fact = 1.0;
    for (int j = 2; j < k; ++j) fact *= j;  // (k-1)!
    CompensatedSum s;
    for (std::int64_t i = n_max + 1; i <= n_max + direct_span; ++i) {
      const double x1 = 2.0 / (static_cast<double>(i) * (static_cast<double>(i) - 1.0 + params.theta));
      s.add(fact * std::pow(x1, k));
    }
    const double edge = static_cast<double>(n_max + direct_span);
    // integral remainder of sum_{i>edge} (k-1)! (2/i^2)^k
    s.add(fact * std::pow(2.0, k) / ((2.0 * k - 1.0) * std::pow(edge, 2.0 * k - 1.0)));
    kap[k] = s.total();
  }
  std::vector<double> tail_raw(static_cast<std::size_t>(k_max) + 1, 0.0);
  tail_raw[0] = 1.0;
  const auto binom = pascal_triangle(std::max(1, k_max));
  for (int k = 1; k <= k_max; ++k) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += binom[k - 1][j] * kap[j + 1] * tail_raw[k - 1 - j];
    tail_raw[k] = s;
  }

  TailMoments out;
  out.n_max_used = n_max;
  out.raw.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  out.raw[0] = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += binom[k][j] * partial[j] * tail_raw[k - j];
    out.raw[k] = s;
  }

  // error bar: fitted envelope constant for the selection correction to the
  // per-step means beyond n_max, integral-compared (a - x <= B/i^3)
  double mean_err = 1e-16 * out.raw[1];
  if (params.sigma > 0.0) {
    double b_hat = 0.0;
    const std::int64_t lo_fit = std::max<std::int64_t>(n + 1, n_max / 2);
    for (std::int64_t i = lo_fit; i <= n_max; ++i) {
      const double delta = steps.at(i, 1) - kingman_step_moment(i, 1, params.theta);
      const double scaled = delta * std::pow(static_cast<double>(i), 3.0);
      b_hat = std::max(b_hat, scaled);
    }
    mean_err += 0.5 * b_hat / (static_cast<double>(n_max) * static_cast<double>(n_max));
  }
  out.tail_error.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  out.tail_error[1] = mean_err;
  for (int k = 2; k <= k_max; ++k)
    out.tail_error[k] = static_cast<double>(k) * out.raw[k - 1] * mean_err;
  return out;
}

MomentTable absorption_moment_oracle(std::int64_t m, std::int64_t n_max,
                                     const ModelParams& params, int k_max) {
  params.validate();
  if (m < 1 || n_max <= m) throw std::invalid_argument("absorption_moment_oracle: bad level range");
  if (n_max - m > 200)
    throw std::invalid_argument("absorption_moment_oracle: range above dense-solve scale (200)");
  if (params.death_rate(m) <= 0.0)
    throw std::invalid_argument("absorption_moment_oracle: absorbing target unreachable (zero rate)");

  const std::int64_t sz = n_max - m + 1;
  Eigen::MatrixXd neg_q = Eigen::MatrixXd::Zero(sz, sz);
  for (std::int64_t n = m; n <= n_max; ++n) {
    const std::int64_t r = n - m;
    const double mu = params.death_rate(n);
    const double lam = (n == n_max) ? 0.0 : params.birth_rate(n);  // reflecting top
    neg_q(r, r) = mu + lam;
    if (n + 1 <= n_max) neg_q(r, r + 1) = -lam;
    if (n - 1 >= m) neg_q(r, r - 1) = -mu;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(neg_q);
  if (std::fabs(lu.determinant()) < 1e-300)
    throw std::invalid_argument("absorption_moment_oracle: singular system, invalid rates");

  MomentTable tab;
  tab.params = params;
  tab.n_min = m;
  tab.n_max = n_max;
  tab.k_max = k_max;
  tab.method = MomentMethod::linear_solve_oracle;
  tab.boundary = BoundaryPolicy::reflecting;
  tab.values.assign(static_cast<std::size_t>(sz) * k_max, 0.0);

  Eigen::VectorXd prev = Eigen::VectorXd::Ones(sz);
  for (int k = 1; k <= k_max; ++k) {
    Eigen::VectorXd mk = lu.solve(static_cast<double>(k) * prev);
    for (std::int64_t n = m; n <= n_max; ++n) tab.at(n, k) = mk(n - m);
    prev = mk;
  }
  return tab;
}

namespace {

MomentTable h_moments_raw(const ModelParams& params, std::int64_t n_max, int k_max,
                          std::int64_t n_min) {
  MomentTable tab;
  tab.params = params;
  tab.n_min = n_min;
  tab.n_max = n_max;
  tab.k_max = k_max;
  tab.method = MomentMethod::backward_recursion;
  tab.boundary = BoundaryPolicy::reflecting;  // E[H_{n_max}^k] = 0
  tab.values.assign(static_cast<std::size_t>(n_max - n_min + 1) * k_max, 0.0);
  if (params.sigma == 0.0) return tab;  // no upward jumps at all

  std::vector<double> fact(static_cast<std::size_t>(k_max) + 1, 1.0);
  for (int i = 1; i <= k_max; ++i) fact[i] = fact[i - 1] * i;
  auto h = [&](std::int64_t n, int k) -> double { return k == 0 ? 1.0 : tab.at(n, k); };

  // (mu_n/lambda_n) E[H_n^k] = sum_{|m|=k, m != (0,k,0)} C(k;m) E[H_n^{m2}] E[H_{n+1}^{m3}]
  for (std::int64_t n = n_max - 1; n >= n_min; --n) {
    const double ratio = params.birth_rate(n) / params.death_rate(n);
    for (int k = 1; k <= k_max; ++k) {
      double rhs = 0.0;
      for (int m2 = 0; m2 <= k; ++m2) {
        for (int m3 = 0; m3 <= k - m2; ++m3) {
          const int m1 = k - m2 - m3;
          if (m1 == 0 && m2 == k) continue;
          const double coef = fact[k] / (fact[m1] * fact[m2] * fact[m3]);
          rhs += coef * h(n, m2) * h(n + 1, m3);
        }
      }
      tab.at(n, k) = ratio * rhs;
    }
  }
  return tab;
}

}  // namespace

MomentTable h_moments(const ModelParams& params, std::int64_t n_max, int k_max) {
  params.validate();
  if (k_max < 1) throw std::invalid_argument("h_moments: k_max must be >= 1");
  const std::int64_t n_min = params.theta == 0.0 ? 2 : 1;
  if (n_max < n_min + 10) throw std::invalid_argument("h_moments: n_max too small");
  MomentTable tab = h_moments_raw(params, n_max, k_max, n_min);
  if (params.sigma > 0.0) {
    const std::int64_t half = n_max / 2;
    if (half >= n_min + 10) {
      MomentTable probe = h_moments_raw(params, half, k_max, n_min);
      const std::int64_t hi = std::max(n_min, half - 5);
      double worst = 0.0;
      for (std::int64_t n = n_min; n <= hi; ++n)
        for (int k = 1; k <= k_max; ++k)
          if (tab.at(n, k) > 0.0)
            worst = std::max(worst, std::fabs(probe.at(n, k) - tab.at(n, k)) / tab.at(n, k));
      tab.truncation_error = worst;
    }
  }
  return tab;
}

NuResult nu_speed(const ModelParams& params, double t, std::int64_t n_max) {
  params.validate();
  if (!(t > 0.0)) throw std::invalid_argument("nu_speed: t must be > 0");
  constexpr double kTieTolerance = 1e-10;  // "<=" up to float rounding at designed ties
  constexpr std::int64_t kHardCap = 1 << 25;

  const std::int64_t n_hat = static_cast<std::int64_t>(std::ceil(2.0 / t)) + 2;
  const bool user_sized = n_max > 0;
  std::int64_t size = user_sized ? n_max : std::max<std::int64_t>(4096, 16 * n_hat);
  if (size > kHardCap) throw std::invalid_argument("nu_speed: required n_max beyond supported scale");

  for (;;) {
    const std::int64_t lo = params.theta > 0.0 ? 1 : 2;
    std::vector<double> means;
    if (params.sigma == 0.0) {
      means.assign(static_cast<std::size_t>(size - lo + 1), 0.0);
      for (std::int64_t i = lo; i <= size; ++i)
        means[static_cast<std::size_t>(i - lo)] = kingman_step_moment(i, 1, params.theta);
    } else {
      means = asg_step_means(params, size, lo);
    }
    const double tail = kingman_tail_mean(size, params.theta);

    // E[T_n] = tail + sum_{i=n+1..size} a(i,1); suffix pass keeps full precision
    std::vector<double> expect(static_cast<std::size_t>(size - lo + 2), 0.0);
    {
      CompensatedSum s;
      s.add(tail);
      expect[static_cast<std::size_t>(size - lo + 1)] = s.total();  // E[T_size]
      for (std::int64_t n = size - 1; n >= lo - 1; --n) {
        s.add(means[static_cast<std::size_t>(n + 1 - lo)]);
        expect[static_cast<std::size_t>(n - (lo - 1))] = s.total();
      }
    }
    auto expected_hit = [&](std::int64_t n) -> double {
      if (n < lo - 1) return std::numeric_limits<double>::infinity();  // theta = 0: level 0 unreachable
      if (n > size) return 0.0;
      return expect[static_cast<std::size_t>(n - (lo - 1))];
    };

    const double cutoff = t * (1.0 + kTieTolerance);
    std::int64_t nu = lo - 1;
    if (!(expected_hit(nu) <= cutoff)) {
      while (nu <= size && !(expected_hit(nu) <= cutoff)) ++nu;
    }
    if (nu > size / 2) {
      if (user_sized)
        throw std::invalid_argument("nu_speed: t below resolution of n_max, increase n_max");
      if (size >= kHardCap) throw std::runtime_error("nu_speed: cannot resolve t at supported scale");
      size = std::min(kHardCap, size * 2);
      continue;
    }
    NuResult out;
    out.nu = nu;
    out.expected_hit_at_nu = expected_hit(nu);
    out.expected_hit_above = expected_hit(nu - 1);
    out.n_max_used = size;
    out.tail_error = params.sigma > 0.0 ? tail * 0.5 / static_cast<double>(size) : 1e-15 * tail;
    return out;
  }
}

}  // namespace asg
