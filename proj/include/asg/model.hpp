#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace asg {

// Rates of the block-counting birth/death chain, in coalescent time units:
// deaths n -> n-1 at n(n-1+theta)/2, births n -> n+1 at sigma*n/2.
// theta = 0, sigma = 0 gives the plain Kingman block-counting process.
struct ModelParams {
  double theta = 0.0;
  double sigma = 0.0;

  ModelParams() = default;
  ModelParams(double theta_, double sigma_) : theta(theta_), sigma(sigma_) { validate(); }

  void validate() const {
    if (!std::isfinite(theta) || theta < 0.0)
      throw std::invalid_argument("ModelParams: theta must be finite and >= 0");
    if (!std::isfinite(sigma) || sigma < 0.0)
      throw std::invalid_argument("ModelParams: sigma must be finite and >= 0");
  }

  double death_rate(std::int64_t n) const {
    return 0.5 * static_cast<double>(n) * (static_cast<double>(n) - 1.0 + theta);
  }

  double birth_rate(std::int64_t n) const { return 0.5 * sigma * static_cast<double>(n); }

  // Total jump rate at level n; the holding time there is Exp of this.
  double holding_rate(std::int64_t n) const {
    return 0.5 * static_cast<double>(n) * (static_cast<double>(n) - 1.0 + theta + sigma);
  }

  // Up-step probability of the embedded jump chain, sigma/(n-1+theta+sigma).
  double up_probability(std::int64_t n) const {
    const double denom = static_cast<double>(n) - 1.0 + theta + sigma;
    return denom > 0.0 ? sigma / denom : 0.0;
  }
};

}  // namespace asg
