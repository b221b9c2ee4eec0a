#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace asg {

struct Summary {
  std::int64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // n-1 normalization
  double se = 0.0;        // standard error of the mean
};

Summary summarize(std::span<const double> xs);

// Sample covariance, n-1 normalization.
double sample_covariance(std::span<const double> xs, std::span<const double> ys);

struct KsResult {
  double statistic = 0.0;  // D = sup |empirical - cdf|
  double p_value = 1.0;
};

// One-sample Kolmogorov-Smirnov against a continuous CDF; p-value from the
// asymptotic Kolmogorov distribution with the usual small-sample effective-n
// correction. Requires at least 50 samples.
KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

struct ChiSquareResult {
  double statistic = 0.0;
  std::int64_t df = 0;
  double p_value = 1.0;
  std::int64_t cells_used = 0;
};

struct BinomialCell {
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double p = 0.0;  // success probability under the null
};

// Pooled chi-square over independent binomial cells; cells with expected
// successes or failures below min_expected are dropped.
ChiSquareResult binomial_chi_square(const std::vector<BinomialCell>& cells,
                                    double min_expected = 5.0);

// One row of a Monte Carlo report. Absent numeric fields are NaN.
struct McRow {
  std::string experiment;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double t = std::numeric_limits<double>::quiet_NaN();
  std::string statistic;
  double estimate = 0.0;
  double stderr_of_estimate = std::numeric_limits<double>::quiet_NaN();
  double target = std::numeric_limits<double>::quiet_NaN();
  std::string tag;  // provenance of the target: paper | derived | trivial | n/a
  std::optional<double> p_value;
};

struct McReport {
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::int64_t replicates = 0;
  std::vector<McRow> rows;

  const McRow* find(const std::string& experiment, const std::string& statistic,
                    double t = std::numeric_limits<double>::quiet_NaN(),
                    double epsilon = std::numeric_limits<double>::quiet_NaN()) const;

  // Long format, schema mc-v1:
  // experiment,epsilon,t,statistic,estimate,stderr,target,tag,p_value
  void write_csv(std::ostream& os) const;
  void write_json(std::ostream& os) const;

  void append(McReport other);
};

// FNV-1a over a canonical text; used to stamp outputs with their config.
std::string fnv1a_hex(const std::string& text);

}  // namespace asg
