#include "asg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "asg/numeric.hpp"
#include "asg/special.hpp"

namespace asg {

Summary summarize(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("summarize: empty sample");
  Summary s;
  s.n = static_cast<std::int64_t>(xs.size());
  CompensatedSum sum;
  for (double x : xs) sum.add(x);
  s.mean = sum.total() / static_cast<double>(s.n);
  if (s.n > 1) {
    CompensatedSum sq;
    for (double x : xs) sq.add((x - s.mean) * (x - s.mean));
    s.variance = sq.total() / static_cast<double>(s.n - 1);
    s.se = std::sqrt(s.variance / static_cast<double>(s.n));
  }
  return s;
}

double sample_covariance(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("sample_covariance: need two equal samples of size >= 2");
  const Summary sx = summarize(xs);
  const Summary sy = summarize(ys);
  CompensatedSum acc;
  for (std::size_t i = 0; i < xs.size(); ++i) acc.add((xs[i] - sx.mean) * (ys[i] - sy.mean));
  return acc.total() / static_cast<double>(xs.size() - 1);
}

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.size() < 50) throw std::invalid_argument("ks_one_sample: need at least 50 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n));
  }
  const double sqrt_n = std::sqrt(n);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  return KsResult{d, kolmogorov_q(lambda)};
}

ChiSquareResult binomial_chi_square(const std::vector<BinomialCell>& cells, double min_expected) {
  ChiSquareResult r;
  CompensatedSum stat;
  for (const BinomialCell& c : cells) {
    const double m = static_cast<double>(c.trials);
    const double expected_succ = m * c.p;
    const double expected_fail = m * (1.0 - c.p);
    if (expected_succ < min_expected || expected_fail < min_expected) continue;
    const double dev = static_cast<double>(c.successes) - expected_succ;
    stat.add(dev * dev / (m * c.p * (1.0 - c.p)));
    ++r.cells_used;
  }
  if (r.cells_used == 0) throw std::invalid_argument("binomial_chi_square: no usable cells");
  r.statistic = stat.total();
  r.df = r.cells_used;
  r.p_value = chi_square_sf(r.statistic, static_cast<double>(r.df));
  return r;
}

namespace {

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_num(double v) { return std::isnan(v) ? std::string() : fmt_full(v); }

}  // namespace

const McRow* McReport::find(const std::string& experiment, const std::string& statistic, double t,
                            double epsilon) const {
  auto match = [](double want, double have) {
    return std::isnan(want) || (!std::isnan(have) && have == want);
  };
  for (const McRow& row : rows)
    if (row.experiment == experiment && row.statistic == statistic && match(t, row.t) &&
        match(epsilon, row.epsilon))
      return &row;
  return nullptr;
}

void McReport::write_csv(std::ostream& os) const {
  os << "# schema=mc-v1 config_hash=" << config_hash << " seed=" << master_seed
     << " replicates=" << replicates << '\n';
  os << "experiment,epsilon,t,statistic,estimate,stderr,target,tag,p_value\n";
  for (const McRow& r : rows) {
    os << r.experiment << ',' << csv_num(r.epsilon) << ',' << csv_num(r.t) << ',' << r.statistic
       << ',' << fmt_full(r.estimate) << ',' << csv_num(r.stderr_of_estimate) << ','
       << csv_num(r.target) << ',' << r.tag << ','
       << (r.p_value ? fmt_full(*r.p_value) : std::string()) << '\n';
  }
}

void McReport::write_json(std::ostream& os) const {
  nlohmann::json j;
  j["schema"] = "mc-v1";
  j["config_hash"] = config_hash;
  j["seed"] = master_seed;
  j["replicates"] = replicates;
  auto num_or_null = [](double v) {
    return std::isnan(v) ? nlohmann::json() : nlohmann::json(v);
  };
  j["rows"] = nlohmann::json::array();
  for (const McRow& r : rows) {
    nlohmann::json row;
    row["experiment"] = r.experiment;
    row["epsilon"] = num_or_null(r.epsilon);
    row["t"] = num_or_null(r.t);
    row["statistic"] = r.statistic;
    row["estimate"] = r.estimate;
    row["stderr"] = num_or_null(r.stderr_of_estimate);
    row["target"] = num_or_null(r.target);
    row["tag"] = r.tag;
    row["p_value"] = r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json();
    j["rows"].push_back(std::move(row));
  }
  os << j.dump(2) << '\n';
}

void McReport::append(McReport other) {
  rows.insert(rows.end(), std::make_move_iterator(other.rows.begin()),
              std::make_move_iterator(other.rows.end()));
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace asg
