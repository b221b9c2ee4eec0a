#include <doctest.h>

#include <cmath>
#include <vector>

#include "asg/rng.hpp"

using namespace asg;

TEST_CASE("same (seed, index) reproduces the stream exactly") {
  RandomStream a = stream_for(42, 7);
  RandomStream b = stream_for(42, 7);
  for (int i = 0; i < 1'000'000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("different indices give uncorrelated uniforms") {
  RandomStream a = stream_for(42, 0);
  RandomStream b = stream_for(42, 1);
  const int n = 100'000;
  double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform01();
    const double y = b.uniform01();
    sx += x; sy += y; sxy += x * y; sxx += x * x; syy += y * y;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double corr = cov / std::sqrt((sxx / n - (sx / n) * (sx / n)) * (syy / n - (sy / n) * (sy / n)));
  CHECK(std::fabs(corr) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("uniform01 stays inside the open interval") {
  RandomStream rng = stream_for(1, 0);
  for (int i = 0; i < 200'000; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("exponential sample mean matches 1/rate within 4 SE") {
  RandomStream rng = stream_for(7, 3);
  const double rate = 2.5;
  const int n = 1'000'000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.exponential(rate);
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sumsq / n - mean * mean);
  CHECK(std::fabs(mean - 1.0 / rate) < 4.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("uniform_below covers its range uniformly") {
  RandomStream rng = stream_for(3, 11);
  const std::uint64_t m = 7;
  std::vector<int> counts(m, 0);
  const int n = 700'000;
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_below(m)];
  for (std::uint64_t k = 0; k < m; ++k) {
    const double expected = static_cast<double>(n) / m;
    CHECK(std::fabs(counts[k] - expected) < 5.0 * std::sqrt(expected));
  }
}

TEST_CASE("normal sampler has unit variance and zero mean") {
  RandomStream rng = stream_for(5, 2);
  const int n = 400'000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::fabs(sumsq / n - 1.0) < 6.0 / std::sqrt(static_cast<double>(n)));
}
