#include "hdlp/random.hpp"
#include "hdlp/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

TEST_SUITE("random_stats") {

TEST_CASE("normal_cdf matches erfc") {
  for (double x = -8.0; x <= 8.0; x += 0.25)
    CHECK(hdlp::normal_cdf(x) == doctest::Approx(0.5 * std::erfc(-x / std::sqrt(2.0))).epsilon(1e-14));
}

TEST_CASE("normal_quantile inverts the cdf") {
  for (double p : {1e-300, 1e-12, 1e-6, 0.001, 0.025, 0.2, 0.5, 0.8, 0.975, 0.999, 1 - 1e-10}) {
    const double x = hdlp::normal_quantile(p);
    const double back = 0.5 * std::erfc(-x / std::sqrt(2.0));
    if (p < 0.5)
      CHECK(std::abs(back - p) <= 1e-11 * p);
    else
      CHECK(std::abs(back - p) <= 1e-12);
  }
  CHECK(hdlp::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(hdlp::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("fast quantile is close to the refined one") {
  for (double p = 0.001; p < 1.0; p += 0.0137)
    CHECK(std::abs(hdlp::normal_quantile_fast(p) - hdlp::normal_quantile(p)) < 1e-8);
}

TEST_CASE("type-7 quantile matches hand-computed order statistics") {
  // numpy.quantile([1, 2, 4, 8, 16], q) with linear interpolation
  std::vector<double> v{16, 1, 8, 2, 4};
  CHECK(hdlp::quantile(v, 0.0) == 1.0);
  CHECK(hdlp::quantile(v, 1.0) == 16.0);
  CHECK(hdlp::quantile(v, 0.5) == 4.0);
  CHECK(hdlp::quantile(v, 0.1) == doctest::Approx(1.4));
  CHECK(hdlp::quantile(v, 0.9) == doctest::Approx(12.8));
  CHECK(hdlp::quantile({3.0}, 0.3) == 3.0);
}

TEST_CASE("uniform stream is a pure function of key and counter") {
  hdlp::CounterRng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double ua = a.uniform();
    CHECK(ua == b.uniform());
    CHECK(ua != c.uniform());
    CHECK(ua > 0.0);
    CHECK(ua < 1.0);
  }
  CHECK(hdlp::uniform_at(42, 5) == hdlp::uniform_at(42, 5));
}

TEST_CASE("gaussian stream passes a Kolmogorov-Smirnov test") {
  const int n = 20000;
  std::vector<double> z(n);
  hdlp::CounterRng rng(2024);
  for (auto& v : z) v = rng.gaussian();
  std::sort(z.begin(), z.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double F = 0.5 * std::erfc(-z[i] / std::sqrt(2.0));
    d = std::max({d, F - double(i) / n, double(i + 1) / n - F});
  }
  // 1% critical value 1.628 / sqrt(n)
  CHECK(d < 1.628 / std::sqrt(double(n)));
  double mean = 0.0, var = 0.0;
  for (double v : z) mean += v / n;
  for (double v : z) var += (v - mean) * (v - mean) / (n - 1);
  CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("below stays in range and hits every value") {
  hdlp::CounterRng rng(9);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto k = rng.below(7);
    REQUIRE(k < 7);
    ++counts[k];
  }
  for (int c : counts) CHECK(c > 800);
}

TEST_CASE("derived seeds differ across indices and bases") {
  CHECK(hdlp::derive_seed(1, 0) != hdlp::derive_seed(1, 1));
  CHECK(hdlp::derive_seed(1, 0) != hdlp::derive_seed(2, 0));
  CHECK(hdlp::derive_seed(5, 3) == hdlp::derive_seed(5, 3));
}

}
