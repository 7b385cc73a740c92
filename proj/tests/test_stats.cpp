#include <cmath>

#include "doctest.h"
#include "hcm/rng.hpp"
#include "hcm/stats.hpp"

using namespace hcm;

TEST_CASE("norms") {
  CHECK(l2_norm({}) == 0.0);
  CHECK(l2_norm({3.0, 4.0}) == 5.0);
  CHECK(l22_norm({{3.0, 4.0}}) == 5.0);
  CHECK(l22_norm({{1.0, 1.0}, {1.0, 1.0}}) == 2.0);
}

TEST_CASE("ordering") {
  CHECK(ord({1.0, 3.0, 2.0}) == std::vector<double>{3.0, 2.0, 1.0});
  CHECK(is_ordered({3.0, 3.0, 1.0}));
  CHECK_FALSE(is_ordered({1.0, 2.0}));
}

TEST_CASE("KS statistic on identical and disjoint samples") {
  const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
  const auto same = ks_two_sample(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);
  const auto apart = ks_two_sample(a, {10.0, 11.0});
  CHECK(apart.statistic == 1.0);
  CHECK_THROWS(ks_two_sample({}, a));
}

TEST_CASE("KS handles ties across samples") {
  // F_a jumps to 1/2 at 1 and 1 at 2; F_b jumps to 1 at 1.
  CHECK(ks_two_sample({1.0, 2.0}, {1.0, 1.0}).statistic == 0.5);
}

TEST_CASE("Kolmogorov tail values") {
  CHECK(kolmogorov_tail(0.0) == 1.0);
  // Q(1) = 2 sum (-1)^{k-1} exp(-2 k^2) = 0.26999967...
  CHECK(kolmogorov_tail(1.0) == doctest::Approx(0.2699996716773546).epsilon(1e-12));
  CHECK(kolmogorov_tail(1.358) == doctest::Approx(0.05).epsilon(1e-2));
}

TEST_CASE("KS calibration on equal exponential samples") {
  std::size_t rejections = 0;
  const std::size_t trials = 200;
  for (std::uint64_t r = 0; r < trials; ++r) {
    Rng a(seed_stream(1, r)), b(seed_stream(2, r));
    std::vector<double> x(10000), y(10000);
    for (double& v : x) v = exponential(a, 1.0);
    for (double& v : y) v = exponential(b, 1.0);
    rejections += ks_two_sample(x, y).p_value <= 1e-3;
  }
  // Expected 0.2 rejections; P(more than 3) is about 5e-5.
  CHECK(rejections <= 3);
}

TEST_CASE("mean and standard error") {
  const auto m = mean_se({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == 2.5);
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 12.0)));
  CHECK(mean_se({}).mean == 0.0);
}
