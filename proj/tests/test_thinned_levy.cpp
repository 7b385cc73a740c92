#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hcm/errors.hpp"
#include "hcm/stats.hpp"
#include "hcm/thinned_levy.hpp"

using namespace hcm;

namespace {

LimitParameters one_hub() {
  LimitParameters p;
  p.theta = {1.0};
  p.beta = {0.0};
  p.kappa = 1.0;
  return p;
}

LimitParameters sample_params() {
  auto p = power_law_limits(3.5, 200, 0.8, 0.5, 2.0);
  p.kappa = 1.3;
  p.alpha = 0.4;
  p.lambda = 0.2;
  return p;
}

}  // namespace

TEST_CASE("undiscovered single hub leaves pure drift") {
  const double T = 0.05;
  for (std::uint64_t seed = 0;; ++seed) {
    const auto r = sample_thinned_levy(one_hub(), 1, T, 0.01, seed);
    if (r.jump_time[0] <= T) continue;
    for (double t : {0.0, 0.01, 0.025, 0.05}) CHECK(r.X(t) == doctest::Approx(-t));
    CHECK(r.X.jumps().empty());
    break;
  }
}

TEST_CASE("no black mass means Y is zero") {
  auto p = sample_params();
  p.alpha = 0.0;
  for (double& b : p.beta) b = 0.0;
  const auto r = sample_thinned_levy(p, 200, 5.0, 0.1, 3);
  for (double t : make_grid(5.0, 0.1)) REQUIRE(r.Y(t) == 0.0);
}

TEST_CASE("paths agree with the defining sums") {
  for (auto clock : {HubClock::kXiOverKappa, HubClock::kKappaXi}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto r = sample_thinned_levy(sample_params(), 150, 4.0, 0.01, seed, clock);
      REQUIRE(max_formula_residual(r) < 1e-9);
    }
  }
}

TEST_CASE("Y jumps sit at X jump times") {
  const auto r = sample_thinned_levy(sample_params(), 200, 10.0, 0.1, 8);
  const auto xj = r.X.jumps();
  for (const auto& j : r.Y.jumps()) {
    bool found = false;
    for (const auto& x : xj) found = found || x.time == j.time;
    REQUIRE(found);
  }
  CHECK(r.Y.is_nondecreasing());
  CHECK_FALSE(r.X.has_negative_jump());
}

TEST_CASE("mean of Y matches alpha t + sum beta_i P(hub found by t)") {
  const auto p = sample_params();
  const std::size_t R = 20000;
  for (double t : {0.5, 1.0, 2.0}) {
    std::vector<double> ys;
    for (std::size_t r = 0; r < R; ++r) {
      ys.push_back(sample_thinned_levy(p, p.theta.size(), t, t, seed_stream(41, r)).Y(t));
    }
    double oracle = p.alpha * t;
    for (std::size_t i = 0; i < p.theta.size(); ++i) oracle += p.beta[i] * (1.0 - std::exp(-p.theta[i] * p.kappa * t));
    CHECK(expected_y(p, t, HubClock::kXiOverKappa) == doctest::Approx(oracle).epsilon(1e-12));
    const auto m = mean_se(ys);
    CHECK(std::abs(m.mean - oracle) <= 3.0 * m.se);
  }
}

TEST_CASE("mean of X matches the truncated expectation") {
  const auto p = sample_params();
  const std::size_t R = 20000;
  const double t = 1.0;
  std::vector<double> xs;
  for (std::size_t r = 0; r < R; ++r) xs.push_back(sample_thinned_levy(p, 50, t, t, seed_stream(43, r)).X(t));
  const auto m = mean_se(xs);
  CHECK(std::abs(m.mean - expected_x(p, 50, t, HubClock::kXiOverKappa)) <= 3.0 * m.se);
}

TEST_CASE("truncation changes X by at most the tail bound") {
  const auto p = sample_params();
  const double T = 3.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto small = sample_thinned_levy(p, 30, T, 0.05, seed);
    const auto large = sample_thinned_levy(p, 200, T, 0.05, seed);
    for (double t : make_grid(T, 0.05)) {
      REQUIRE(std::abs(small.X(t) - large.X(t)) <= truncation_bound(p, 30, 200, t) + 1e-12);
    }
  }
}

TEST_CASE("bad arguments throw") {
  CHECK_THROWS(sample_thinned_levy(one_hub(), 0, 1.0, 0.1, 1));
  CHECK_THROWS(sample_thinned_levy(one_hub(), 1, 1.0, 0.0, 1));
  CHECK_THROWS(sample_thinned_levy(one_hub(), 1, 0.0, 0.1, 1));
  auto p = one_hub();
  p.kappa = 0.0;
  CHECK_THROWS(sample_thinned_levy(p, 1, 1.0, 0.1, 1));
}

TEST_CASE("reflection of a non-decreasing path") {
  const std::vector<Jump> jumps{{1.0, 2.0}};
  const auto x = CadlagPath::drift_with_jumps(3.0, 0.5, 1.0, jumps);
  const auto r = reflected(x);
  for (double t : {0.0, 0.5, 1.0, 2.0, 3.0}) CHECK(r(t) == doctest::Approx(x(t) - 0.5));
}

TEST_CASE("reflection of a pure down drift is zero") {
  const auto r = reflected(CadlagPath::drift_with_jumps(3.0, 0.0, -1.0, {}));
  for (double t : {0.0, 1.0, 2.5, 3.0}) CHECK(r(t) == 0.0);
}

TEST_CASE("reflected sawtooth") {
  // Flat at 0, jump of 2 at t = 1, then drift -1.
  const CadlagPath x(4.0, {{0.0, 0.0, 0.0}, {1.0, 2.0, -1.0}});
  const auto r = reflected(x);
  CHECK(r(0.0) == 0.0);
  CHECK(r(1.0) == doctest::Approx(2.0));
  CHECK(r(2.0) == doctest::Approx(1.0));
  CHECK(r(3.0) == doctest::Approx(0.0));
  CHECK(r(4.0) == doctest::Approx(0.0));
}

TEST_CASE("surplus process vanishes without excursions") {
  const auto x = CadlagPath::drift_with_jumps(5.0, 0.0, -1.0, {});
  const auto n = sample_surplus_process(x, 1);
  CHECK(n(5.0) == 0.0);
}

TEST_CASE("constant reflected height gives a Poisson count") {
  const std::size_t R = 40000;
  for (double h : {1.0, 2.0}) {
    std::vector<double> counts;
    Rng rng(seed_stream(5, static_cast<std::uint64_t>(h * 10)));
    for (std::size_t r = 0; r < R; ++r) {
      counts.push_back(sample_surplus_from_reflected(CadlagPath::constant(1.0, h), rng)(1.0));
    }
    const auto m = mean_se(counts);
    CHECK(std::abs(m.mean - h) <= 3.0 * std::sqrt(h / static_cast<double>(R)));
  }
}

TEST_CASE("doubling the reflected height doubles the mean count") {
  const std::size_t R = 40000;
  Rng rng(77);
  std::vector<double> one, two;
  const CadlagPath r1(1.0, {{0.0, 0.5, 0.5}});
  const CadlagPath r2(1.0, {{0.0, 1.0, 1.0}});
  for (std::size_t r = 0; r < R; ++r) {
    one.push_back(sample_surplus_from_reflected(r1, rng)(1.0));
    two.push_back(sample_surplus_from_reflected(r2, rng)(1.0));
  }
  const auto a = mean_se(one), b = mean_se(two);
  CHECK(std::abs(b.mean - 2.0 * a.mean) <= 3.0 * std::sqrt(b.se * b.se + 4.0 * a.se * a.se));
}

TEST_CASE("path csv header and rows") {
  const auto x = CadlagPath::constant(1.0, 2.0);
  std::ostringstream os;
  write_path_csv(os, {0.0, 1.0}, x, x, x);
  CHECK(os.str() == "t,X,Y,N\n0,2,2,2\n1,2,2,2\n");
}
