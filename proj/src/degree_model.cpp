#include "hcm/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hcm/errors.hpp"

namespace hcm {

ScalingConstants make_scaling(std::int64_t n, double tau, double L) {
  if (!(tau > 3.0 && tau < 4.0)) throw std::domain_error("tau must lie in (3,4)");
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
  ScalingConstants s;
  s.n = n;
  s.tau = tau;
  s.slowly_varying = L;
  const double nd = static_cast<double>(n);
  s.a = std::pow(nd, 1.0 / (tau - 1.0)) * L;
  s.b = std::pow(nd, (tau - 2.0) / (tau - 1.0)) / L;
  s.c = std::pow(nd, (tau - 3.0) / (tau - 1.0)) / (L * L);
  return s;
}

void LimitParameters::validate() const {
  if (theta.size() != beta.size()) throw std::invalid_argument("theta and beta lengths differ");
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] > 0.0)) throw std::invalid_argument("theta must be positive");
    if (i > 0 && theta[i] > theta[i - 1]) throw std::invalid_argument("theta must be non-increasing");
    if (beta[i] < 0.0) throw std::invalid_argument("beta must be non-negative");
  }
  if (alpha < 0.0) throw std::invalid_argument("alpha must be non-negative");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
}

double LimitParameters::theta_sq_sum() const {
  double s = 0;
  for (double t : theta) s += t * t;
  return s;
}

double LimitParameters::theta_cube_sum() const {
  double s = 0;
  for (double t : theta) s += t * t * t;
  return s;
}

double LimitParameters::theta_beta() const {
  double s = 0;
  for (std::size_t i = 0; i < theta.size() && i < beta.size(); ++i) s += theta[i] * beta[i];
  return s;
}

LimitParameters power_law_limits(double tau, std::size_t count, double theta_scale,
                                 double beta_scale, double rho) {
  LimitParameters p;
  p.theta.resize(count);
  p.beta.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double k = static_cast<double>(i + 1);
    p.theta[i] = theta_scale * std::pow(k, -1.0 / (tau - 1.0));
    p.beta[i] = beta_scale * std::pow(k, -rho / (tau - 1.0));
  }
  return p;
}

DiscreteLaw DiscreteLaw::from_pmf(std::vector<double> pmf) {
  double total = 0;
  for (double p : pmf) {
    if (p < 0.0 || !std::isfinite(p)) throw std::invalid_argument("pmf entries must be finite and >= 0");
    total += p;
  }
  if (!(total > 0.0)) throw std::invalid_argument("pmf has zero mass");
  DiscreteLaw law;
  law.pmf_ = std::move(pmf);
  for (double& p : law.pmf_) p /= total;
  law.cdf_.resize(law.pmf_.size());
  std::partial_sum(law.pmf_.begin(), law.pmf_.end(), law.cdf_.begin());
  law.cdf_.back() = 1.0;
  return law;
}

DiscreteLaw DiscreteLaw::point_mass(int k) {
  if (k < 0) throw std::invalid_argument("point mass must be >= 0");
  std::vector<double> pmf(static_cast<std::size_t>(k) + 1, 0.0);
  pmf[static_cast<std::size_t>(k)] = 1.0;
  return from_pmf(std::move(pmf));
}

DiscreteLaw DiscreteLaw::zeta(double exponent, int cap) {
  if (cap < 1) throw std::invalid_argument("zeta cap must be >= 1");
  std::vector<double> pmf(static_cast<std::size_t>(cap) + 1, 0.0);
  for (int k = 1; k <= cap; ++k) pmf[static_cast<std::size_t>(k)] = std::pow(k, -exponent);
  return from_pmf(std::move(pmf));
}

double DiscreteLaw::moment(int order) const {
  double m = 0;
  for (std::size_t k = 0; k < pmf_.size(); ++k) m += pmf_[k] * std::pow(static_cast<double>(k), order);
  return m;
}

int DiscreteLaw::sample(Rng& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                  static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
}

DiscreteLaw default_white_bulk() { return DiscreteLaw::from_pmf({0.0, 0.3, 0.6, 0.1}); }
DiscreteLaw default_black_bulk() { return DiscreteLaw::from_pmf({0.25, 0.25, 0.25, 0.25}); }

std::int64_t DegreeSequence::white_total() const {
  return std::accumulate(white.begin(), white.end(), std::int64_t{0});
}

std::int64_t DegreeSequence::black_total() const {
  return std::accumulate(black.begin(), black.end(), std::int64_t{0});
}

namespace {

double arrangement_key(const DegreeSequence& seq, std::size_t i) {
  return seq.white[i] / seq.scaling.a + seq.black[i] / seq.scaling.b;
}

}  // namespace

void check_invariants(const DegreeSequence& seq) {
  ensure(seq.white.size() == seq.black.size(), "white/black length mismatch");
  ensure(seq.white_total() % 2 == 0, "odd total white degree");
  ensure(seq.black_total() % 2 == 0, "odd total black degree");
  for (std::size_t i = 0; i < seq.size(); ++i) {
    ensure(seq.white[i] >= 1, "white degree below 1");
    ensure(seq.black[i] >= 0, "negative black degree");
    if (i > 0) ensure(arrangement_key(seq, i) <= arrangement_key(seq, i - 1), "arrangement not monotone");
  }
}

void arrange(DegreeSequence& seq) {
  std::vector<std::size_t> order(seq.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> key(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) key[i] = arrangement_key(seq, i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return key[x] > key[y]; });
  std::vector<int> w(seq.size()), b(seq.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    w[i] = seq.white[order[i]];
    b[i] = seq.black[order[i]];
  }
  seq.white = std::move(w);
  seq.black = std::move(b);
}

DegreeSequence build_degree_sequence(const ScalingConstants& scaling, const LimitParameters& limits,
                                     std::size_t hub_count, const DiscreteLaw& white_bulk,
                                     const DiscreteLaw& black_bulk, std::uint64_t seed) {
  limits.validate();
  if (hub_count > limits.theta.size()) throw std::invalid_argument("hub_count exceeds theta length");
  const auto& pw = white_bulk.pmf();
  if (pw.size() < 2 || pw[0] > 0.0) throw std::invalid_argument("bulk law must have P(D>=1) = 1");
  const auto n = static_cast<std::size_t>(scaling.n);
  if (hub_count > n) throw std::invalid_argument("more hubs than vertices");

  DegreeSequence seq;
  seq.scaling = scaling;
  seq.limits = limits;
  seq.hub_count = hub_count;
  seq.white.resize(n);
  seq.black.resize(n);
  for (std::size_t i = 0; i < hub_count; ++i) {
    seq.white[i] = std::max(1, static_cast<int>(std::lround(limits.theta[i] * scaling.a)));
    seq.black[i] = static_cast<int>(std::lround(limits.beta[i] * scaling.b));
  }
  Rng rng(seed);
  for (std::size_t i = hub_count; i < n; ++i) {
    seq.white[i] = white_bulk.sample(rng);
    seq.black[i] = black_bulk.sample(rng);
  }
  const bool odd_white = seq.white_total() % 2 != 0;
  const bool odd_black = seq.black_total() % 2 != 0;
  if (odd_white || odd_black) {
    if (hub_count == n) throw std::runtime_error("parity repair impossible: empty bulk");
    if (odd_white) seq.white[n - 1] += 1;
    if (odd_black) seq.black[n - 1] += 1;
  }
  arrange(seq);
  check_invariants(seq);
  return seq;
}

double criticality(const std::vector<int>& white) {
  std::int64_t s1 = 0, s2 = 0;
  for (int d : white) {
    s1 += d;
    s2 += static_cast<std::int64_t>(d) * (d - 1);
  }
  if (s1 <= 0) throw std::invalid_argument("criticality needs positive total degree");
  return static_cast<double>(s2) / static_cast<double>(s1);
}

DegreeSequence tune_to_criticality(DegreeSequence seq, double lambda_target) {
  const double target = 1.0 + lambda_target / seq.scaling.c;
  std::int64_t s1 = 0, s2 = 0;
  for (int d : seq.white) {
    s1 += d;
    s2 += static_cast<std::int64_t>(d) * (d - 1);
  }
  auto nu = [](std::int64_t a2, std::int64_t a1) { return static_cast<double>(a2) / static_cast<double>(a1); };
  const double start = nu(s2, s1);
  const bool decrease = start > target;
  const int from = decrease ? 3 : 1;
  const int to = decrease ? 1 : 3;
  const std::int64_t d2 = decrease ? -6 : 6;
  const std::int64_t d1 = decrease ? -2 : 2;

  // Bulk candidates, scanned from the low end of the arrangement.
  std::vector<std::size_t> pool;
  for (std::size_t i = seq.size(); i-- > seq.hub_count;) {
    if (seq.white[i] == from) pool.push_back(i);
  }
  std::size_t used = 0;
  double current = start;
  double taken = 0.0;  // size of the last swap made
  double step = 0.0;   // size of the swap that was declined
  while (true) {
    const double next = nu(s2 + d2, s1 + d1);
    step = std::abs(next - current);
    if (std::abs(next - target) >= std::abs(current - target)) break;
    if (used == pool.size()) {
      throw std::runtime_error("criticality target unreachable with available bulk vertices");
    }
    seq.white[pool[used++]] = to;
    s1 += d1;
    s2 += d2;
    taken = step;
    current = next;
  }
  // The target lies within one of the two neighbouring steps.
  ensure(std::abs(current - target) <= 0.5 * std::max(step, taken) + 1e-12,
         "criticality tuning missed granularity bound");
  arrange(seq);
  check_invariants(seq);
  return seq;
}

AssumptionReport validate_assumptions(const DegreeSequence& seq, std::size_t tail_start,
                                      double tolerance) {
  AssumptionReport r;
  r.tail_start = tail_start;
  const double n = static_cast<double>(seq.size());
  const double a = seq.scaling.a;
  const double b = seq.scaling.b;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const double w = seq.white[i];
    const double k = seq.black[i];
    r.white_mean += w;
    r.white_second += w * w;
    r.mixed_mean += w * k;
    r.black_mean += k;
    if (i >= tail_start) {
      r.white_cubic_tail += w * w * w;
      r.black_square_tail += k * k;
    }
  }
  r.white_mean /= n;
  r.white_second /= n;
  r.mixed_mean /= n;
  r.black_mean /= n;
  r.white_cubic_tail /= a * a * a;
  r.black_square_tail /= b * b;
  if (r.white_mean > 0) r.lambda_n = seq.scaling.c * (criticality(seq) - 1.0);

  const auto& L = seq.limits;
  auto flag = [&](double value, double want, const char* name) {
    if (std::abs(value - want) > tolerance) {
      std::ostringstream os;
      os << name << " = " << value << " drifts from target " << want;
      r.flags.push_back(os.str());
    }
  };
  flag(r.white_mean, L.kappa, "white mean");
  flag(r.black_mean, L.gamma, "black mean");
  flag(r.mixed_mean, L.theta_beta() + L.alpha * L.kappa, "mixed mean");
  flag(r.lambda_n, L.lambda, "criticality location");
  return r;
}

void write_degree_csv(std::ostream& out, const DegreeSequence& seq) {
  out << "white,black\n";
  for (std::size_t i = 0; i < seq.size(); ++i) out << seq.white[i] << ',' << seq.black[i] << '\n';
}

DegreeSequence read_degree_csv(std::istream& in, double tau, double L) {
  DegreeSequence seq;
  std::string line;
  if (!std::getline(in, line) || line != "white,black") throw std::invalid_argument("missing header white,black");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad degree row: " + line);
    seq.white.push_back(std::stoi(line.substr(0, comma)));
    seq.black.push_back(std::stoi(line.substr(comma + 1)));
  }
  seq.scaling = make_scaling(static_cast<std::int64_t>(seq.size()), tau, L);
  arrange(seq);
  check_invariants(seq);
  return seq;
}

}  // namespace hcm
