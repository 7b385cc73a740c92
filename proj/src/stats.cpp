#include "hcm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hcm {

double l2_norm_sq(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

double l2_norm(const std::vector<double>& v) { return std::sqrt(l2_norm_sq(v)); }

double l22_norm(const std::vector<std::pair<double, double>>& w) {
  double s = 0;
  for (const auto& [x, y] : w) s += x * x + y * y;
  return std::sqrt(s);
}

std::vector<double> ord(std::vector<double> v) {
  std::stable_sort(v.begin(), v.end(), std::greater<>());
  return v;
}

bool is_ordered(const std::vector<double>& v) {
  return std::is_sorted(v.begin(), v.end(), std::greater<>());
}

double kolmogorov_tail(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0, sign = 1;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  const double m = std::sqrt(na * nb / (na + nb));
  r.p_value = kolmogorov_tail((m + 0.12 + 0.11 / m) * d);
  return r;
}

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe r;
  if (v.empty()) return r;
  const double n = static_cast<double>(v.size());
  for (double x : v) r.mean += x;
  r.mean /= n;
  if (v.size() > 1) {
    for (double x : v) r.variance += (x - r.mean) * (x - r.mean);
    r.variance /= n - 1.0;
  }
  r.se = std::sqrt(r.variance / n);
  return r;
}

}  // namespace hcm
