#pragma once

#include <utility>
#include <vector>

namespace hcm {

double l2_norm_sq(const std::vector<double>& v);
double l2_norm(const std::vector<double>& v);
// (sum x_i^2 + y_i^2)^{1/2}
double l22_norm(const std::vector<std::pair<double, double>>& w);

// Non-increasing rearrangement; ties keep input order.
std::vector<double> ord(std::vector<double> v);
bool is_ordered(const std::vector<double>& v);

struct KsResult {
  double statistic = 0;
  double p_value = 1;
};

// Two-sample Kolmogorov-Smirnov with the asymptotic Kolmogorov tail and the
// usual small-sample correction lambda = (sqrt(m) + 0.12 + 0.11/sqrt(m)) D,
// m = n1 n2 / (n1 + n2).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
// Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
double kolmogorov_tail(double lambda);

struct MeanSe {
  double mean = 0;
  double variance = 0;  // unbiased
  double se = 0;        // sqrt(variance / n)
};
MeanSe mean_se(const std::vector<double>& v);

}  // namespace hcm
