#pragma once

#include <functional>
#include <span>
#include <vector>

namespace loctime {

struct Summary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double se = 0.0;        // standard error of the mean
  std::size_t count = 0;
};

Summary summarize(std::span<const double> xs);
double quantile(std::vector<double> xs, double p);

// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// p-values use the asymptotic distribution with Stephens' correction
// (sqrt(n) + 0.12 + 0.11/sqrt(n)) D.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf);

double standard_normal_cdf(double x);

}  // namespace loctime
