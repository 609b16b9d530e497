#pragma once

#include <functional>
#include <vector>

namespace quermass {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  long n = 0;
};

MeanSe mean_se(const std::vector<double>& xs);

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Survival function of the chi-square distribution with `dof` degrees.
double chi_square_sf(double stat, int dof);

struct ChiSquareResult {
  double stat = 0.0;
  int dof = 0;
  double p_value = 1.0;
  long n_samples = 0;
};

/// Pearson goodness-of-fit of integer samples against Poisson(mean); bins
/// with expected count below `min_expected` are merged into their tail.
ChiSquareResult chi_square_poisson(const std::vector<long>& samples, double mean,
                                   double min_expected = 5.0);

struct KsResult {
  double stat = 0.0;
  double p_value = 1.0;
  long n_samples = 0;
};

/// One-sample Kolmogorov-Smirnov test against a continuous cdf
/// (asymptotic p-value with the standard small-sample correction).
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace quermass
