#include "quermass/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace quermass {

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  out.n = static_cast<long>(xs.size());
  if (out.n == 0) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(out.n);
  if (out.n < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / (static_cast<double>(out.n) * static_cast<double>(out.n - 1)));
  return out;
}

namespace {

// Lower incomplete gamma by series, upper by continued fraction (the usual
// numerical-recipes split at x = a + 1).
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q domain");
  if (x == 0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_sf(double stat, int dof) {
  if (dof <= 0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * stat);
}

ChiSquareResult chi_square_poisson(const std::vector<long>& samples, double mean,
                                   double min_expected) {
  ChiSquareResult out;
  out.n_samples = static_cast<long>(samples.size());
  if (samples.empty()) return out;
  const double n = static_cast<double>(samples.size());

  long k_max = 0;
  for (long s : samples) k_max = std::max(k_max, s);

  // Poisson pmf over 0..k_max, remainder mass in an overflow bin.
  std::vector<double> pmf(static_cast<std::size_t>(k_max) + 2, 0.0);
  double p = std::exp(-mean);
  double tail = 1.0;
  for (long k = 0; k <= k_max; ++k) {
    pmf[static_cast<std::size_t>(k)] = p;
    tail -= p;
    p *= mean / static_cast<double>(k + 1);
  }
  pmf[static_cast<std::size_t>(k_max) + 1] = std::max(tail, 0.0);

  std::vector<double> observed(pmf.size(), 0.0);
  for (long s : samples) observed[static_cast<std::size_t>(s)] += 1.0;

  // Merge left tail upward and right tail downward until every bin carries
  // at least min_expected expected counts.
  std::vector<double> exp_bins, obs_bins;
  double acc_e = 0.0, acc_o = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    acc_e += pmf[k] * n;
    acc_o += observed[k];
    if (acc_e >= min_expected) {
      exp_bins.push_back(acc_e);
      obs_bins.push_back(acc_o);
      acc_e = acc_o = 0.0;
    }
  }
  if (acc_e > 0 || acc_o > 0) {
    if (exp_bins.empty()) {
      exp_bins.push_back(acc_e);
      obs_bins.push_back(acc_o);
    } else {
      exp_bins.back() += acc_e;
      obs_bins.back() += acc_o;
    }
  }
  if (exp_bins.size() < 2) {
    out.dof = 0;
    out.p_value = 1.0;
    return out;
  }
  double stat = 0.0;
  for (std::size_t k = 0; k < exp_bins.size(); ++k)
    stat += (obs_bins[k] - exp_bins[k]) * (obs_bins[k] - exp_bins[k]) / exp_bins[k];
  out.stat = stat;
  out.dof = static_cast<int>(exp_bins.size()) - 1;
  out.p_value = chi_square_sf(stat, out.dof);
  return out;
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  KsResult out;
  out.n_samples = static_cast<long>(samples.size());
  if (samples.empty()) return out;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  out.stat = d;
  const double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * t * t);
    q += term;
    if (std::abs(term) < 1e-12) break;
  }
  out.p_value = std::clamp(q, 0.0, 1.0);
  return out;
}

}  // namespace quermass
