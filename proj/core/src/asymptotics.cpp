#include "tqsearch/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "tqsearch/errors.hpp"
#include "tqsearch/ormac.hpp"

namespace tq {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

// Acklam's inverse normal CDF approximation.
double quantile_seed(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw contract_error("binary_entropy argument must lie in [0, 1]");
  }
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
}

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double gaussian_quantile(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw contract_error("gaussian_quantile argument must lie in (0, 1)");
  }
  double x = quantile_seed(eps);
  double err = gaussian_cdf(x) - eps;
  double pdf = std::exp(-0.5 * x * x) / kSqrt2Pi;
  if (pdf > 0.0) x -= err / pdf;
  return x;
}

double c_empty(const NoiseModel& noise, double p, int k) {
  return OrMac(noise, p, k).moments(0).C;
}

CapacityResult capacity(const NoiseModel& noise, int k, double tol, int grid) {
  if (k < 1) throw contract_error("k must be at least 1");
  if (!(tol > 0.0)) throw contract_error("tol must be positive");
  if (grid < 8) throw contract_error("grid must have at least 8 points");

  auto value_at = [&](double p) { return c_empty(noise, p, k); };

  const double p_min = 1e-9;
  const double p_max = 1.0 - 1e-9;
  std::vector<double> ps(grid);
  std::vector<double> vs(grid);
  for (int i = 0; i < grid; ++i) {
    ps[i] = static_cast<double>(i + 1) / (grid + 1);
    vs[i] = value_at(ps[i]);
  }

  std::vector<Bracket> brackets;
  for (int i = 0; i < grid; ++i) {
    double left = i > 0 ? vs[i - 1] : -1.0;
    double right = i + 1 < grid ? vs[i + 1] : -1.0;
    if (vs[i] >= left && vs[i] >= right) {
      brackets.push_back({i > 0 ? ps[i - 1] : p_min, i + 1 < grid ? ps[i + 1] : p_max});
    }
  }

  const double inv_phi = 0.6180339887498949;
  CapacityResult result;
  result.k = k;
  result.grid = grid;
  result.tol = tol;

  std::vector<std::pair<double, double>> peaks;
  for (const auto& br : brackets) {
    double a = br.lo, b = br.hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = value_at(x1);
    double f2 = value_at(x2);
    while (b - a > tol) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = value_at(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = value_at(x1);
      }
      ++result.refine_iterations;
    }
    double p_hat = 0.5 * (a + b);
    peaks.emplace_back(p_hat, value_at(p_hat));
  }

  double best = 0.0;
  for (const auto& [p_hat, v] : peaks) best = std::max(best, v);
  result.value = best;

  std::sort(peaks.begin(), peaks.end());
  for (const auto& [p_hat, v] : peaks) {
    if (v < best - tol) continue;
    if (!result.maximizers.empty() &&
        p_hat - result.maximizers.back() <= std::max(tol * 16.0, 1e-7)) {
      continue;
    }
    result.maximizers.push_back(p_hat);
    result.v_at_maximizers.push_back(OrMac(noise, p_hat, k).moments(0).V);
  }
  return result;
}

double dispersion(const NoiseModel& noise, int k, double eps, double tol, int grid) {
  if (!(eps > 0.0 && eps < 1.0)) throw contract_error("eps must lie in (0, 1)");
  auto cap = capacity(noise, k, tol, grid);
  double v = cap.v_at_maximizers.front();
  for (double cand : cap.v_at_maximizers) {
    v = eps <= 0.5 ? std::min(v, cand) : std::max(v, cand);
  }
  return v;
}

ResolutionEstimate second_order_resolution(const NoiseModel& noise, long long n, int k,
                                           int d, double eps, RemainderMode mode) {
  if (n < 1) throw contract_error("n must be at least 1");
  if (k < 1 || d < 1) throw contract_error("k and d must be at least 1");
  if (!(eps > 0.0 && eps < 1.0)) throw contract_error("eps must lie in (0, 1)");

  double C = capacity(noise, k).value;
  double V = dispersion(noise, k, eps);
  double r = 0.0;
  switch (mode) {
    case RemainderMode::MinusHalfLogN:
      r = -0.5 * std::log(static_cast<double>(n));
      break;
    case RemainderMode::PlusHalfLogN:
      r = 0.5 * std::log(static_cast<double>(n));
      break;
    case RemainderMode::Zero:
      r = 0.0;
      break;
  }
  ResolutionEstimate est;
  est.neg_log_delta =
      (n * C + std::sqrt(n * V) * gaussian_quantile(eps) + r) / (d * k);
  est.achievable = est.neg_log_delta > 0.0;
  return est;
}

double phase_transition_prob(const NoiseModel& noise, long long n, int k, int d,
                             double rate) {
  if (n < 1) throw contract_error("n must be at least 1");
  if (k < 1 || d < 1) throw contract_error("k and d must be at least 1");
  double C = capacity(noise, k).value;
  double V = dispersion(noise, k, 0.25);
  double threshold = C / (d * k);
  if (V <= 0.0) {
    if (rate > threshold) return 1.0;
    if (rate < threshold) return 0.0;
    return 0.5;
  }
  double nn = static_cast<double>(n);
  return gaussian_cdf((d * k * nn * rate - nn * C) / std::sqrt(nn * V));
}

RateIdentityReport verify_rate_identity(const NoiseModel& noise, int k, int d,
                                        int grid) {
  if (k < 1 || k > 6) throw contract_error("rate identity check supports k in [1, 6]");
  if (d < 1) throw contract_error("d must be at least 1");
  if (grid < 2) throw contract_error("grid must have at least 2 points");

  RateIdentityReport report;
  for (int i = 1; i <= grid; ++i) {
    double p = static_cast<double>(i) / (grid + 1);
    double at_k = c_empty(noise, p, k) / k;
    for (int t = 1; t <= k; ++t) {
      double at_t = c_empty(noise, p, t) / t;
      double deviation = at_k - at_t;  // positive iff t beats k as the minimum
      report.max_deviation = std::max(report.max_deviation, deviation);
      if (deviation > 1e-10) {
        report.violations.push_back({p, t, deviation});
      }
    }
  }

  auto min_rate = [&](double p) {
    double best = c_empty(noise, p, 1) / 1.0;
    for (int t = 2; t <= k; ++t) best = std::min(best, c_empty(noise, p, t) / t);
    return best / d;
  };

  const double tol = 1e-8;
  const double inv_phi = 0.6180339887498949;
  double best_lo = 1e-9, best_hi = 1.0 - 1e-9, best_v = 0.0;
  for (int i = 1; i <= 256; ++i) {
    double p = static_cast<double>(i) / 257.0;
    double v = min_rate(p);
    if (v > best_v) {
      best_v = v;
      best_lo = std::max(1e-9, p - 1.0 / 257.0);
      best_hi = std::min(1.0 - 1e-9, p + 1.0 / 257.0);
    }
  }
  double a = best_lo, b = best_hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = min_rate(x1), f2 = min_rate(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = min_rate(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = min_rate(x1);
    }
  }
  report.lhs = min_rate(0.5 * (a + b));
  report.rhs = capacity(noise, k).value / (d * k);
  report.holds = report.violations.empty() && std::abs(report.lhs - report.rhs) <= 1e-6;
  return report;
}

}  // namespace tq
