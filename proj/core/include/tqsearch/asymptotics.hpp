#pragma once

#include <vector>

#include "tqsearch/channel.hpp"

namespace tq {

// h_b in nats; h_b(0) = h_b(1) = 0 by continuity.
double binary_entropy(double x);

double gaussian_cdf(double x);

// Rational approximation plus one Newton polish; |cdf(quantile(e)) - e| <= 1e-8.
double gaussian_quantile(double eps);

struct CapacityResult {
  int k = 0;
  double value = 0.0;                    // C(k) in nats
  std::vector<double> maximizers;        // p* values, ascending
  std::vector<double> v_at_maximizers;   // V_0(p*, k) per maximizer
  int grid = 0;
  int refine_iterations = 0;
  double tol = 0.0;
};

// C_0(p, k): mean of the unconditional information density.
double c_empty(const NoiseModel& noise, double p, int k);

// max over p in (0,1) of C_0(p, k): dense grid then golden-section refinement
// on every local-max bracket until the bracket is narrower than tol.
CapacityResult capacity(const NoiseModel& noise, int k, double tol = 1e-8,
                        int grid = 256);

// V(k, eps): min over capacity maximizers for eps <= 1/2, max otherwise.
double dispersion(const NoiseModel& noise, int k, double eps, double tol = 1e-8,
                  int grid = 256);

enum class RemainderMode { MinusHalfLogN, PlusHalfLogN, Zero };

struct ResolutionEstimate {
  double neg_log_delta = 0.0;  // nats
  bool achievable = false;     // false when the estimate is not positive
};

ResolutionEstimate second_order_resolution(const NoiseModel& noise, long long n, int k,
                                           int d, double eps,
                                           RemainderMode mode = RemainderMode::MinusHalfLogN);

// Asymptotic excess-resolution probability at resolution decay rate R nats
// per query. Degenerates to a step function when the dispersion vanishes.
double phase_transition_prob(const NoiseModel& noise, long long n, int k, int d,
                             double rate);

struct RateIdentityViolation {
  double p = 0.0;
  int t = 0;
  double deviation = 0.0;
};

struct RateIdentityReport {
  bool holds = false;
  double lhs = 0.0;             // max_p min_t C_0(p,t)/(d t)
  double rhs = 0.0;             // C(k)/(d k)
  double max_deviation = 0.0;   // worst min_t C_0(p,t)/t vs C_0(p,k)/k gap on the grid
  std::vector<RateIdentityViolation> violations;
};

RateIdentityReport verify_rate_identity(const NoiseModel& noise, int k, int d,
                                        int grid = 99);

}  // namespace tq
