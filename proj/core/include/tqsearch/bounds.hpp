#pragma once

#include <cstdint>
#include <string>

#include "tqsearch/channel.hpp"

namespace tq {

enum class BoundMethod { ExactEnumeration, MonteCarlo, GaussianApprox };

std::string to_string(BoundMethod m);

// One evaluated bound. For the excess-probability bound the three term_*
// fields sum to raw_value exactly and value = min(raw_value, 1). For the
// resolution bound value is the -log delta cap in nats and q_psi carries the
// quantile it was built from.
struct BoundReport {
  std::string kind;
  BoundMethod method = BoundMethod::MonteCarlo;
  double value = 0.0;
  double raw_value = 0.0;
  double sigma = 0.0;          // Monte Carlo standard error on value
  long long samples = 0;

  double term_codebook = 0.0;  // 4n exp(-2 M^d eta^2)
  double term_threshold = 0.0; // factor * (k+1) 2^k exp(-gamma)
  double term_tail = 0.0;      // factor * tail_prob
  double change_of_measure = 0.0;
  double tail_prob = 0.0;
  double eta = 0.0;
  double gamma = 0.0;

  double q_psi = 0.0;
  double prob_level = 0.0;
  double beta = 0.0;
  double kappa = 0.0;
};

struct AchievabilityParams {
  long long n = 0;
  int k = 1;
  int d = 1;
  double M = 2.0;       // may exceed integer range in analysis sweeps
  double p = 0.5;
  double eta = -1.0;    // <= 0 selects sqrt(d log M / (2 M^d))
  double gamma = 1.0;
  BoundMethod method = BoundMethod::MonteCarlo;
  long long samples = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  double enumeration_cap = 5e7;
};

// Excess-probability bound for a random codebook at resolution 1/M:
// 4n exp(-2 M^d eta^2)
//   + exp(n mu eta c(f(p))) * ((k+1) 2^k exp(-gamma) + max_t tail(t)).
BoundReport achievability_excess_bound(const NoiseModel& noise,
                                       const AchievabilityParams& params);

struct ConverseParams {
  long long n = 0;
  int k = 1;
  int d = 1;
  double eps = 0.1;
  double p_query = 0.5;
  double beta = -1.0;   // <= 0 selects 1/sqrt(n)
  double kappa = -1.0;  // <= 0 selects 1/sqrt(n)
  BoundMethod method = BoundMethod::MonteCarlo;
  long long samples = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
};

// Cap on -log delta* at constant per-query size p_query:
// (Q_psi - log kappa - d k log beta) / (d k), with Q_psi the largest score
// whose lower-tail probability stays within eps + 2 k^2 d beta + kappa.
BoundReport converse_resolution_bound(const NoiseModel& noise,
                                      const ConverseParams& params);

struct ImpliedResolution {
  double neg_log_delta = 0.0;  // log of the largest admissible integer M
  double log_m = 0.0;          // continuous solution of bound = eps
  double tail_at_solution = 0.0;
  double sigma = 0.0;          // quantile spread of the solution, in nats
  long long samples = 0;
};

// Largest -log(1/M) whose excess-probability bound stays at or below eps,
// searched in log M with the default eta and a shared Monte Carlo draw.
ImpliedResolution achievability_implied_neg_log_delta(
    const NoiseModel& noise, long long n, int k, int d, double eps, double p,
    double gamma, long long samples = 100000, std::uint64_t seed = 1,
    int threads = 1);

}  // namespace tq
