#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tqsearch/channel.hpp"

namespace tq {

struct InfoDensityStats {
  std::uint32_t J = 0;  // subset bitmask over [t]
  double C = 0.0;       // mean of the density (nats)
  double V = 0.0;       // variance (nats^2)
  double T = 0.0;       // third absolute central moment (nats^3)
};

struct RacReport {
  bool permutation_invariant = false;
  bool reducible = false;
  bool friendly = false;
  bool interference = false;
  double permutation_deviation = 0.0;
  double reducibility_deviation = 0.0;
  double friendliness_margin = 0.0;    // min over s of lhs - rhs
  double interference_deviation = 0.0; // min over s of the best witness gap
  std::string witness;                 // filled for the first failing check

  bool all_hold() const {
    return permutation_invariant && reducible && friendly && interference;
  }
};

// t-user OR multiple-access model: inputs i.i.d. Bern(p), output through the
// noise channel at level f(p) applied to the OR of the inputs. Inputs and
// subsets are bitmasks over [t]; bit i stands for user i+1.
class OrMac {
 public:
  OrMac(const NoiseModel& noise, double p, int t);

  const NoiseModel& noise() const { return *noise_; }
  double p() const { return p_; }
  int t() const { return t_; }
  std::uint32_t full_mask() const { return full_; }

  static int or_reduce(std::uint32_t x_mask) { return x_mask != 0 ? 1 : 0; }
  static int or_reduce(const std::vector<int>& x);

  double channel_prob(int z, int y) const;  // P^{f(p)}(y|z)
  double joint_prob(std::uint32_t x_mask, int y) const;
  double output_prob(int y) const;
  double cond_prob_given_subset(std::uint32_t J_mask, std::uint32_t xJ_mask, int y) const;

  // log P(y | x) - log P(y | x_J); +inf is a distinguished value for
  // zero denominator with positive numerator.
  double info_density(std::uint32_t J_mask, std::uint32_t x_mask, int y) const;

  InfoDensityStats moments(std::uint32_t J_mask, int cap = 16) const;

  // min over nonempty proper J of C_J/(t-|J|) - C_0/t, the per-unknown-user
  // information surplus that makes threshold decoding work; +inf when t = 1.
  double kappa_margin(int cap = 16) const;

 private:
  const NoiseModel* noise_;
  double p_;
  int t_;
  std::uint32_t full_;
};

RacReport verify_rac_assumptions(const NoiseModel& noise, double p, int t);

}  // namespace tq
