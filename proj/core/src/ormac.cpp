#include "tqsearch/ormac.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tqsearch/errors.hpp"

namespace tq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_int(long long v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld", v);
  return buf;
}

}  // namespace

OrMac::OrMac(const NoiseModel& noise, double p, int t) : noise_(&noise), p_(p), t_(t) {
  if (!(p > 0.0 && p < 1.0)) throw contract_error("p must lie in (0, 1)");
  if (t < 1 || t > 31) throw contract_error("t must lie in [1, 31]");
  full_ = (1u << t) - 1u;
}

int OrMac::or_reduce(const std::vector<int>& x) {
  for (int v : x) {
    if (v != 0) return 1;
  }
  return 0;
}

double OrMac::channel_prob(int z, int y) const {
  return noise_->transition_prob(p_, z, y);
}

double OrMac::joint_prob(std::uint32_t x_mask, int y) const {
  if (x_mask & ~full_) throw contract_error("input mask has bits outside [t]");
  int ones = std::popcount(x_mask);
  double w = std::pow(p_, ones) * std::pow(1.0 - p_, t_ - ones);
  return w * channel_prob(or_reduce(x_mask), y);
}

double OrMac::output_prob(int y) const {
  return cond_prob_given_subset(0, 0, y);
}

double OrMac::cond_prob_given_subset(std::uint32_t J_mask, std::uint32_t xJ_mask,
                                     int y) const {
  if (J_mask & ~full_) throw contract_error("subset mask has bits outside [t]");
  if (xJ_mask & ~J_mask) throw contract_error("assignment has bits outside the subset");
  if (xJ_mask != 0) return channel_prob(1, y);
  int free_users = t_ - std::popcount(J_mask);
  double w0 = std::pow(1.0 - p_, free_users);
  return w0 * channel_prob(0, y) + (1.0 - w0) * channel_prob(1, y);
}

double OrMac::info_density(std::uint32_t J_mask, std::uint32_t x_mask, int y) const {
  if (x_mask & ~full_) throw contract_error("input mask has bits outside [t]");
  double num = channel_prob(or_reduce(x_mask), y);
  double den = cond_prob_given_subset(J_mask, x_mask & J_mask, y);
  if (den > 0.0) {
    if (num > 0.0) return std::log(num) - std::log(den);
    return -kInf;
  }
  if (num > 0.0) return kInf;
  throw contract_error("information density undefined: both conditionals are zero");
}

InfoDensityStats OrMac::moments(std::uint32_t J_mask, int cap) const {
  if (t_ > cap) {
    throw resource_error("exact moment enumeration over 2^" + format_int(t_) +
                         " inputs exceeds the cap of t=" + format_int(cap) +
                         "; use Monte Carlo estimation");
  }
  if (J_mask & ~full_) throw contract_error("subset mask has bits outside [t]");

  std::vector<double> weight_by_ones(t_ + 1);
  for (int c = 0; c <= t_; ++c) {
    weight_by_ones[c] = std::pow(p_, c) * std::pow(1.0 - p_, t_ - c);
  }

  const int ny = noise_->output_size();
  const std::uint32_t cells = full_ + 1u;
  double mean = 0.0;
  for (std::uint32_t x = 0; x < cells; ++x) {
    double wx = weight_by_ones[std::popcount(x)];
    for (int y = 0; y < ny; ++y) {
      double w = wx * channel_prob(or_reduce(x), y);
      if (w <= 0.0) continue;
      mean += w * info_density(J_mask, x, y);
    }
  }
  double var = 0.0;
  double third = 0.0;
  for (std::uint32_t x = 0; x < cells; ++x) {
    double wx = weight_by_ones[std::popcount(x)];
    for (int y = 0; y < ny; ++y) {
      double w = wx * channel_prob(or_reduce(x), y);
      if (w <= 0.0) continue;
      double dev = info_density(J_mask, x, y) - mean;
      var += w * dev * dev;
      third += w * std::abs(dev) * dev * dev;
    }
  }
  InfoDensityStats stats;
  stats.J = J_mask;
  stats.C = mean;
  stats.V = std::max(var, 0.0);
  stats.T = std::max(third, 0.0);
  return stats;
}

double OrMac::kappa_margin(int cap) const {
  if (t_ == 1) return kInf;
  double c0_rate = moments(0, cap).C / t_;
  double margin = kInf;
  for (std::uint32_t J = 1; J < full_; ++J) {
    int unknown = t_ - std::popcount(J);
    double cj_rate = moments(J, cap).C / unknown;
    margin = std::min(margin, cj_rate - c0_rate);
  }
  return margin;
}

RacReport verify_rac_assumptions(const NoiseModel& noise, double p, int t) {
  if (t < 1 || t > 6) {
    throw contract_error("assumption checks enumerate permutations; t must lie in [1, 6]");
  }
  OrMac model(noise, p, t);
  const int ny = noise.output_size();
  const std::uint32_t cells = model.full_mask() + 1u;

  RacReport report;

  double perm_dev = 0.0;
  for (std::uint32_t x = 0; x < cells; ++x) {
    for (int i = 0; i + 1 < t; ++i) {
      std::uint32_t lo = (x >> i) & 1u;
      std::uint32_t hi = (x >> (i + 1)) & 1u;
      std::uint32_t swapped =
          (x & ~((1u << i) | (1u << (i + 1)))) | (hi << i) | (lo << (i + 1));
      for (int y = 0; y < ny; ++y) {
        double a = model.channel_prob(OrMac::or_reduce(x), y);
        double b = model.channel_prob(OrMac::or_reduce(swapped), y);
        perm_dev = std::max(perm_dev, std::abs(a - b));
      }
    }
  }
  report.permutation_deviation = perm_dev;
  report.permutation_invariant = perm_dev <= 1e-12;
  if (!report.permutation_invariant && report.witness.empty()) {
    report.witness = "permutation invariance violated";
  }

  double red_dev = 0.0;
  double friendly_margin = kInf;
  for (int s = 1; s < t; ++s) {
    OrMac reduced(noise, p, s);
    std::uint32_t s_cells = reduced.full_mask() + 1u;
    for (std::uint32_t xs = 0; xs < s_cells; ++xs) {
      for (int y = 0; y < ny; ++y) {
        double with_zeros = model.channel_prob(OrMac::or_reduce(xs), y);
        double collapsed = reduced.channel_prob(OrMac::or_reduce(xs), y);
        red_dev = std::max(red_dev, std::abs(with_zeros - collapsed));
      }
    }
    std::uint32_t tail = model.full_mask() ^ (s_cells - 1u);
    double lhs = reduced.moments(0).C;
    double rhs = model.moments(tail).C;
    friendly_margin = std::min(friendly_margin, lhs - rhs);
  }
  report.reducibility_deviation = red_dev;
  report.reducible = red_dev <= 1e-12;
  if (!report.reducible && report.witness.empty()) {
    report.witness = "reducibility violated";
  }
  report.friendliness_margin = t == 1 ? kInf : friendly_margin;
  report.friendly = t == 1 || friendly_margin >= -1e-12;
  if (!report.friendly && report.witness.empty()) {
    report.witness = "friendliness violated at margin " + std::to_string(friendly_margin);
  }

  double interference_dev = kInf;
  for (int s = 1; s < t; ++s) {
    std::uint32_t head = (1u << s) - 1u;
    std::uint32_t tail = model.full_mask() ^ head;
    double best = 0.0;
    for (int y = 0; y < ny; ++y) {
      double py = model.output_prob(y);
      if (py <= 0.0) continue;
      for (std::uint32_t x = 0; x < cells; ++x) {
        std::uint32_t xs = x & head;
        std::uint32_t xr = x & tail;
        double joint = model.joint_prob(x, y);
        double p_xs_y = 0.0;
        for (std::uint32_t r = 0; r < cells; ++r) {
          if ((r & head) == xs) p_xs_y += model.joint_prob(r, y);
        }
        if (p_xs_y <= 0.0) continue;
        double p_xr_y = 0.0;
        for (std::uint32_t r = 0; r < cells; ++r) {
          if ((r & tail) == xr) p_xr_y += model.joint_prob(r, y);
        }
        double lhs = joint / p_xs_y;
        double rhs = p_xr_y / py;
        best = std::max(best, std::abs(lhs - rhs));
      }
    }
    interference_dev = std::min(interference_dev, best);
  }
  report.interference_deviation = interference_dev;
  report.interference = t == 1 || interference_dev > 1e-10;
  if (!report.interference && report.witness.empty()) {
    report.witness = "interference absent: conditionals coincide within 1e-10";
  }
  return report;
}

}  // namespace tq
