#include "tqsearch/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <vector>

#include "tqsearch/asymptotics.hpp"
#include "tqsearch/errors.hpp"
#include "tqsearch/ormac.hpp"
#include "tqsearch/parallel.hpp"
#include "tqsearch/procedure.hpp"
#include "tqsearch/rng.hpp"

namespace tq {

namespace {

constexpr int kShards = 64;

std::string format_count(double v) {
  char buf[40];
  if (v < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.3e", v);
  }
  return buf;
}

// Per-symbol outcome categories (x mask, y) with positive probability for t
// true rows at parameter p, with the accumulated-density value of every
// proper subset J at each category.
struct SymbolTable {
  int t = 0;
  std::vector<double> prob;
  std::vector<double> logp;
  std::vector<std::uint32_t> j_masks;
  std::vector<int> j_unknown;            // t - |J|
  std::vector<std::vector<double>> val;  // val[j][category]
};

SymbolTable build_symbol_table(const NoiseModel& noise, double p, int t) {
  OrMac mac(noise, p, t);
  SymbolTable st;
  st.t = t;
  for (std::uint32_t J = 0; J + 1 < (1u << t); ++J) {
    st.j_masks.push_back(J);
    st.j_unknown.push_back(t - std::popcount(J));
    st.val.emplace_back();
  }
  int ny = noise.output_size();
  for (std::uint32_t x = 0; x < (1u << t); ++x) {
    for (int y = 0; y < ny; ++y) {
      double pr = mac.joint_prob(x, y);
      if (pr <= 0.0) continue;
      st.prob.push_back(pr);
      st.logp.push_back(std::log(pr));
      for (std::size_t j = 0; j < st.j_masks.size(); ++j) {
        st.val[j].push_back(mac.info_density(st.j_masks[j], x, y));
      }
    }
  }
  return st;
}

void multinomial_counts(Rng& rng, long long n, const std::vector<double>& prob,
                        std::vector<long long>& out) {
  const std::size_t m = prob.size();
  out.assign(m, 0);
  long long rem = n;
  double rem_p = 1.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (rem == 0) break;
    double q = rem_p > 0.0 ? std::clamp(prob[i] / rem_p, 0.0, 1.0) : 1.0;
    std::binomial_distribution<long long> bin(rem, q);
    out[i] = bin(rng);
    rem -= out[i];
    rem_p -= prob[i];
  }
  out[m - 1] = rem;
}

// Per-sample minimum over J of (S_J - gamma) / (d * (t - |J|)): the level of
// log M at which the sample starts failing some threshold.
void sample_critical_logm(const SymbolTable& st, long long n, int d, double gamma,
                          long long samples, std::uint64_t seed, int threads,
                          std::vector<double>& crit) {
  crit.assign(samples, 0.0);
  parallel_for(kShards, threads, [&](std::size_t shard) {
    long long lo = samples * static_cast<long long>(shard) / kShards;
    long long hi = samples * (static_cast<long long>(shard) + 1) / kShards;
    if (lo >= hi) return;
    Rng rng(mix_seed(seed, 1000 + shard));
    std::vector<long long> counts;
    for (long long s = lo; s < hi; ++s) {
      multinomial_counts(rng, n, st.prob, counts);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < st.val.size(); ++j) {
        double sum = 0.0;
        const auto& v = st.val[j];
        for (std::size_t c = 0; c < v.size(); ++c) {
          if (counts[c] != 0) sum += v[c] * counts[c];
        }
        best = std::min(best, (sum - gamma) / (d * st.j_unknown[j]));
      }
      crit[s] = best;
    }
  });
}

double mc_tail(const SymbolTable& st, long long n, int d, double logm, double gamma,
               long long samples, std::uint64_t seed, int threads, bool skip_empty,
               double& sigma) {
  std::vector<long long> fails(kShards, 0);
  parallel_for(kShards, threads, [&](std::size_t shard) {
    long long lo = samples * static_cast<long long>(shard) / kShards;
    long long hi = samples * (static_cast<long long>(shard) + 1) / kShards;
    if (lo >= hi) return;
    Rng rng(mix_seed(seed, 1000 + shard));
    std::vector<long long> counts;
    for (long long s = lo; s < hi; ++s) {
      multinomial_counts(rng, n, st.prob, counts);
      for (std::size_t j = 0; j < st.val.size(); ++j) {
        if (skip_empty && st.j_masks[j] == 0) continue;
        double thr = d * st.j_unknown[j] * logm + gamma;
        double sum = 0.0;
        const auto& v = st.val[j];
        for (std::size_t c = 0; c < v.size(); ++c) {
          if (counts[c] != 0) sum += v[c] * counts[c];
        }
        if (sum <= thr) {
          ++fails[shard];
          break;
        }
      }
    }
  });
  long long total = 0;
  for (long long f : fails) total += f;
  double tail = static_cast<double>(total) / samples;
  sigma = std::sqrt(std::max(tail * (1.0 - tail), 0.0) / samples);
  return tail;
}

double exact_tail(const SymbolTable& st, long long n, int d, double logm,
                  double gamma, double cap) {
  const int m = static_cast<int>(st.prob.size());
  double comps = tuple_count(n + m - 1, m - 1);
  if (!(comps <= cap)) {
    throw resource_error("exact enumeration needs " + format_count(comps) +
                         " compositions, over the cap of " + format_count(cap));
  }
  const std::size_t nj = st.val.size();
  std::vector<double> thr(nj);
  for (std::size_t j = 0; j < nj; ++j) {
    thr[j] = d * st.j_unknown[j] * logm + gamma;
  }
  const double lg_n1 = std::lgamma(static_cast<double>(n) + 1.0);
  std::vector<double> sums(nj, 0.0);
  double total = 0.0;

  auto rec = [&](auto&& self, int idx, long long rem, double acc) -> void {
    if (idx == m - 1) {
      double leaf = acc + rem * st.logp[idx] - std::lgamma(rem + 1.0);
      bool fail = false;
      for (std::size_t j = 0; j < nj && !fail; ++j) {
        if (sums[j] + rem * st.val[j][idx] <= thr[j]) fail = true;
      }
      if (fail) total += std::exp(lg_n1 + leaf);
      return;
    }
    for (long long c = 0; c <= rem; ++c) {
      double acc2 = acc + c * st.logp[idx] - std::lgamma(c + 1.0);
      if (c > 0) {
        for (std::size_t j = 0; j < nj; ++j) sums[j] += c * st.val[j][idx];
      }
      self(self, idx + 1, rem - c, acc2);
      if (c > 0) {
        for (std::size_t j = 0; j < nj; ++j) sums[j] -= c * st.val[j][idx];
      }
    }
  };
  if (m == 1) {
    std::vector<double> one(nj, 0.0);
    bool fail = false;
    for (std::size_t j = 0; j < nj; ++j) {
      if (n * st.val[j][0] <= thr[j]) fail = true;
    }
    return fail ? 1.0 : 0.0;
  }
  rec(rec, 0, n, 0.0);
  return std::clamp(total, 0.0, 1.0);
}

// Converse per-symbol categories: Z ~ Bern(1-(1-p)^k) through the level-f(p)
// law, with values log P(y|z) - log P_Y(y).
struct ConverseTable {
  std::vector<double> prob;
  std::vector<double> val;
  double C = 0.0, V = 0.0, T = 0.0;
};

ConverseTable build_converse_table(const NoiseModel& noise, double p, int k) {
  double alpha = 1.0 - std::pow(1.0 - p, k);
  int ny = noise.output_size();
  ConverseTable ct;
  std::vector<double> py(ny, 0.0);
  for (int z = 0; z < 2; ++z) {
    double pz = z == 0 ? 1.0 - alpha : alpha;
    for (int y = 0; y < ny; ++y) py[y] += pz * noise.transition_prob(p, z, y);
  }
  for (int z = 0; z < 2; ++z) {
    double pz = z == 0 ? 1.0 - alpha : alpha;
    for (int y = 0; y < ny; ++y) {
      double pr = pz * noise.transition_prob(p, z, y);
      if (pr <= 0.0) continue;
      ct.prob.push_back(pr);
      ct.val.push_back(std::log(noise.transition_prob(p, z, y)) - std::log(py[y]));
    }
  }
  for (std::size_t c = 0; c < ct.prob.size(); ++c) ct.C += ct.prob[c] * ct.val[c];
  for (std::size_t c = 0; c < ct.prob.size(); ++c) {
    double dlt = ct.val[c] - ct.C;
    ct.V += ct.prob[c] * dlt * dlt;
    ct.T += ct.prob[c] * std::abs(dlt * dlt * dlt);
  }
  return ct;
}

}  // namespace

std::string to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::ExactEnumeration:
      return "exact-enumeration";
    case BoundMethod::MonteCarlo:
      return "monte-carlo";
    case BoundMethod::GaussianApprox:
      return "gaussian-approx";
  }
  return "unknown";
}

BoundReport achievability_excess_bound(const NoiseModel& noise,
                                       const AchievabilityParams& pp) {
  if (pp.n < 1) throw contract_error("n must be at least 1");
  if (pp.k < 1 || pp.k > 16) throw contract_error("k must lie in [1, 16]");
  if (pp.d < 1) throw contract_error("d must be at least 1");
  if (!(pp.M >= 1.0)) throw contract_error("M must be at least 1");
  if (!(pp.p > 0.0 && pp.p < 1.0)) throw contract_error("p must lie in (0, 1)");
  if (!(pp.gamma > 0.0)) throw contract_error("gamma must be positive");
  if (pp.samples < 1) throw contract_error("sample count must be positive");

  const double logm = std::log(pp.M);
  const double m_pow_d = std::pow(pp.M, pp.d);
  const bool default_eta = !(pp.eta > 0.0);
  if (default_eta && !(logm > 0.0)) {
    throw contract_error("default eta degenerates at M=1; pass eta explicitly");
  }
  // at huge M the default eta underflows to 0; term1 stays exact in log form
  double eta = default_eta ? std::sqrt(pp.d * logm / (2.0 * m_pow_d)) : pp.eta;
  double term1 = default_eta
                     ? 4.0 * pp.n * std::exp(-pp.d * logm)
                     : 4.0 * pp.n * std::exp(-2.0 * m_pow_d * eta * eta);

  const double mu = noise.mu();
  double factor = 1.0;
  if (mu > 0.0 && eta > 0.0) {
    factor = std::exp(pp.n * mu * eta * noise.continuity_constant(pp.p));
  }

  double tail = 0.0;
  double sigma_tail = 0.0;
  for (int t = 1; t <= pp.k; ++t) {
    SymbolTable st = build_symbol_table(noise, pp.p, t);
    double tt = 0.0, ts = 0.0;
    switch (pp.method) {
      case BoundMethod::MonteCarlo:
        tt = mc_tail(st, pp.n, pp.d, logm, pp.gamma, pp.samples,
                     mix_seed(pp.seed, t), pp.threads, false, ts);
        break;
      case BoundMethod::ExactEnumeration:
        tt = exact_tail(st, pp.n, pp.d, logm, pp.gamma, pp.enumeration_cap);
        break;
      case BoundMethod::GaussianApprox: {
        auto mom = OrMac(noise, pp.p, t).moments(0);
        if (!(mom.V > 0.0)) {
          throw contract_error(
              "gaussian approximation unavailable: zero dispersion at t=" +
              std::to_string(t));
        }
        double thr = pp.d * t * logm + pp.gamma;
        double g = gaussian_cdf((thr - pp.n * mom.C) / std::sqrt(pp.n * mom.V)) +
                   6.0 * mom.T / (std::sqrt(static_cast<double>(pp.n)) *
                                  std::pow(mom.V, 1.5));
        double u = 0.0;
        if (t >= 2) {
          u = mc_tail(st, pp.n, pp.d, logm, pp.gamma, pp.samples,
                      mix_seed(pp.seed, t), pp.threads, true, ts);
        }
        tt = std::clamp(g + u, 0.0, 1.0);
        break;
      }
    }
    if (tt > tail) {
      tail = tt;
      sigma_tail = ts;
    }
  }

  BoundReport rep;
  rep.kind = "achievability";
  rep.method = pp.method;
  rep.samples = pp.method == BoundMethod::ExactEnumeration ? 0 : pp.samples;
  rep.eta = eta;
  rep.gamma = pp.gamma;
  rep.change_of_measure = factor;
  rep.tail_prob = tail;
  rep.term_codebook = term1;
  rep.term_threshold =
      factor * (pp.k + 1.0) * std::pow(2.0, pp.k) * std::exp(-pp.gamma);
  rep.term_tail = factor * tail;
  rep.raw_value = rep.term_codebook + rep.term_threshold + rep.term_tail;
  rep.value = std::min(rep.raw_value, 1.0);
  rep.sigma = factor * sigma_tail;
  return rep;
}

BoundReport converse_resolution_bound(const NoiseModel& noise,
                                      const ConverseParams& cp) {
  if (cp.n < 1) throw contract_error("n must be at least 1");
  if (cp.k < 1) throw contract_error("k must be at least 1");
  if (cp.d < 1) throw contract_error("d must be at least 1");
  if (!(cp.eps > 0.0 && cp.eps < 1.0)) throw contract_error("eps must lie in (0, 1)");
  if (!(cp.p_query > 0.0 && cp.p_query < 1.0)) {
    throw contract_error("query size must lie in (0, 1)");
  }
  if (cp.samples < 1) throw contract_error("sample count must be positive");

  const double beta = cp.beta > 0.0 ? cp.beta : 1.0 / std::sqrt(cp.n);
  const double kappa = cp.kappa > 0.0 ? cp.kappa : 1.0 / std::sqrt(cp.n);
  if (!(beta <= cp.eps / 2.0 + 1e-15)) {
    throw contract_error("beta must lie in (0, eps/2]");
  }
  const double slack = 1.0 - cp.eps - 2.0 * cp.k * cp.k * cp.d * beta;
  if (!(kappa < slack)) {
    throw contract_error("kappa must lie in (0, 1 - eps - 2 k^2 d beta)");
  }
  const double q = cp.eps + 2.0 * cp.k * cp.k * cp.d * beta + kappa;

  ConverseTable ct = build_converse_table(noise, cp.p_query, cp.k);
  double Q = 0.0;
  double sigma_q = 0.0;
  if (cp.method == BoundMethod::GaussianApprox) {
    double z = gaussian_quantile(q);
    double w = z;
    if (ct.V > 0.0) {
      w += ct.T / (6.0 * std::sqrt(static_cast<double>(cp.n)) * std::pow(ct.V, 1.5)) *
           (z * z - 1.0);
      Q = cp.n * ct.C + std::sqrt(cp.n * ct.V) * w;
    } else {
      Q = cp.n * ct.C;
    }
  } else if (cp.method == BoundMethod::MonteCarlo) {
    std::vector<double> sums(cp.samples, 0.0);
    parallel_for(kShards, cp.threads, [&](std::size_t shard) {
      long long lo = cp.samples * static_cast<long long>(shard) / kShards;
      long long hi = cp.samples * (static_cast<long long>(shard) + 1) / kShards;
      if (lo >= hi) return;
      Rng rng(mix_seed(cp.seed, 2000 + shard));
      std::vector<long long> counts;
      for (long long s = lo; s < hi; ++s) {
        multinomial_counts(rng, cp.n, ct.prob, counts);
        double sum = 0.0;
        for (std::size_t c = 0; c < counts.size(); ++c) {
          if (counts[c] != 0) sum += ct.val[c] * counts[c];
        }
        sums[s] = sum;
      }
    });
    std::sort(sums.begin(), sums.end());
    long long r = std::clamp<long long>(
        static_cast<long long>(std::floor(q * cp.samples)), 1, cp.samples);
    Q = sums[r - 1];
    long long delta = static_cast<long long>(
        std::ceil(3.0 * std::sqrt(cp.samples * q * (1.0 - q))));
    long long hi_r = std::min<long long>(r + delta, cp.samples);
    long long lo_r = std::max<long long>(r - delta, 1);
    sigma_q = (sums[hi_r - 1] - sums[lo_r - 1]) / 6.0;
  } else {
    throw contract_error("exact enumeration is not available for this bound");
  }

  BoundReport rep;
  rep.kind = "converse";
  rep.method = cp.method;
  rep.samples = cp.method == BoundMethod::MonteCarlo ? cp.samples : 0;
  rep.q_psi = Q;
  rep.prob_level = q;
  rep.beta = beta;
  rep.kappa = kappa;
  rep.raw_value =
      (Q - std::log(kappa) - cp.d * cp.k * std::log(beta)) / (cp.d * cp.k);
  rep.value = rep.raw_value;
  rep.sigma = sigma_q / (cp.d * cp.k);
  return rep;
}

ImpliedResolution achievability_implied_neg_log_delta(
    const NoiseModel& noise, long long n, int k, int d, double eps, double p,
    double gamma, long long samples, std::uint64_t seed, int threads) {
  if (n < 1) throw contract_error("n must be at least 1");
  if (k < 1 || k > 16) throw contract_error("k must lie in [1, 16]");
  if (d < 1) throw contract_error("d must be at least 1");
  if (!(eps > 0.0 && eps < 1.0)) throw contract_error("eps must lie in (0, 1)");
  if (!(p > 0.0 && p < 1.0)) throw contract_error("p must lie in (0, 1)");
  if (!(gamma > 0.0)) throw contract_error("gamma must be positive");
  if (samples < 1) throw contract_error("sample count must be positive");

  const double mu = noise.mu();
  const double cont = mu > 0.0 ? noise.continuity_constant(p) : 0.0;
  const double term_gamma = (k + 1.0) * std::pow(2.0, k) * std::exp(-gamma);

  std::vector<std::vector<double>> crit(k);
  for (int t = 1; t <= k; ++t) {
    SymbolTable st = build_symbol_table(noise, p, t);
    sample_critical_logm(st, n, d, gamma, samples, mix_seed(seed, t), threads,
                         crit[t - 1]);
    std::sort(crit[t - 1].begin(), crit[t - 1].end());
  }

  std::vector<double> edges;
  for (const auto& c : crit) edges.insert(edges.end(), c.begin(), c.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  auto bound_below = [&](double x, double& tail_out, int& argmax_t) {
    double tail = 0.0;
    argmax_t = 1;
    for (int t = 1; t <= k; ++t) {
      const auto& c = crit[t - 1];
      double tt = static_cast<double>(std::lower_bound(c.begin(), c.end(), x) -
                                      c.begin()) /
                  samples;
      if (tt > tail) {
        tail = tt;
        argmax_t = t;
      }
    }
    tail_out = tail;
    double term1 = 4.0 * n * std::exp(-d * x);
    double eta = x > 0.0 ? std::sqrt(d * x / 2.0) * std::exp(-d * x / 2.0) : 0.0;
    double factor = mu > 0.0 ? std::exp(n * mu * eta * cont) : 1.0;
    return term1 + factor * (term_gamma + tail);
  };

  ImpliedResolution res;
  res.samples = samples;
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    double x = *it;
    if (!(x > 0.0)) break;
    double tail = 0.0;
    int tstar = 1;
    double b = bound_below(x, tail, tstar);
    if (b <= eps) {
      res.log_m = x;
      res.tail_at_solution = tail;
      const auto& c = crit[tstar - 1];
      long long r = std::lower_bound(c.begin(), c.end(), x) - c.begin();
      double tau = std::clamp(static_cast<double>(r) / samples, 1e-12, 1.0 - 1e-12);
      long long delta = static_cast<long long>(
          std::ceil(3.0 * std::sqrt(samples * tau * (1.0 - tau))));
      long long hi = std::min<long long>(r + delta, samples - 1);
      long long lo = std::max<long long>(r - delta, 0);
      res.sigma = (c[hi] - c[lo]) / 6.0;
      break;
    }
  }
  if (res.log_m < std::log(2.0)) {
    res.neg_log_delta = 0.0;
    res.log_m = std::max(res.log_m, 0.0);
  } else if (res.log_m > 40.0) {
    res.neg_log_delta = res.log_m;
  } else {
    res.neg_log_delta = std::log(std::floor(std::exp(res.log_m)));
  }
  return res;
}

}  // namespace tq
