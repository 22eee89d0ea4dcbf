#include "tqsearch/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqsearch/asymptotics.hpp"
#include "tqsearch/errors.hpp"
#include "tqsearch/parallel.hpp"
#include "tqsearch/rng.hpp"

namespace tq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

nlohmann::json json_number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double number_from_json(const nlohmann::json& j, const char* field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw contract_error(std::string("field '") + field + "' is not a number");
}

}  // namespace

// ceil((1-eps)*runs) computed away from the float boundary so that e.g.
// eps=0.3, runs=1000 lands on index 700 and not 701.
long long quantile_index(double eps, long long runs) {
  double raw = (1.0 - eps) * static_cast<double>(runs);
  long long idx = static_cast<long long>(std::ceil(raw - 1e-9));
  if (idx < 1) idx = 1;
  if (idx > runs) idx = runs;
  return idx;
}

AutoParameters auto_parameters(const NoiseModel& noise, long long n, int k,
                               int d, double eps) {
  if (n < 1) throw contract_error("block length must be at least 1");
  if (k < 1 || k > 16) throw contract_error("target count must be in [1, 16]");
  if (d < 1) throw contract_error("dimension must be at least 1");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw contract_error("excess probability must lie in (0, 1)");
  }
  auto cap = capacity(noise, k);
  if (!(cap.value > 0.0)) {
    throw contract_error("automatic sizing needs positive capacity");
  }
  double v = dispersion(noise, k, eps);
  double nn = static_cast<double>(n);
  double log_m = (nn * cap.value + std::sqrt(nn * v) * gaussian_quantile(eps) -
                  0.5 * std::log(nn)) /
                 (static_cast<double>(d) * k);

  AutoParameters out;
  out.gamma = 0.5 * std::log(nn);
  out.p = cap.maximizers.front();
  if (!(log_m > 0.0)) {
    out.m = 1;
    out.degenerate = true;
    return out;
  }
  if (log_m >= 42.0) {
    throw resource_error("automatic sizing wants log M = " + fmt12(log_m) +
                         " nats per axis, beyond representable grid sizes");
  }
  out.m = static_cast<long long>(std::floor(std::exp(log_m)));
  if (out.m < 1) out.m = 1;
  return out;
}

TrialRecord run_single_trial(const NoiseModel& noise, const CubePartition& part,
                             long long n, int k, double p, double gamma,
                             long long budget, std::uint64_t trial_seed,
                             long long trial_id, const Codebook* shared_codebook,
                             bool timing) {
  auto t0 = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.trial = trial_id;

  Rng target_rng(mix_seed(trial_seed, 11));
  rec.targets.assign(k, std::vector<double>(part.d));
  for (auto& tgt : rec.targets) {
    for (auto& coord : tgt) coord = target_rng.next_double();
  }

  std::optional<Codebook> own;
  const Codebook* cb = shared_codebook;
  if (cb == nullptr) {
    own = Codebook::generate(part.M, part.d, n, p, mix_seed(trial_seed, 12));
    cb = &*own;
  }

  auto oracle = oracle_noiseless(part, *cb, rec.targets);
  rec.k_p = oracle.k_p;

  Rng noise_rng(mix_seed(trial_seed, 13));
  auto y = apply_noise(oracle.z, *cb, noise, noise_rng);

  auto out = decode(y, *cb, part, noise, p, gamma, k, budget);
  rec.m = out.m;
  auto outcome = run_resolution(rec.targets, out, 1.0 / part.M);
  rec.rho = outcome.rho;
  rec.excess = outcome.excess;

  if (timing) {
    rec.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                     .count();
  }
  return rec;
}

ResolutionSummary run_trials(const ExperimentConfig& cfg) {
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) {
    throw contract_error("excess probability must lie in (0, 1)");
  }
  if (cfg.k < 1 || cfg.k > 16) {
    throw contract_error("target count must be in [1, 16]");
  }
  if (cfg.d < 1) throw contract_error("dimension must be at least 1");
  if (cfg.n_list.empty()) throw contract_error("need at least one block length");
  for (long long n : cfg.n_list) {
    if (n < 1) throw contract_error("block lengths must be at least 1");
  }
  if (cfg.runs_per_batch < 1 || cfg.batches < 1) {
    throw contract_error("runs per batch and batches must be at least 1");
  }
  long long total = cfg.runs_per_batch * static_cast<long long>(cfg.batches);
  if (cfg.runs_per_batch > 1000000000LL || cfg.batches > 1000000 ||
      total > 1000000000LL) {
    throw resource_error("trial count " + fmt12(static_cast<double>(total)) +
                         " is beyond what a single run supports");
  }
  if (total < 100) {
    throw contract_error("need at least 100 trials per point; got " +
                         std::to_string(total));
  }
  if (cfg.decode_budget < 1) throw contract_error("decoder budget must be positive");
  if (cfg.m_override < 0) throw contract_error("grid override must be positive");
  if (cfg.p_override >= 0 && !(cfg.p_override > 0.0 && cfg.p_override < 1.0)) {
    throw contract_error("query density override must lie in (0, 1)");
  }

  unsigned threads =
      cfg.threads >= 1 ? static_cast<unsigned>(cfg.threads) : hardware_threads();

  ResolutionSummary summary;
  for (long long n : cfg.n_list) {
    auto t0 = std::chrono::steady_clock::now();

    long long m_cells;
    double gamma, p;
    bool all_overridden =
        cfg.m_override > 0 && cfg.gamma_override >= 0.0 && cfg.p_override > 0.0;
    if (all_overridden) {
      m_cells = cfg.m_override;
      gamma = cfg.gamma_override;
      p = cfg.p_override;
    } else {
      auto ap = auto_parameters(cfg.noise, n, cfg.k, cfg.d, cfg.eps);
      m_cells = cfg.m_override > 0 ? cfg.m_override : ap.m;
      gamma = cfg.gamma_override >= 0.0 ? cfg.gamma_override : ap.gamma;
      p = cfg.p_override > 0.0 ? cfg.p_override : ap.p;
    }
    if (m_cells > std::numeric_limits<int>::max()) {
      throw resource_error("grid size " + std::to_string(m_cells) +
                           " per axis does not fit the partition index");
    }

    CubePartition part(static_cast<int>(m_cells), cfg.d);
    double worst_scan = tuple_count(part.cells(), cfg.k);
    if (worst_scan > static_cast<double>(cfg.decode_budget)) {
      throw resource_error("decoder budget " + std::to_string(cfg.decode_budget) +
                           " cannot cover the " + fmt12(worst_scan) +
                           " tuple scans required at n=" + std::to_string(n));
    }

    auto prediction = second_order_resolution(cfg.noise, n, cfg.k, cfg.d, cfg.eps);

    std::uint64_t point_base = mix_seed(cfg.master_seed, static_cast<std::uint64_t>(n));
    std::optional<Codebook> shared;
    if (cfg.fixed_codebook) {
      shared = Codebook::generate(part.M, part.d, n, p,
                                  mix_seed(point_base, ~0ull));
    }

    std::vector<double> rhos(static_cast<std::size_t>(total));
    std::vector<char> excess(static_cast<std::size_t>(total), 0);
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::atomic<bool> abort{false};
    parallel_for(static_cast<std::size_t>(total), threads, [&](std::size_t i) {
      if (abort.load(std::memory_order_relaxed)) return;
      try {
        auto rec = run_single_trial(cfg.noise, part, n, cfg.k, p, gamma,
                                    cfg.decode_budget, mix_seed(point_base, i),
                                    static_cast<long long>(i),
                                    shared ? &*shared : nullptr, cfg.timing);
        rhos[i] = rec.rho;
        excess[i] = rec.excess ? 1 : 0;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        abort.store(true, std::memory_order_relaxed);
      }
    });
    if (failure) std::rethrow_exception(failure);

    ResolutionPoint pt;
    pt.n = n;
    pt.m_cells = m_cells;
    pt.gamma = gamma;
    pt.p = p;
    pt.eps = cfg.eps;

    long long excess_count = 0;
    for (char e : excess) excess_count += e;
    pt.excess_prob = static_cast<double>(excess_count) / static_cast<double>(total);

    long long idx = quantile_index(cfg.eps, cfg.runs_per_batch);
    pt.delta_hat_batches.resize(cfg.batches);
    for (int b = 0; b < cfg.batches; ++b) {
      auto first = rhos.begin() + static_cast<std::size_t>(b) * cfg.runs_per_batch;
      std::vector<double> batch(first, first + cfg.runs_per_batch);
      std::nth_element(batch.begin(), batch.begin() + (idx - 1), batch.end());
      pt.delta_hat_batches[b] = batch[idx - 1];
    }
    double mean = 0.0;
    for (double v : pt.delta_hat_batches) mean += v;
    mean /= cfg.batches;
    pt.delta_hat_mean = mean;
    if (!std::isfinite(mean)) {
      pt.delta_hat_se = kInf;
    } else if (cfg.batches > 1) {
      double ss = 0.0;
      for (double v : pt.delta_hat_batches) ss += (v - mean) * (v - mean);
      pt.delta_hat_se = std::sqrt(ss / (cfg.batches - 1) / cfg.batches);
    }
    pt.neg_log_delta_hat = -std::log(pt.delta_hat_mean);
    pt.prediction_neg_log_delta = prediction.neg_log_delta;
    if (cfg.timing) {
      pt.runtime_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    summary.points.push_back(std::move(pt));
  }
  return summary;
}

std::string to_csv(const ResolutionSummary& summary) {
  std::string out =
      "n,M,gamma,p,eps,excess_prob,delta_hat_mean,delta_hat_se,"
      "neg_log_delta_hat,prediction_neg_log_delta,runtime_s\n";
  for (const auto& pt : summary.points) {
    out += std::to_string(pt.n);
    out += ',';
    out += std::to_string(pt.m_cells);
    for (double v : {pt.gamma, pt.p, pt.eps, pt.excess_prob, pt.delta_hat_mean,
                     pt.delta_hat_se, pt.neg_log_delta_hat,
                     pt.prediction_neg_log_delta, pt.runtime_s}) {
      out += ',';
      out += fmt12(v);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ResolutionSummary& summary) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& pt : summary.points) {
    nlohmann::json batches = nlohmann::json::array();
    for (double v : pt.delta_hat_batches) batches.push_back(json_number(v));
    points.push_back({{"n", pt.n},
                      {"M", pt.m_cells},
                      {"gamma", json_number(pt.gamma)},
                      {"p", json_number(pt.p)},
                      {"eps", json_number(pt.eps)},
                      {"excess_prob", json_number(pt.excess_prob)},
                      {"delta_hat_batches", batches},
                      {"delta_hat_mean", json_number(pt.delta_hat_mean)},
                      {"delta_hat_se", json_number(pt.delta_hat_se)},
                      {"neg_log_delta_hat", json_number(pt.neg_log_delta_hat)},
                      {"prediction_neg_log_delta",
                       json_number(pt.prediction_neg_log_delta)},
                      {"runtime_s", json_number(pt.runtime_s)}});
  }
  return nlohmann::json{{"points", points}}.dump(2) + "\n";
}

ResolutionSummary summary_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw contract_error(std::string("malformed results document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array()) {
    throw contract_error("results document lacks a 'points' array");
  }
  ResolutionSummary summary;
  for (const auto& j : doc["points"]) {
    ResolutionPoint pt;
    try {
      pt.n = j.at("n").get<long long>();
      pt.m_cells = j.at("M").get<long long>();
      pt.gamma = number_from_json(j.at("gamma"), "gamma");
      pt.p = number_from_json(j.at("p"), "p");
      pt.eps = number_from_json(j.at("eps"), "eps");
      pt.excess_prob = number_from_json(j.at("excess_prob"), "excess_prob");
      for (const auto& b : j.at("delta_hat_batches")) {
        pt.delta_hat_batches.push_back(number_from_json(b, "delta_hat_batches"));
      }
      pt.delta_hat_mean = number_from_json(j.at("delta_hat_mean"), "delta_hat_mean");
      pt.delta_hat_se = number_from_json(j.at("delta_hat_se"), "delta_hat_se");
      pt.neg_log_delta_hat =
          number_from_json(j.at("neg_log_delta_hat"), "neg_log_delta_hat");
      pt.prediction_neg_log_delta = number_from_json(
          j.at("prediction_neg_log_delta"), "prediction_neg_log_delta");
      pt.runtime_s = number_from_json(j.at("runtime_s"), "runtime_s");
    } catch (const nlohmann::json::exception& e) {
      throw contract_error(std::string("malformed results point: ") + e.what());
    }
    summary.points.push_back(std::move(pt));
  }
  return summary;
}

void emit_results(const ResolutionSummary& summary, const std::string& format,
                  const std::string& path) {
  std::string body;
  if (format == "csv") {
    body = to_csv(summary);
  } else if (format == "json") {
    body = to_json(summary);
  } else {
    throw contract_error("unknown output format '" + format + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw contract_error("cannot open '" + path + "' for writing");
  out << body;
  out.flush();
  if (!out) throw contract_error("write failed for '" + path + "'");
}

}  // namespace tq
