#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tqsearch/channel.hpp"
#include "tqsearch/procedure.hpp"

namespace tq {

// Search parameters resolved for one block length.
struct AutoParameters {
  long long m = 1;       // sub-cubes per axis
  double gamma = 0.0;    // decoding threshold slack, nats
  double p = 0.5;        // query density
  bool degenerate = false;  // the sizing formula gave log M <= 0
};

// M = floor(exp((nC + sqrt(nV) Phi^{-1}(eps) - (1/2) log n) / (dk))), clamped
// to 1 when the exponent is nonpositive; gamma = (1/2) log n; p = the smallest
// capacity-achieving density.
AutoParameters auto_parameters(const NoiseModel& noise, long long n, int k,
                               int d, double eps);

struct ExperimentConfig {
  NoiseModel noise;
  int k = 1;
  int d = 1;
  double eps = 0.1;
  std::vector<long long> n_list;
  long long runs_per_batch = 1000;
  int batches = 10;
  std::uint64_t master_seed = 1;
  long long m_override = 0;      // 0 keeps the auto sizing
  double gamma_override = -1.0;  // negative keeps (1/2) log n
  double p_override = -1.0;      // negative keeps the capacity maximizer
  long long decode_budget = 1000000000LL;
  bool fixed_codebook = false;  // one codebook per n-point instead of per trial
  int threads = 0;  // 0 uses every available core
  bool timing = false;  // record wall times; off keeps output layout stable

  explicit ExperimentConfig(NoiseModel nm) : noise(std::move(nm)) {}
};

struct TrialRecord {
  long long trial = 0;
  std::vector<std::vector<double>> targets;
  int k_p = 0;
  int m = 0;
  double rho = 0.0;
  bool excess = false;
  double wall_s = 0.0;
};

struct ResolutionPoint {
  long long n = 0;
  long long m_cells = 1;  // M
  double gamma = 0.0;
  double p = 0.5;
  double eps = 0.0;
  double excess_prob = 0.0;
  std::vector<double> delta_hat_batches;
  double delta_hat_mean = 0.0;
  double delta_hat_se = 0.0;
  double neg_log_delta_hat = 0.0;
  double prediction_neg_log_delta = 0.0;
  double runtime_s = 0.0;
};

struct ResolutionSummary {
  std::vector<ResolutionPoint> points;
};

// One complete trial: draw targets, build or reuse the codebook, push the
// noiseless responses through the channel, decode, and measure rho against
// delta = 1/M. shared_codebook may be null.
TrialRecord run_single_trial(const NoiseModel& noise, const CubePartition& part,
                             long long n, int k, double p, double gamma,
                             long long budget, std::uint64_t trial_seed,
                             long long trial_id, const Codebook* shared_codebook,
                             bool timing);

ResolutionSummary run_trials(const ExperimentConfig& cfg);

// ceil((1-eps)*runs) guarded against float boundaries, clamped to [1, runs];
// the rank of the batch resolution quantile.
long long quantile_index(double eps, long long runs);

std::string to_csv(const ResolutionSummary& summary);
std::string to_json(const ResolutionSummary& summary);
ResolutionSummary summary_from_json(const std::string& text);

// format is "csv" or "json"; failures carry the path in the message.
void emit_results(const ResolutionSummary& summary, const std::string& format,
                  const std::string& path);

}  // namespace tq
