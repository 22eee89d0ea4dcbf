#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tqsearch/asymptotics.hpp"
#include "tqsearch/bounds.hpp"
#include "tqsearch/channel.hpp"
#include "tqsearch/config_io.hpp"
#include "tqsearch/errors.hpp"
#include "tqsearch/experiments.hpp"
#include "tqsearch/ormac.hpp"
#include "tqsearch/parallel.hpp"
#include "tqsearch/rng.hpp"

namespace {

using nlohmann::json;

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tq::contract_error("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw tq::contract_error("config '" + path + "': " + e.what());
  }
}

void write_output(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(body.data(), 1, body.size(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw tq::contract_error("cannot open '" + out_path + "' for writing");
  out << body;
  out.flush();
  if (!out) throw tq::contract_error("write failed for '" + out_path + "'");
}

// The first artifact of every run: the fully resolved configuration, one JSON
// line on stderr, so runs are self-describing.
void echo_config(json doc) {
  std::string line = doc.dump();
  line += '\n';
  std::fwrite(line.data(), 1, line.size(), stderr);
}

tq::NoiseMap rebuild_with_mu(const tq::NoiseMap& map, double mu) {
  switch (map.kind()) {
    case tq::NoiseMap::Kind::Constant:
      return tq::NoiseMap::constant(map.a(), mu);
    case tq::NoiseMap::Kind::Affine:
      return tq::NoiseMap::affine(map.a(), map.b(), mu);
    case tq::NoiseMap::Kind::Table:
      return tq::NoiseMap::table(map.table_q(), map.table_f(), mu);
  }
  throw tq::contract_error("unreachable noise map kind");
}

// Noise source precedence: an explicit --f builds the channel from flags;
// otherwise the config file supplies it (either a bare noise spec or a
// document with a "noise" member).
struct NoiseFlags {
  std::string family = "bsc";
  std::string f;
  double mu = -1.0;
  std::string config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family, "channel family: bsc or bec")
        ->capture_default_str();
    cmd->add_option("--f", f,
                    "noise map shorthand, e.g. const:0.11 or affine:0.3,0.1");
    cmd->add_option("--mu", mu, "Lipschitz constant of the noise map");
    cmd->add_option("--config", config, "JSON file carrying the channel spec");
  }

  tq::NoiseModel resolve() const {
    if (!f.empty()) {
      tq::NoiseMap map = tq::noise_map_from_shorthand(f);
      if (mu >= 0.0) map = rebuild_with_mu(map, mu);
      return tq::noise_from_family(family, std::move(map));
    }
    if (!config.empty()) {
      json doc = load_json_file(config);
      if (doc.is_object() && doc.contains("noise")) {
        return tq::noise_from_json(doc["noise"]);
      }
      return tq::noise_from_json(doc);
    }
    throw tq::contract_error("no channel given; pass --f or --config");
  }
};

std::uint64_t resolve_seed(bool given, std::uint64_t value) {
  if (given) return value;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

int resolve_threads(bool given, int value) {
  if (given) return value;
  if (const char* env = std::getenv("TQ_THREADS")) {
    char* end = nullptr;
    long parsed = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || parsed < 1) {
      throw tq::contract_error(std::string("TQ_THREADS is not a thread count: '") +
                               env + "'");
    }
    return static_cast<int>(parsed);
  }
  return static_cast<int>(tq::hardware_threads());
}

std::pair<int, int> parse_k_range(const std::string& text) {
  auto fail = [&] {
    throw tq::contract_error("target range '" + text +
                             "' is not an integer or lo..hi");
  };
  std::size_t dots = text.find("..");
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != s.size()) fail();
    return v;
  };
  int lo, hi;
  if (dots == std::string::npos) {
    lo = hi = to_int(text);
  } else {
    lo = to_int(text.substr(0, dots));
    hi = to_int(text.substr(dots + 2));
  }
  if (lo < 1 || hi < lo) fail();
  return {lo, hi};
}

int run_capacity(const NoiseFlags& noise_flags, const std::string& k_range,
                 double tol, int grid, const std::string& format,
                 const std::string& out) {
  auto noise = noise_flags.resolve();
  auto [k_lo, k_hi] = parse_k_range(k_range);
  echo_config({{"command", "capacity"},
               {"noise", tq::noise_to_json(noise)},
               {"k", k_range},
               {"tol", tol},
               {"grid", grid},
               {"format", format},
               {"out", out}});

  json points = json::array();
  std::string csv = "k,p_star,C_nats,V\n";
  for (int k = k_lo; k <= k_hi; ++k) {
    auto cap = tq::capacity(noise, k, tol, grid);
    double p_star = cap.maximizers.front();
    double v = cap.v_at_maximizers.front();
    csv += std::to_string(k) + "," + fmt12(p_star) + "," + fmt12(cap.value) +
           "," + fmt12(v) + "\n";
    points.push_back(
        {{"k", k}, {"p_star", p_star}, {"C_nats", cap.value}, {"V", v}});
  }
  if (format == "csv") {
    write_output(csv, out);
  } else if (format == "json") {
    write_output(json{{"points", points}}.dump(2) + "\n", out);
  } else {
    throw tq::contract_error("unknown output format '" + format + "'");
  }
  return 0;
}

int run_phase(const NoiseFlags& noise_flags, long long n, int k, int d,
              double scale_min, double scale_max, int points,
              const std::string& format, const std::string& out) {
  if (points < 2) throw tq::contract_error("need at least two rate points");
  if (!(scale_min > 0.0) || !(scale_max > scale_min)) {
    throw tq::contract_error("rate scales must satisfy 0 < min < max");
  }
  auto noise = noise_flags.resolve();
  echo_config({{"command", "phase"},
               {"noise", tq::noise_to_json(noise)},
               {"n", n},
               {"k", k},
               {"d", d},
               {"scale_min", scale_min},
               {"scale_max", scale_max},
               {"points", points},
               {"format", format},
               {"out", out}});

  auto cap = tq::capacity(noise, k);
  double threshold = cap.value / (static_cast<double>(d) * k);
  json jpoints = json::array();
  std::string csv = "n,k,d,rate,eps_star\n";
  for (int i = 0; i < points; ++i) {
    double scale =
        scale_min + (scale_max - scale_min) * i / static_cast<double>(points - 1);
    double rate = scale * threshold;
    double eps_star = tq::phase_transition_prob(noise, n, k, d, rate);
    csv += std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(d) +
           "," + fmt12(rate) + "," + fmt12(eps_star) + "\n";
    jpoints.push_back({{"n", n}, {"k", k}, {"d", d}, {"rate", rate},
                       {"eps_star", eps_star}});
  }
  if (format == "csv") {
    write_output(csv, out);
  } else if (format == "json") {
    write_output(json{{"points", jpoints}}.dump(2) + "\n", out);
  } else {
    throw tq::contract_error("unknown output format '" + format + "'");
  }
  return 0;
}

int run_simulate(tq::ExperimentConfig cfg, const std::string& format,
                 const std::string& out) {
  json echo = tq::config_to_json(cfg);
  echo["command"] = "simulate";
  echo["format"] = format;
  echo["out"] = out;
  echo_config(echo);

  auto summary = tq::run_trials(cfg);
  if (format == "csv") {
    write_output(tq::to_csv(summary), out);
  } else if (format == "json") {
    write_output(tq::to_json(summary), out);
  } else {
    throw tq::contract_error("unknown output format '" + format + "'");
  }
  return 0;
}

int run_bounds(const NoiseFlags& noise_flags, std::vector<long long> n_list,
               int k, int d, double eps, double p, double gamma, double beta,
               double kappa, const std::string& method_name, long long samples,
               std::uint64_t seed, int threads, const std::string& kind,
               const std::string& format, const std::string& out) {
  if (n_list.empty()) throw tq::contract_error("pass at least one --n");
  tq::BoundMethod method;
  if (method_name == "mc" || method_name == "monte-carlo") {
    method = tq::BoundMethod::MonteCarlo;
  } else if (method_name == "gaussian" || method_name == "gaussian-approx") {
    method = tq::BoundMethod::GaussianApprox;
  } else {
    throw tq::contract_error("unknown bound method '" + method_name + "'");
  }
  bool want_ach = kind == "both" || kind == "achievability";
  bool want_con = kind == "both" || kind == "converse";
  if (!want_ach && !want_con) {
    throw tq::contract_error("unknown bound kind '" + kind + "'");
  }
  auto noise = noise_flags.resolve();
  double p_query = p;
  if (p_query < 0.0) p_query = tq::capacity(noise, k).maximizers.front();

  echo_config({{"command", "bounds"},
               {"noise", tq::noise_to_json(noise)},
               {"n", n_list},
               {"k", k},
               {"d", d},
               {"eps", eps},
               {"p", p_query},
               {"gamma", gamma},
               {"beta", beta},
               {"kappa", kappa},
               {"method", method_name},
               {"samples", samples},
               {"seed", seed},
               {"threads", threads},
               {"kind", kind},
               {"format", format},
               {"out", out}});

  json jpoints = json::array();
  std::string csv = "n,k,d,eps,kind,value,method,sigma\n";
  auto add_row = [&](long long n, const char* row_kind, double value,
                     const std::string& row_method, double sigma) {
    csv += std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(d) +
           "," + fmt12(eps) + "," + row_kind + "," + fmt12(value) + "," +
           row_method + "," + fmt12(sigma) + "\n";
    jpoints.push_back({{"n", n}, {"k", k}, {"d", d}, {"eps", eps},
                       {"kind", row_kind}, {"value", value},
                       {"method", row_method}, {"sigma", sigma}});
  };
  for (long long n : n_list) {
    double gamma_n = gamma >= 0.0 ? gamma : 0.5 * std::log(static_cast<double>(n));
    if (want_ach) {
      auto implied = tq::achievability_implied_neg_log_delta(
          noise, n, k, d, eps, p_query, gamma_n, samples,
          tq::mix_seed(seed, 2 * static_cast<std::uint64_t>(n)), threads);
      add_row(n, "achievability", implied.neg_log_delta,
              to_string(tq::BoundMethod::MonteCarlo), implied.sigma);
    }
    if (want_con) {
      tq::ConverseParams cp;
      cp.n = n;
      cp.k = k;
      cp.d = d;
      cp.eps = eps;
      cp.p_query = p_query;
      cp.beta = beta;
      cp.kappa = kappa;
      cp.method = method;
      cp.samples = samples;
      cp.seed = tq::mix_seed(seed, 2 * static_cast<std::uint64_t>(n) + 1);
      cp.threads = threads;
      auto conv = tq::converse_resolution_bound(noise, cp);
      add_row(n, "converse", conv.value, to_string(method), conv.sigma);
    }
  }
  if (format == "csv") {
    write_output(csv, out);
  } else if (format == "json") {
    write_output(json{{"points", jpoints}}.dump(2) + "\n", out);
  } else {
    throw tq::contract_error("unknown output format '" + format + "'");
  }
  return 0;
}

int run_verify(const NoiseFlags& noise_flags, int k_max, int d, int grid,
               const std::string& format, const std::string& out) {
  if (k_max < 1 || k_max > 16) {
    throw tq::contract_error("target count must be in [1, 16]");
  }
  if (grid < 1) throw tq::contract_error("grid must be positive");
  auto noise = noise_flags.resolve();
  echo_config({{"command", "verify"},
               {"noise", tq::noise_to_json(noise)},
               {"k", k_max},
               {"d", d},
               {"grid", grid},
               {"format", format},
               {"out", out}});

  bool all_pass = true;
  std::string text;
  json checks = json::array();
  for (int k = 1; k <= k_max; ++k) {
    bool rac_ok = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::string witness;
    json worst;
    for (int i = 1; i <= grid; ++i) {
      double p = static_cast<double>(i) / (grid + 1);
      auto report = tq::verify_rac_assumptions(noise, p, k);
      if (!report.all_hold()) {
        rac_ok = false;
        witness = "p=" + fmt12(p) + ": " + report.witness;
        worst = tq::rac_report_to_json(report);
        worst["p"] = p;
        break;
      }
      if (report.friendliness_margin < worst_margin) {
        worst_margin = report.friendliness_margin;
        worst = tq::rac_report_to_json(report);
        worst["p"] = p;
      }
    }
    all_pass = all_pass && rac_ok;
    text += std::string(rac_ok ? "[PASS]" : "[FAIL]") + " channel assumptions k=" +
            std::to_string(k) + " over " + std::to_string(grid) + " densities" +
            (rac_ok ? "" : " (" + witness + ")") + "\n";
    checks.push_back({{"check", "rac_assumptions"}, {"k", k}, {"pass", rac_ok},
                      {"worst", worst}});

    auto identity = tq::verify_rate_identity(noise, k, d);
    bool rate_ok = identity.holds &&
                   std::abs(identity.lhs - identity.rhs) <=
                       1e-6 * std::max(1.0, std::abs(identity.rhs));
    all_pass = all_pass && rate_ok;
    text += std::string(rate_ok ? "[PASS]" : "[FAIL]") + " rate identity k=" +
            std::to_string(k) + " (max_p min_t " + fmt12(identity.lhs) +
            " vs C/dk " + fmt12(identity.rhs) + ")\n";
    checks.push_back({{"check", "rate_identity"}, {"k", k}, {"pass", rate_ok},
                      {"lhs", identity.lhs}, {"rhs", identity.rhs},
                      {"max_deviation", identity.max_deviation}});
  }
  text += std::string(all_pass ? "[PASS]" : "[FAIL]") + " all checks\n";

  if (format == "json") {
    write_output(json{{"checks", checks}, {"pass", all_pass}}.dump(2) + "\n", out);
  } else if (format == "text" || format == "csv") {
    write_output(text, out);
  } else {
    throw tq::contract_error("unknown output format '" + format + "'");
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"non-adaptive noisy twenty-questions search toolkit"};
  app.require_subcommand(1);

  // capacity
  auto* cap_cmd = app.add_subcommand("capacity", "capacity and dispersion table");
  NoiseFlags cap_noise;
  cap_noise.attach(cap_cmd);
  std::string cap_k = "1";
  double cap_tol = 1e-8;
  int cap_grid = 256;
  std::string cap_format = "csv", cap_out;
  cap_cmd->add_option("--k", cap_k, "target count or range lo..hi")
      ->capture_default_str();
  cap_cmd->add_option("--tol", cap_tol, "maximizer bracket tolerance")
      ->capture_default_str();
  cap_cmd->add_option("--grid", cap_grid, "coarse search grid size")
      ->capture_default_str();
  cap_cmd->add_option("--format", cap_format, "csv or json")->capture_default_str();
  cap_cmd->add_option("--out", cap_out, "output path (default stdout)");

  // phase
  auto* phase_cmd = app.add_subcommand("phase", "excess probability vs decay rate");
  NoiseFlags phase_noise;
  phase_noise.attach(phase_cmd);
  long long phase_n = 5000;
  int phase_k = 1, phase_d = 1, phase_points = 101;
  double phase_min = 0.5, phase_max = 1.5;
  std::string phase_format = "csv", phase_out;
  phase_cmd->add_option("--n", phase_n, "number of queries")->capture_default_str();
  phase_cmd->add_option("--k", phase_k, "target count")->capture_default_str();
  phase_cmd->add_option("--d", phase_d, "dimension")->capture_default_str();
  phase_cmd->add_option("--scale-min", phase_min, "lowest rate as a fraction of C/(dk)")
      ->capture_default_str();
  phase_cmd->add_option("--scale-max", phase_max, "highest rate as a fraction of C/(dk)")
      ->capture_default_str();
  phase_cmd->add_option("--points", phase_points, "rate grid size")
      ->capture_default_str();
  phase_cmd->add_option("--format", phase_format, "csv or json")
      ->capture_default_str();
  phase_cmd->add_option("--out", phase_out, "output path (default stdout)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo search trials");
  std::string sim_config;
  sim_cmd->add_option("--config", sim_config, "experiment config JSON")->required();
  std::vector<long long> sim_n;
  int sim_k = 0, sim_d = 0, sim_batches = 0, sim_threads = 0;
  long long sim_runs = 0, sim_m = 0, sim_budget = 0;
  double sim_eps = -1.0, sim_gamma = -1.0, sim_p = -1.0;
  std::uint64_t sim_seed = 0;
  bool sim_fixed = false, sim_timing = false;
  auto* sim_n_opt = sim_cmd->add_option("--n", sim_n, "block lengths")->delimiter(',');
  auto* sim_k_opt = sim_cmd->add_option("--k", sim_k, "target count");
  auto* sim_d_opt = sim_cmd->add_option("--d", sim_d, "dimension");
  auto* sim_eps_opt = sim_cmd->add_option("--eps", sim_eps, "excess probability level");
  auto* sim_runs_opt = sim_cmd->add_option("--runs", sim_runs, "trials per batch");
  auto* sim_batches_opt = sim_cmd->add_option("--batches", sim_batches, "batch count");
  auto* sim_m_opt = sim_cmd->add_option("--M", sim_m, "grid size override");
  auto* sim_gamma_opt = sim_cmd->add_option("--gamma", sim_gamma, "threshold override");
  auto* sim_p_opt = sim_cmd->add_option("--p", sim_p, "query density override");
  auto* sim_budget_opt = sim_cmd->add_option("--budget", sim_budget, "tuple scan cap");
  auto* sim_seed_opt = sim_cmd->add_option("--seed", sim_seed, "master seed");
  auto* sim_threads_opt = sim_cmd->add_option("--threads", sim_threads, "worker count");
  sim_cmd->add_flag("--fixed-codebook", sim_fixed,
                    "share one codebook across the trials of each point");
  sim_cmd->add_flag("--timing", sim_timing, "record wall times in the output");
  std::string sim_format = "csv", sim_out;
  sim_cmd->add_option("--format", sim_format, "csv or json")->capture_default_str();
  sim_cmd->add_option("--out", sim_out, "output path (default stdout)");

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "non-asymptotic resolution bounds");
  NoiseFlags bounds_noise;
  bounds_noise.attach(bounds_cmd);
  std::vector<long long> bounds_n;
  int bounds_k = 1, bounds_d = 1, bounds_threads = 0;
  double bounds_eps = 0.1, bounds_p = -1.0, bounds_gamma = -1.0;
  double bounds_beta = -1.0, bounds_kappa = -1.0;
  long long bounds_samples = 100000;
  std::uint64_t bounds_seed = 0;
  std::string bounds_method = "mc", bounds_kind = "both";
  std::string bounds_format = "csv", bounds_out;
  bounds_cmd->add_option("--n", bounds_n, "block lengths")->delimiter(',');
  bounds_cmd->add_option("--k", bounds_k, "target count")->capture_default_str();
  bounds_cmd->add_option("--d", bounds_d, "dimension")->capture_default_str();
  bounds_cmd->add_option("--eps", bounds_eps, "excess probability level")
      ->capture_default_str();
  bounds_cmd->add_option("--p", bounds_p, "query density (default: maximizer)");
  bounds_cmd->add_option("--gamma", bounds_gamma,
                         "threshold slack (default: half log n)");
  bounds_cmd->add_option("--beta", bounds_beta, "converse beta (default 1/sqrt n)");
  bounds_cmd->add_option("--kappa", bounds_kappa, "converse kappa (default 1/sqrt n)");
  bounds_cmd->add_option("--method", bounds_method, "mc or gaussian")
      ->capture_default_str();
  bounds_cmd->add_option("--samples", bounds_samples, "Monte Carlo sample count")
      ->capture_default_str();
  auto* bounds_seed_opt = bounds_cmd->add_option("--seed", bounds_seed, "seed");
  auto* bounds_threads_opt =
      bounds_cmd->add_option("--threads", bounds_threads, "worker count");
  bounds_cmd->add_option("--kind", bounds_kind, "both, achievability or converse")
      ->capture_default_str();
  bounds_cmd->add_option("--format", bounds_format, "csv or json")
      ->capture_default_str();
  bounds_cmd->add_option("--out", bounds_out, "output path (default stdout)");

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "channel assumption and rate identity checks");
  NoiseFlags verify_noise;
  verify_noise.attach(verify_cmd);
  int verify_k = 3, verify_d = 1, verify_grid = 19;
  std::string verify_format = "text", verify_out;
  verify_cmd->add_option("--k", verify_k, "largest target count")
      ->capture_default_str();
  verify_cmd->add_option("--d", verify_d, "dimension")->capture_default_str();
  verify_cmd->add_option("--grid", verify_grid, "query density grid size")
      ->capture_default_str();
  verify_cmd->add_option("--format", verify_format, "text or json")
      ->capture_default_str();
  verify_cmd->add_option("--out", verify_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cap_cmd->parsed()) {
      return run_capacity(cap_noise, cap_k, cap_tol, cap_grid, cap_format, cap_out);
    }
    if (phase_cmd->parsed()) {
      return run_phase(phase_noise, phase_n, phase_k, phase_d, phase_min,
                       phase_max, phase_points, phase_format, phase_out);
    }
    if (sim_cmd->parsed()) {
      json doc = load_json_file(sim_config);
      tq::ExperimentConfig cfg = tq::config_from_json(doc);
      if (sim_n_opt->count()) cfg.n_list = sim_n;
      if (sim_k_opt->count()) cfg.k = sim_k;
      if (sim_d_opt->count()) cfg.d = sim_d;
      if (sim_eps_opt->count()) cfg.eps = sim_eps;
      if (sim_runs_opt->count()) cfg.runs_per_batch = sim_runs;
      if (sim_batches_opt->count()) cfg.batches = sim_batches;
      if (sim_m_opt->count()) cfg.m_override = sim_m;
      if (sim_gamma_opt->count()) cfg.gamma_override = sim_gamma;
      if (sim_p_opt->count()) cfg.p_override = sim_p;
      if (sim_budget_opt->count()) cfg.decode_budget = sim_budget;
      // seed: flag, else config, else random; threads: flag, else TQ_THREADS,
      // else config (0 means every core)
      if (sim_seed_opt->count()) {
        cfg.master_seed = sim_seed;
      } else if (!doc.contains("seed")) {
        cfg.master_seed = resolve_seed(false, 0);
      }
      if (sim_threads_opt->count()) {
        cfg.threads = sim_threads;
      } else if (std::getenv("TQ_THREADS")) {
        cfg.threads = resolve_threads(false, 0);
      }
      if (sim_fixed) cfg.fixed_codebook = true;
      if (sim_timing) cfg.timing = true;
      return run_simulate(std::move(cfg), sim_format, sim_out);
    }
    if (bounds_cmd->parsed()) {
      std::uint64_t seed = resolve_seed(bounds_seed_opt->count() > 0, bounds_seed);
      int threads = resolve_threads(bounds_threads_opt->count() > 0, bounds_threads);
      return run_bounds(bounds_noise, bounds_n, bounds_k, bounds_d, bounds_eps,
                        bounds_p, bounds_gamma, bounds_beta, bounds_kappa,
                        bounds_method, bounds_samples, seed, threads, bounds_kind,
                        bounds_format, bounds_out);
    }
    if (verify_cmd->parsed()) {
      return run_verify(verify_noise, verify_k, verify_d, verify_grid,
                        verify_format, verify_out);
    }
  } catch (const tq::contract_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const tq::resource_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
