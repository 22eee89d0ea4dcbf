#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tqsearch/channel.hpp"
#include "tqsearch/rng.hpp"

namespace tq {

// Uniform partition of [0,1]^d into M^d sub-cubes, indexed 1..M^d by
// Gamma(i_1..i_d) = 1 + sum_j (i_j - 1) M^(d-j).
struct CubePartition {
  int M = 1;
  int d = 1;

  CubePartition(int M_, int d_);

  long long cells() const { return cells_; }
  long long gamma_index(const std::vector<int>& coords) const;
  std::vector<int> gamma_inverse(long long index) const;
  int quantize(double s) const;  // ceil(s*M) with q(0) = 1
  long long cell_of(const std::vector<double>& point) const;
  std::vector<double> center(long long index) const;  // (2w-1)/(2M) per axis

 private:
  long long cells_ = 1;
};

// M^d random binary rows of length n, bit-packed 64 bits per word. Row i
// (0-based) is the query membership of sub-cube i+1; realized query sizes
// are the column densities.
class Codebook {
 public:
  static Codebook generate(int M, int d, long long n, double p, std::uint64_t seed,
                           std::uint64_t memory_cap_bytes = 1ull << 30);

  long long rows() const { return rows_; }
  long long n() const { return n_; }
  int M() const { return M_; }
  int d() const { return d_; }
  double p() const { return p_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t words_per_row() const { return words_; }

  const std::uint64_t* row(long long i) const { return bits_.data() + i * words_; }
  int bit(long long i, long long l) const {
    return (row(i)[l >> 6] >> (l & 63)) & 1u;
  }
  std::uint32_t column_count(long long l) const { return column_counts_[l]; }
  double column_density(long long l) const {
    return static_cast<double>(column_counts_[l]) / static_cast<double>(rows_);
  }

  void save(const std::string& path) const;
  static Codebook load(const std::string& path,
                       std::uint64_t memory_cap_bytes = 1ull << 30);

 private:
  Codebook() = default;

  int M_ = 0;
  int d_ = 0;
  long long rows_ = 0;
  long long n_ = 0;
  double p_ = 0.0;
  std::uint64_t seed_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> column_counts_;
};

struct OracleResult {
  std::vector<long long> w_p;  // unique quantized indices, 1-based, ascending
  int k_p = 0;
  std::vector<std::uint8_t> z;  // noiseless responses, one bit per query
};

OracleResult oracle_noiseless(const CubePartition& part, const Codebook& cb,
                              const std::vector<std::vector<double>>& targets);

// Noisy responses; y_l drawn at the realized column density of query l.
std::vector<int> apply_noise(const std::vector<std::uint8_t>& z, const Codebook& cb,
                             const NoiseModel& noise, Rng& rng);

struct DecodeOutput {
  int m = 0;                                  // estimated target count, 0 = error
  std::vector<long long> indices;             // 1-based, strictly increasing
  std::vector<std::vector<double>> centers;
  int t_loop_exit = 0;                        // t that accepted, 0 if none
  long long tuples_evaluated = 0;
};

// Per-level score tables under the nominal law f(p): per-symbol masks by
// output value, the base/weight decomposition of the empty-subset score, and
// the subset-conditional density tables. Exposed so the masked fast path can
// be validated against the per-symbol reference sum.
class LevelTables {
 public:
  LevelTables(const Codebook& cb, const NoiseModel& noise, double p_nominal, int t,
              const std::vector<int>& y);

  // Some observed symbol is impossible under the nominal law at this t.
  bool dead() const { return dead_; }
  int t() const { return t_; }

  // Accumulated empty-subset density of the OR of the given 0-based rows,
  // via masked popcounts; -inf when a contradicted symbol is covered or a
  // required symbol is not.
  double empty_score(const std::vector<long long>& rows0) const;

  // Accumulated density for proper subset J (bitmask over tuple positions).
  double subset_score(std::uint32_t J_mask, const std::vector<long long>& rows0) const;

 private:
  friend DecodeOutput decode(const std::vector<int>&, const Codebook&,
                             const CubePartition&, const NoiseModel&, double, double,
                             int, long long);

  const Codebook* cb_;
  int t_ = 0;
  int ny_ = 0;
  bool dead_ = false;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> symbol_masks_;   // ny_ * words_
  std::vector<std::uint32_t> symbol_counts_;  // per y
  double base_ = 0.0;
  std::vector<double> w_;                     // per y; 0 for inactive symbols
  std::vector<std::uint64_t> cover_mask_;
  std::vector<std::uint64_t> fail_mask_;
  bool has_cover_ = false;
  bool has_fail_ = false;
  // dens_[((sJ * 2 + zJ) * 2 + z) * ny_ + y]; -inf encodes impossibility
  std::vector<double> dens_;
};

// Reference accumulated density: one info_density evaluation per symbol.
double tuple_score_reference(const Codebook& cb, const NoiseModel& noise,
                             double p_nominal, int t, std::uint32_t J_mask,
                             const std::vector<long long>& rows0,
                             const std::vector<int>& y);

DecodeOutput decode(const std::vector<int>& y, const Codebook& cb,
                    const CubePartition& part, const NoiseModel& noise,
                    double p_nominal, double gamma, int k,
                    long long budget = 1000000000LL);

// Symmetric L-infinity Hausdorff distance; +inf if exactly one side is empty.
double hausdorff_linf(const std::vector<std::vector<double>>& a,
                      const std::vector<std::vector<double>>& b);

struct ResolutionOutcome {
  bool excess = false;
  double rho = 0.0;
};

ResolutionOutcome run_resolution(const std::vector<std::vector<double>>& targets,
                                 const DecodeOutput& out, double delta);

// C(rows, t) as a double, +inf on overflow; used for budget reporting.
double tuple_count(long long rows, int t);

}  // namespace tq
