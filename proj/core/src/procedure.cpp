#include "tqsearch/procedure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "tqsearch/errors.hpp"
#include "tqsearch/ormac.hpp"

namespace tq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_count(double v) {
  char buf[40];
  if (v < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.3e", v);
  }
  return buf;
}

void put_bytes(std::ofstream& os, std::uint64_t v, int bytes) {
  char b[8];
  for (int i = 0; i < bytes; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, bytes);
}

std::uint64_t get_bytes(std::ifstream& is, int bytes) {
  unsigned char b[8] = {0};
  is.read(reinterpret_cast<char*>(b), bytes);
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double d_threshold(int d, int t, int sJ, double log_m, double gamma) {
  return static_cast<double>(d) * (t - sJ) * log_m + gamma;
}

}  // namespace

double tuple_count(long long rows, int t) {
  if (t < 0 || rows < t) return 0.0;
  if (t == 0) return 1.0;
  double c = 1.0;
  for (int i = 0; i < t; ++i) {
    c *= static_cast<double>(rows - i) / (i + 1);
    if (c > 1e300) return kInf;
  }
  return c;
}

CubePartition::CubePartition(int M_, int d_) : M(M_), d(d_) {
  if (M < 1) throw contract_error("M must be at least 1");
  if (d < 1) throw contract_error("d must be at least 1");
  cells_ = 1;
  for (int j = 0; j < d; ++j) {
    if (cells_ > (1ll << 62) / M) throw contract_error("M^d exceeds the index range");
    cells_ *= M;
  }
}

long long CubePartition::gamma_index(const std::vector<int>& coords) const {
  if (static_cast<int>(coords.size()) != d) {
    throw contract_error("coordinate tuple must have d entries");
  }
  long long index = 0;
  for (int c : coords) {
    if (c < 1 || c > M) throw contract_error("coordinate outside [1, M]");
    index = index * M + (c - 1);
  }
  return index + 1;
}

std::vector<int> CubePartition::gamma_inverse(long long index) const {
  if (index < 1 || index > cells_) throw contract_error("cell index outside [1, M^d]");
  std::vector<int> coords(d);
  long long rem = index - 1;
  for (int j = d - 1; j >= 0; --j) {
    coords[j] = static_cast<int>(rem % M) + 1;
    rem /= M;
  }
  return coords;
}

int CubePartition::quantize(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw contract_error("coordinate outside [0, 1]");
  int q = static_cast<int>(std::ceil(s * M));
  return std::clamp(q, 1, M);
}

long long CubePartition::cell_of(const std::vector<double>& point) const {
  if (static_cast<int>(point.size()) != d) {
    throw contract_error("point must have d coordinates");
  }
  std::vector<int> coords(d);
  for (int j = 0; j < d; ++j) coords[j] = quantize(point[j]);
  return gamma_index(coords);
}

std::vector<double> CubePartition::center(long long index) const {
  auto coords = gamma_inverse(index);
  std::vector<double> c(d);
  for (int j = 0; j < d; ++j) c[j] = (2.0 * coords[j] - 1.0) / (2.0 * M);
  return c;
}

Codebook Codebook::generate(int M, int d, long long n, double p, std::uint64_t seed,
                            std::uint64_t memory_cap_bytes) {
  CubePartition part(M, d);
  if (n < 1) throw contract_error("n must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw contract_error("p must lie in [0, 1]");

  Codebook cb;
  cb.M_ = M;
  cb.d_ = d;
  cb.rows_ = part.cells();
  cb.n_ = n;
  cb.p_ = p;
  cb.seed_ = seed;
  cb.words_ = static_cast<std::size_t>((n + 63) / 64);

  double bytes = static_cast<double>(cb.rows_) * cb.words_ * 8.0 + n * 4.0;
  if (bytes > static_cast<double>(memory_cap_bytes)) {
    throw resource_error("codebook needs " + format_count(bytes) +
                         " bytes, over the cap of " + format_count(memory_cap_bytes));
  }

  cb.bits_.assign(static_cast<std::size_t>(cb.rows_) * cb.words_, 0);
  cb.column_counts_.assign(static_cast<std::size_t>(n), 0);
  Rng rng(seed);
  for (long long i = 0; i < cb.rows_; ++i) {
    std::uint64_t* row = cb.bits_.data() + i * cb.words_;
    rng.fill_bernoulli_bits(row, n, p);
    for (std::size_t w = 0; w < cb.words_; ++w) {
      std::uint64_t bits = row[w];
      while (bits) {
        cb.column_counts_[w * 64 + std::countr_zero(bits)]++;
        bits &= bits - 1;
      }
    }
  }
  return cb;
}

void Codebook::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw contract_error("cannot open " + path + " for writing");
  os.write("TQCB", 4);
  put_bytes(os, 1, 4);
  put_bytes(os, static_cast<std::uint32_t>(M_), 4);
  put_bytes(os, static_cast<std::uint32_t>(d_), 4);
  put_bytes(os, static_cast<std::uint64_t>(n_), 8);
  put_bytes(os, std::bit_cast<std::uint64_t>(p_), 8);
  put_bytes(os, seed_, 8);
  for (long long i = 0; i < rows_; ++i) {
    const std::uint64_t* r = row(i);
    for (std::size_t w = 0; w < words_; ++w) put_bytes(os, r[w], 8);
  }
  if (!os) throw contract_error("write to " + path + " failed");
}

Codebook Codebook::load(const std::string& path, std::uint64_t memory_cap_bytes) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw contract_error("cannot open " + path);
  char magic[4] = {0};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "TQCB", 4) != 0) {
    throw contract_error(path + " is not a codebook file");
  }
  std::uint64_t version = get_bytes(is, 4);
  if (version != 1) throw contract_error("unsupported codebook version");
  int M = static_cast<int>(get_bytes(is, 4));
  int d = static_cast<int>(get_bytes(is, 4));
  long long n = static_cast<long long>(get_bytes(is, 8));
  double p = std::bit_cast<double>(get_bytes(is, 8));
  std::uint64_t seed = get_bytes(is, 8);
  if (!is) throw contract_error(path + " is truncated");

  CubePartition part(M, d);
  if (n < 1 || !(p >= 0.0 && p <= 1.0)) throw contract_error("corrupt codebook header");

  Codebook cb;
  cb.M_ = M;
  cb.d_ = d;
  cb.rows_ = part.cells();
  cb.n_ = n;
  cb.p_ = p;
  cb.seed_ = seed;
  cb.words_ = static_cast<std::size_t>((n + 63) / 64);
  double bytes = static_cast<double>(cb.rows_) * cb.words_ * 8.0 + n * 4.0;
  if (bytes > static_cast<double>(memory_cap_bytes)) {
    throw resource_error("codebook needs " + format_count(bytes) +
                         " bytes, over the cap of " + format_count(memory_cap_bytes));
  }
  cb.bits_.assign(static_cast<std::size_t>(cb.rows_) * cb.words_, 0);
  for (long long i = 0; i < cb.rows_; ++i) {
    std::uint64_t* r = cb.bits_.data() + i * cb.words_;
    for (std::size_t w = 0; w < cb.words_; ++w) r[w] = get_bytes(is, 8);
  }
  if (!is) throw contract_error(path + " is truncated");

  cb.column_counts_.assign(static_cast<std::size_t>(n), 0);
  for (long long i = 0; i < cb.rows_; ++i) {
    for (long long l = 0; l < n; ++l) cb.column_counts_[l] += cb.bit(i, l);
  }
  return cb;
}

OracleResult oracle_noiseless(const CubePartition& part, const Codebook& cb,
                              const std::vector<std::vector<double>>& targets) {
  if (targets.empty()) throw contract_error("at least one target is required");
  if (part.cells() != cb.rows() || part.M != cb.M() || part.d != cb.d()) {
    throw contract_error("partition and codebook disagree");
  }
  OracleResult result;
  for (const auto& s : targets) result.w_p.push_back(part.cell_of(s));
  std::sort(result.w_p.begin(), result.w_p.end());
  result.w_p.erase(std::unique(result.w_p.begin(), result.w_p.end()),
                   result.w_p.end());
  result.k_p = static_cast<int>(result.w_p.size());

  std::vector<std::uint64_t> acc(cb.words_per_row(), 0);
  for (long long w : result.w_p) {
    const std::uint64_t* r = cb.row(w - 1);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] |= r[j];
  }
  result.z.assign(static_cast<std::size_t>(cb.n()), 0);
  for (long long l = 0; l < cb.n(); ++l) {
    result.z[l] = (acc[l >> 6] >> (l & 63)) & 1u;
  }
  return result;
}

std::vector<int> apply_noise(const std::vector<std::uint8_t>& z, const Codebook& cb,
                             const NoiseModel& noise, Rng& rng) {
  if (static_cast<long long>(z.size()) != cb.n()) {
    throw contract_error("response length must equal the query count");
  }
  std::vector<int> y(z.size());
  for (std::size_t l = 0; l < z.size(); ++l) {
    y[l] = noise.sample_output(cb.column_density(static_cast<long long>(l)), z[l], rng);
  }
  return y;
}

LevelTables::LevelTables(const Codebook& cb, const NoiseModel& noise, double p_nominal,
                         int t, const std::vector<int>& y)
    : cb_(&cb), t_(t), ny_(noise.output_size()), words_(cb.words_per_row()) {
  if (t < 1 || t > 30) throw contract_error("t must lie in [1, 30]");
  if (!(p_nominal > 0.0 && p_nominal < 1.0)) {
    throw contract_error("nominal p must lie in (0, 1)");
  }
  if (static_cast<long long>(y.size()) != cb.n()) {
    throw contract_error("response length must equal the query count");
  }

  symbol_masks_.assign(static_cast<std::size_t>(ny_) * words_, 0);
  symbol_counts_.assign(ny_, 0);
  for (std::size_t l = 0; l < y.size(); ++l) {
    if (y[l] < 0 || y[l] >= ny_) throw contract_error("response symbol out of range");
    symbol_masks_[y[l] * words_ + (l >> 6)] |= 1ull << (l & 63);
    ++symbol_counts_[y[l]];
  }

  cover_mask_.assign(words_, 0);
  fail_mask_.assign(words_, 0);
  w_.assign(ny_, 0.0);

  std::vector<double> p0(ny_), p1(ny_), py(ny_);
  double w0_full = std::pow(1.0 - p_nominal, t);
  for (int s = 0; s < ny_; ++s) {
    p0[s] = noise.transition_prob(p_nominal, 0, s);
    p1[s] = noise.transition_prob(p_nominal, 1, s);
    py[s] = w0_full * p0[s] + (1.0 - w0_full) * p1[s];
  }

  for (int s = 0; s < ny_; ++s) {
    bool observed = symbol_counts_[s] > 0;
    if (p0[s] <= 0.0 && p1[s] <= 0.0) {
      if (observed) dead_ = true;
      continue;
    }
    double a = p0[s] > 0.0 ? std::log(p0[s]) - std::log(py[s]) : -kInf;
    double b = p1[s] > 0.0 ? std::log(p1[s]) - std::log(py[s]) : -kInf;
    if (a != -kInf && b != -kInf) {
      base_ += a * symbol_counts_[s];
      w_[s] = b - a;
    } else if (a == -kInf) {
      has_cover_ = true;
      for (std::size_t j = 0; j < words_; ++j) {
        cover_mask_[j] |= symbol_masks_[s * words_ + j];
      }
      base_ += b * symbol_counts_[s];
    } else {
      has_fail_ = true;
      for (std::size_t j = 0; j < words_; ++j) {
        fail_mask_[j] |= symbol_masks_[s * words_ + j];
      }
      base_ += a * symbol_counts_[s];
    }
  }

  // dens_[((sJ * 2 + zJ) * 2 + z) * ny_ + y]; only z >= zJ cells are used.
  dens_.assign(static_cast<std::size_t>(t) * 2 * 2 * ny_, -kInf);
  for (int sJ = 0; sJ < t; ++sJ) {
    double w0 = std::pow(1.0 - p_nominal, t - sJ);
    for (int zJ = 0; zJ < 2; ++zJ) {
      for (int z = zJ; z < 2; ++z) {
        for (int s = 0; s < ny_; ++s) {
          double num = z == 0 ? p0[s] : p1[s];
          double den = zJ == 1 ? p1[s] : w0 * p0[s] + (1.0 - w0) * p1[s];
          std::size_t at = ((static_cast<std::size_t>(sJ) * 2 + zJ) * 2 + z) * ny_ + s;
          if (num > 0.0 && den > 0.0) dens_[at] = std::log(num) - std::log(den);
        }
      }
    }
  }
}

double LevelTables::empty_score(const std::vector<long long>& rows0) const {
  std::vector<std::uint64_t> v(words_, 0);
  for (long long r : rows0) {
    const std::uint64_t* row = cb_->row(r);
    for (std::size_t j = 0; j < words_; ++j) v[j] |= row[j];
  }
  if (has_fail_) {
    for (std::size_t j = 0; j < words_; ++j) {
      if (v[j] & fail_mask_[j]) return -kInf;
    }
  }
  if (has_cover_) {
    for (std::size_t j = 0; j < words_; ++j) {
      if (cover_mask_[j] & ~v[j]) return -kInf;
    }
  }
  double score = base_;
  for (int s = 0; s < ny_; ++s) {
    if (w_[s] == 0.0) continue;
    const std::uint64_t* mask = symbol_masks_.data() + s * words_;
    std::uint32_t c = 0;
    for (std::size_t j = 0; j < words_; ++j) c += std::popcount(v[j] & mask[j]);
    score += w_[s] * c;
  }
  return score;
}

double LevelTables::subset_score(std::uint32_t J_mask,
                                 const std::vector<long long>& rows0) const {
  if (static_cast<int>(rows0.size()) != t_) {
    throw contract_error("tuple size must equal t");
  }
  if (J_mask >= (1u << t_)) throw contract_error("subset mask has bits outside [t]");
  int sJ = std::popcount(J_mask);
  if (sJ >= t_) throw contract_error("subset must be proper");

  std::vector<std::uint64_t> v(words_, 0), vj(words_, 0);
  for (int i = 0; i < t_; ++i) {
    const std::uint64_t* row = cb_->row(rows0[i]);
    for (std::size_t j = 0; j < words_; ++j) {
      v[j] |= row[j];
      if ((J_mask >> i) & 1u) vj[j] |= row[j];
    }
  }
  double score = 0.0;
  for (int s = 0; s < ny_; ++s) {
    if (symbol_counts_[s] == 0) continue;
    const std::uint64_t* mask = symbol_masks_.data() + s * words_;
    std::uint32_t c1 = 0, cv = 0;
    for (std::size_t j = 0; j < words_; ++j) {
      c1 += std::popcount(vj[j] & mask[j]);
      cv += std::popcount(v[j] & mask[j]);
    }
    std::uint32_t n11 = c1;
    std::uint32_t n01 = cv - c1;
    std::uint32_t n00 = symbol_counts_[s] - cv;
    const std::size_t b = (static_cast<std::size_t>(sJ) * 2) * 2 * ny_;
    struct {
      std::uint32_t count;
      std::size_t at;
    } cells[3] = {
        {n11, b + (2 + 1) * static_cast<std::size_t>(ny_) + s},
        {n01, b + 1 * static_cast<std::size_t>(ny_) + s},
        {n00, b + 0 * static_cast<std::size_t>(ny_) + s},
    };
    for (const auto& cell : cells) {
      if (cell.count == 0) continue;
      double dv = dens_[cell.at];
      if (dv == -kInf) return -kInf;
      score += dv * cell.count;
    }
  }
  return score;
}

double tuple_score_reference(const Codebook& cb, const NoiseModel& noise,
                             double p_nominal, int t, std::uint32_t J_mask,
                             const std::vector<long long>& rows0,
                             const std::vector<int>& y) {
  if (static_cast<int>(rows0.size()) != t) {
    throw contract_error("tuple size must equal t");
  }
  OrMac mac(noise, p_nominal, t);
  double sum = 0.0;
  for (std::size_t l = 0; l < y.size(); ++l) {
    std::uint32_t x = 0;
    for (int i = 0; i < t; ++i) {
      if (cb.bit(rows0[i], static_cast<long long>(l))) x |= 1u << i;
    }
    double num = mac.channel_prob(OrMac::or_reduce(x), y[l]);
    if (num <= 0.0) return -kInf;
    sum += std::log(num) -
           std::log(mac.cond_prob_given_subset(J_mask, x & J_mask, y[l]));
  }
  return sum;
}

namespace {

struct BudgetGuard {
  long long used = 0;
  long long budget = 0;
  long long rows = 0;
  int t = 0;

  void charge() {
    if (++used > budget) {
      throw resource_error("tuple scan budget of " + format_count(budget) +
                           " evaluations exceeded at t=" + std::to_string(t) +
                           "; the level holds " + format_count(tuple_count(rows, t)) +
                           " tuples");
    }
  }
};

// Contiguous per-row data for the t=2 scan.
struct PairScan {
  std::size_t words;
  int ny;
  long long rows;
  std::vector<std::uint64_t> masked;  // rows * ny * words
  std::vector<std::uint32_t> counts;  // rows * ny
  std::vector<double> s;              // full weighted count
  std::vector<double> pos;            // positive-weight part (upper bound helper)
  std::vector<char> excluded;
  std::vector<long long> order;       // candidate rows sorted by pos desc

  const std::uint64_t* row_masks(long long i) const {
    return masked.data() + static_cast<std::size_t>(i) * ny * words;
  }
  const std::uint32_t* row_counts(long long i) const {
    return counts.data() + static_cast<std::size_t>(i) * ny;
  }
};

PairScan build_pair_scan(const Codebook& cb, const LevelTables& lt,
                         const std::vector<double>& w, int ny,
                         const std::vector<std::uint64_t>& symbol_masks,
                         const std::vector<std::uint64_t>& fail_mask, bool has_fail) {
  PairScan ps;
  ps.words = cb.words_per_row();
  ps.ny = ny;
  ps.rows = cb.rows();
  ps.masked.assign(static_cast<std::size_t>(ps.rows) * ny * ps.words, 0);
  ps.counts.assign(static_cast<std::size_t>(ps.rows) * ny, 0);
  ps.s.assign(ps.rows, 0.0);
  ps.pos.assign(ps.rows, 0.0);
  ps.excluded.assign(ps.rows, 0);

  for (long long i = 0; i < ps.rows; ++i) {
    const std::uint64_t* row = cb.row(i);
    if (has_fail) {
      for (std::size_t j = 0; j < ps.words; ++j) {
        if (row[j] & fail_mask[j]) {
          ps.excluded[i] = 1;
          break;
        }
      }
    }
    std::uint64_t* out = ps.masked.data() + static_cast<std::size_t>(i) * ny * ps.words;
    std::uint32_t* cnt = ps.counts.data() + static_cast<std::size_t>(i) * ny;
    for (int sym = 0; sym < ny; ++sym) {
      const std::uint64_t* mask = symbol_masks.data() + sym * ps.words;
      std::uint32_t c = 0;
      for (std::size_t j = 0; j < ps.words; ++j) {
        std::uint64_t m = row[j] & mask[j];
        out[sym * ps.words + j] = m;
        c += std::popcount(m);
      }
      cnt[sym] = c;
      ps.s[i] += w[sym] * c;
      if (w[sym] > 0.0) ps.pos[i] += w[sym] * c;
    }
  }

  ps.order.reserve(ps.rows);
  for (long long i = 0; i < ps.rows; ++i) {
    if (!ps.excluded[i]) ps.order.push_back(i);
  }
  std::sort(ps.order.begin(), ps.order.end(), [&](long long a, long long b) {
    if (ps.pos[a] != ps.pos[b]) return ps.pos[a] > ps.pos[b];
    return a < b;
  });
  (void)lt;
  return ps;
}

}  // namespace

DecodeOutput decode(const std::vector<int>& y, const Codebook& cb,
                    const CubePartition& part, const NoiseModel& noise,
                    double p_nominal, double gamma, int k, long long budget) {
  if (part.cells() != cb.rows() || part.M != cb.M() || part.d != cb.d()) {
    throw contract_error("partition and codebook disagree");
  }
  if (k < 1) throw contract_error("k must be at least 1");
  if (!(gamma >= 0.0)) throw contract_error("gamma must be nonnegative");
  if (budget < 1) throw contract_error("budget must be at least 1");

  const long long N = cb.rows();
  const double log_m = std::log(static_cast<double>(part.M));
  DecodeOutput out;
  BudgetGuard guard;
  guard.budget = budget;
  guard.rows = N;

  auto finish = [&](int t, std::vector<long long> rows0) {
    out.m = t;
    out.t_loop_exit = t;
    for (long long r : rows0) out.indices.push_back(r + 1);
    for (long long idx : out.indices) out.centers.push_back(part.center(idx));
    out.tuples_evaluated = guard.used;
    return out;
  };

  for (int t = static_cast<int>(std::min<long long>(k, N)); t >= 1; --t) {
    guard.t = t;
    LevelTables lt(cb, noise, p_nominal, t, y);
    if (lt.dead()) continue;
    const double thr_empty = d_threshold(part.d, t, 0, log_m, gamma);

    if (t == 1) {
      for (long long i = 0; i < N; ++i) {
        guard.charge();
        bool bad = false;
        if (lt.has_fail_) {
          const std::uint64_t* row = cb.row(i);
          for (std::size_t j = 0; j < lt.words_ && !bad; ++j) {
            if (row[j] & lt.fail_mask_[j]) bad = true;
          }
        }
        if (!bad && lt.has_cover_) {
          const std::uint64_t* row = cb.row(i);
          for (std::size_t j = 0; j < lt.words_ && !bad; ++j) {
            if (lt.cover_mask_[j] & ~row[j]) bad = true;
          }
        }
        if (bad) continue;
        double score = lt.base_;
        const std::uint64_t* row = cb.row(i);
        for (int sym = 0; sym < lt.ny_; ++sym) {
          if (lt.w_[sym] == 0.0) continue;
          const std::uint64_t* mask = lt.symbol_masks_.data() + sym * lt.words_;
          std::uint32_t c = 0;
          for (std::size_t j = 0; j < lt.words_; ++j) {
            c += std::popcount(row[j] & mask[j]);
          }
          score += lt.w_[sym] * c;
        }
        if (score > thr_empty) return finish(1, {i});
      }
      continue;
    }

    if (t == 2) {
      PairScan ps = build_pair_scan(cb, lt, lt.w_, lt.ny_, lt.symbol_masks_,
                                    lt.fail_mask_, lt.has_fail_);
      const double thr_sub = d_threshold(part.d, t, 1, log_m, gamma);
      std::vector<double> pos_sorted(ps.order.size());
      for (std::size_t idx = 0; idx < ps.order.size(); ++idx) {
        pos_sorted[idx] = ps.pos[ps.order[idx]];
      }
      std::vector<std::uint32_t> cv(lt.ny_);

      for (long long i = 0; i + 1 < N; ++i) {
        if (ps.excluded[i]) continue;
        double cutoff = thr_empty - lt.base_ - ps.s[i];
        // candidates are the sorted prefix with pos strictly above the cutoff
        std::size_t hi =
            std::lower_bound(pos_sorted.begin(), pos_sorted.end(), cutoff,
                             [](double a, double b) { return a > b; }) -
            pos_sorted.begin();
        long long best_j = -1;
        const std::uint64_t* mi = ps.row_masks(i);
        const std::uint32_t* ci = ps.row_counts(i);
        for (std::size_t cand = 0; cand < hi; ++cand) {
          long long j = ps.order[cand];
          if (j <= i) continue;
          if (best_j >= 0 && j >= best_j) continue;
          guard.charge();
          const std::uint32_t* cj = ps.row_counts(j);
          double ub = lt.base_ + ps.s[i] + ps.s[j];
          for (int sym = 0; sym < lt.ny_; ++sym) {
            if (lt.w_[sym] < 0.0) {
              ub += -lt.w_[sym] * std::min(ci[sym], cj[sym]);
            }
          }
          if (!(ub > thr_empty)) continue;
          const std::uint64_t* mj = ps.row_masks(j);
          double score = lt.base_;
          for (int sym = 0; sym < lt.ny_; ++sym) {
            std::uint32_t c = 0;
            const std::uint64_t* a = mi + sym * ps.words;
            const std::uint64_t* b = mj + sym * ps.words;
            for (std::size_t wd = 0; wd < ps.words; ++wd) {
              c += std::popcount(a[wd] | b[wd]);
            }
            cv[sym] = c;
            if (lt.w_[sym] != 0.0) score += lt.w_[sym] * c;
          }
          if (!(score > thr_empty)) continue;
          if (lt.has_cover_) {
            bool covered = true;
            const std::uint64_t* ri = cb.row(i);
            const std::uint64_t* rj = cb.row(j);
            for (std::size_t wd = 0; wd < ps.words && covered; ++wd) {
              if (lt.cover_mask_[wd] & ~(ri[wd] | rj[wd])) covered = false;
            }
            if (!covered) continue;
          }
          bool ok = true;
          for (int side = 0; side < 2 && ok; ++side) {
            const std::uint32_t* ck = side == 0 ? ci : cj;
            double sub = 0.0;
            for (int sym = 0; sym < lt.ny_ && ok; ++sym) {
              if (lt.symbol_counts_[sym] == 0) continue;
              std::uint32_t n11 = ck[sym];
              std::uint32_t n01 = cv[sym] - n11;
              std::uint32_t n00 = lt.symbol_counts_[sym] - cv[sym];
              const std::size_t b0 =
                  (static_cast<std::size_t>(1) * 2) * 2 * static_cast<std::size_t>(lt.ny_);
              struct {
                std::uint32_t count;
                std::size_t at;
              } cells[3] = {
                  {n11, b0 + 3u * lt.ny_ + sym},
                  {n01, b0 + 1u * lt.ny_ + sym},
                  {n00, b0 + 0u * lt.ny_ + sym},
              };
              for (const auto& cell : cells) {
                if (cell.count == 0) continue;
                double dv = lt.dens_[cell.at];
                if (dv == -kInf) {
                  ok = false;
                  break;
                }
                sub += dv * cell.count;
              }
            }
            if (ok && !(sub > thr_sub)) ok = false;
          }
          if (ok) best_j = j;
        }
        if (best_j >= 0) return finish(2, {i, best_j});
      }
      continue;
    }

    // generic scan for t >= 3: ascending combinations with an OR stack
    {
      std::vector<long long> tuple(t);
      std::vector<std::uint64_t> or_stack(static_cast<std::size_t>(t + 1) * lt.words_, 0);
      std::vector<long long> found;

      auto scan = [&](auto&& self, int depth, long long start) -> bool {
        for (long long i = start; i <= N - (t - depth); ++i) {
          tuple[depth] = i;
          const std::uint64_t* row = cb.row(i);
          std::uint64_t* cur = or_stack.data() + (depth + 1) * lt.words_;
          const std::uint64_t* prev = or_stack.data() + depth * lt.words_;
          for (std::size_t j = 0; j < lt.words_; ++j) cur[j] = prev[j] | row[j];
          if (depth + 1 == t) {
            guard.charge();
            bool bad = false;
            if (lt.has_fail_) {
              for (std::size_t j = 0; j < lt.words_ && !bad; ++j) {
                if (cur[j] & lt.fail_mask_[j]) bad = true;
              }
            }
            if (!bad && lt.has_cover_) {
              for (std::size_t j = 0; j < lt.words_ && !bad; ++j) {
                if (lt.cover_mask_[j] & ~cur[j]) bad = true;
              }
            }
            if (bad) continue;
            double score = lt.base_;
            for (int sym = 0; sym < lt.ny_; ++sym) {
              if (lt.w_[sym] == 0.0) continue;
              const std::uint64_t* mask = lt.symbol_masks_.data() + sym * lt.words_;
              std::uint32_t c = 0;
              for (std::size_t j = 0; j < lt.words_; ++j) {
                c += std::popcount(cur[j] & mask[j]);
              }
              score += lt.w_[sym] * c;
            }
            if (!(score > thr_empty)) continue;
            bool ok = true;
            for (std::uint32_t J = 1; J < (1u << t) - 1u && ok; ++J) {
              double sub = lt.subset_score(J, tuple);
              double thr = d_threshold(part.d, t, std::popcount(J), log_m, gamma);
              if (!(sub > thr)) ok = false;
            }
            if (ok) {
              found = tuple;
              return true;
            }
          } else {
            if (self(self, depth + 1, i + 1)) return true;
          }
        }
        return false;
      };
      if (scan(scan, 0, 0)) return finish(t, found);
    }
  }
  out.m = 0;
  out.t_loop_exit = 0;
  out.tuples_evaluated = guard.used;
  return out;
}

double hausdorff_linf(const std::vector<std::vector<double>>& a,
                      const std::vector<std::vector<double>>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return kInf;
  auto linf = [](const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) throw contract_error("dimension mismatch");
    double m = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) m = std::max(m, std::abs(u[j] - v[j]));
    return m;
  };
  double rho = 0.0;
  for (const auto& u : a) {
    double best = kInf;
    for (const auto& v : b) best = std::min(best, linf(u, v));
    rho = std::max(rho, best);
  }
  for (const auto& v : b) {
    double best = kInf;
    for (const auto& u : a) best = std::min(best, linf(u, v));
    rho = std::max(rho, best);
  }
  return rho;
}

ResolutionOutcome run_resolution(const std::vector<std::vector<double>>& targets,
                                 const DecodeOutput& out, double delta) {
  if (targets.empty()) throw contract_error("at least one target is required");
  ResolutionOutcome r;
  if (out.m == 0) {
    r.rho = kInf;
    r.excess = true;
    return r;
  }
  r.rho = hausdorff_linf(targets, out.centers);
  r.excess = r.rho > delta;
  return r;
}

}  // namespace tq
