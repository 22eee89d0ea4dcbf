#include "tqsearch/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "tqsearch/errors.hpp"

namespace tq {

namespace {

constexpr int kRangeGridPoints = 257;

std::string format_q(double q) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", q);
  return buf;
}

double resolve_mu(double derived, double explicit_mu) {
  if (explicit_mu < 0.0) return derived;
  if (explicit_mu < derived - 1e-12) {
    throw contract_error("mu=" + format_q(explicit_mu) +
                         " is below the Lipschitz constant " + format_q(derived) +
                         " of the noise map");
  }
  return explicit_mu;
}

}  // namespace

NoiseMap NoiseMap::constant(double a, double mu) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw contract_error("constant noise level must lie in [0, 1]");
  }
  NoiseMap m;
  m.kind_ = Kind::Constant;
  m.a_ = a;
  m.mu_ = resolve_mu(0.0, mu);
  return m;
}

NoiseMap NoiseMap::affine(double a, double b, double mu) {
  if (!(a >= 0.0 && a <= 1.0) || !(a + b >= 0.0 && a + b <= 1.0)) {
    throw contract_error("affine noise map must stay in [0, 1] on [0, 1]");
  }
  NoiseMap m;
  m.kind_ = Kind::Affine;
  m.a_ = a;
  m.b_ = b;
  m.mu_ = resolve_mu(std::abs(b), mu);
  return m;
}

NoiseMap NoiseMap::table(std::vector<double> q, std::vector<double> f, double mu) {
  if (q.size() != f.size() || q.size() < 2) {
    throw contract_error("noise table needs matching q/f arrays with at least 2 points");
  }
  if (std::abs(q.front()) > 1e-12 || std::abs(q.back() - 1.0) > 1e-12) {
    throw contract_error("noise table must cover q in [0, 1]");
  }
  double slope = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(f[i] >= 0.0 && f[i] <= 1.0)) {
      throw contract_error("noise table values must lie in [0, 1]");
    }
    if (i > 0) {
      if (!(q[i] > q[i - 1])) {
        throw contract_error("noise table q values must be strictly increasing");
      }
      slope = std::max(slope, std::abs(f[i] - f[i - 1]) / (q[i] - q[i - 1]));
    }
  }
  NoiseMap m;
  m.kind_ = Kind::Table;
  m.q_ = std::move(q);
  m.f_ = std::move(f);
  m.mu_ = resolve_mu(slope, mu);
  return m;
}

double NoiseMap::operator()(double q) const {
  if (!(q >= -1e-12 && q <= 1.0 + 1e-12)) {
    throw contract_error("query size q=" + format_q(q) + " outside [0, 1]");
  }
  q = std::clamp(q, 0.0, 1.0);
  switch (kind_) {
    case Kind::Constant:
      return a_;
    case Kind::Affine:
      return a_ + b_ * q;
    case Kind::Table: {
      auto it = std::upper_bound(q_.begin(), q_.end(), q);
      if (it == q_.begin()) return f_.front();
      if (it == q_.end()) return f_.back();
      std::size_t hi = static_cast<std::size_t>(it - q_.begin());
      std::size_t lo = hi - 1;
      double w = (q - q_[lo]) / (q_[hi] - q_[lo]);
      return f_[lo] + w * (f_[hi] - f_[lo]);
    }
  }
  return a_;
}

NoiseModel::NoiseModel(Family family, NoiseMap f) : family_(family), f_(std::move(f)) {}

NoiseModel NoiseModel::bsc(NoiseMap f) {
  NoiseModel m(Family::Bsc, std::move(f));
  m.alphabet_ = {"0", "1"};
  m.validate_range();
  return m;
}

NoiseModel NoiseModel::bec(NoiseMap f) {
  NoiseModel m(Family::Bec, std::move(f));
  m.alphabet_ = {"0", "1", "e"};
  m.validate_range();
  return m;
}

NoiseModel NoiseModel::custom(NoiseMap f, std::vector<double> levels,
                              std::vector<std::vector<double>> tables,
                              std::vector<std::string> alphabet) {
  if (alphabet.size() < 2) {
    throw contract_error("custom channel needs at least 2 output symbols");
  }
  if (levels.empty() || tables.size() != levels.size()) {
    throw contract_error("custom channel needs one table per noise level");
  }
  for (std::size_t j = 0; j < levels.size(); ++j) {
    if (!(levels[j] >= 0.0 && levels[j] <= 1.0)) {
      throw contract_error("custom channel levels must lie in [0, 1]");
    }
    if (j > 0 && !(levels[j] > levels[j - 1])) {
      throw contract_error("custom channel levels must be strictly increasing");
    }
    if (tables[j].size() != 2 * alphabet.size()) {
      throw contract_error("custom channel table must be 2 x |alphabet|");
    }
    for (int z = 0; z < 2; ++z) {
      double row = 0.0;
      for (std::size_t y = 0; y < alphabet.size(); ++y) {
        double p = tables[j][z * alphabet.size() + y];
        if (!(p >= 0.0 && p <= 1.0)) {
          throw contract_error("custom channel probabilities must lie in [0, 1]");
        }
        row += p;
      }
      if (std::abs(row - 1.0) > 1e-9) {
        throw contract_error("custom channel table rows must sum to 1");
      }
    }
  }
  NoiseModel m(Family::Custom, std::move(f));
  m.alphabet_ = std::move(alphabet);
  m.levels_ = std::move(levels);
  m.tables_ = std::move(tables);
  m.validate_range();
  return m;
}

void NoiseModel::validate_range() const {
  for (int i = 0; i < kRangeGridPoints; ++i) {
    double q = static_cast<double>(i) / (kRangeGridPoints - 1);
    double r = f_(q);
    switch (family_) {
      case Family::Bsc:
        if (!(r >= 0.0 && r <= 0.5 + 1e-12)) {
          throw contract_error("bsc noise level f(" + format_q(q) + ")=" + format_q(r) +
                               " outside [0, 1/2]");
        }
        break;
      case Family::Bec:
        if (!(r >= 0.0 && r < 1.0)) {
          throw contract_error("bec noise level f(" + format_q(q) + ")=" + format_q(r) +
                               " outside [0, 1)");
        }
        break;
      case Family::Custom:
        if (r < levels_.front() - 1e-12 || r > levels_.back() + 1e-12) {
          throw contract_error("custom noise level f(" + format_q(q) + ")=" + format_q(r) +
                               " outside the table range");
        }
        break;
    }
  }
}

double NoiseModel::noise_level(double q) const { return f_(q); }

double NoiseModel::level_or_throw(double q) const {
  double r = f_(q);
  if (family_ == Family::Custom) {
    if (r < levels_.front() - 1e-12 || r > levels_.back() + 1e-12) {
      throw contract_error("noise level " + format_q(r) + " outside the table range");
    }
    r = std::clamp(r, levels_.front(), levels_.back());
  }
  return r;
}

double NoiseModel::transition_prob(double q, int z, int y) const {
  return transition_prob_at_level(level_or_throw(q), z, y);
}

double NoiseModel::transition_prob_at_level(double r, int z, int y) const {
  if (z != 0 && z != 1) throw contract_error("channel input must be 0 or 1");
  if (y < 0 || y >= output_size()) throw contract_error("output symbol index out of range");
  switch (family_) {
    case Family::Bsc:
      if (!(r >= 0.0 && r <= 1.0)) throw contract_error("noise level outside [0, 1]");
      return y == z ? 1.0 - r : r;
    case Family::Bec:
      if (!(r >= 0.0 && r <= 1.0)) throw contract_error("noise level outside [0, 1]");
      if (y == 2) return r;
      return y == z ? 1.0 - r : 0.0;
    case Family::Custom: {
      if (r < levels_.front() - 1e-12 || r > levels_.back() + 1e-12) {
        throw contract_error("noise level " + format_q(r) + " outside the table range");
      }
      r = std::clamp(r, levels_.front(), levels_.back());
      std::size_t cell = static_cast<std::size_t>(z) * alphabet_.size() +
                         static_cast<std::size_t>(y);
      auto it = std::upper_bound(levels_.begin(), levels_.end(), r);
      if (it == levels_.begin()) return tables_.front()[cell];
      if (it == levels_.end()) return tables_.back()[cell];
      std::size_t hi = static_cast<std::size_t>(it - levels_.begin());
      std::size_t lo = hi - 1;
      double w = (r - levels_[lo]) / (levels_[hi] - levels_[lo]);
      return tables_[lo][cell] + w * (tables_[hi][cell] - tables_[lo][cell]);
    }
  }
  return 0.0;
}

int NoiseModel::sample_output(double q, int z, Rng& rng) const {
  double r = level_or_throw(q);
  double u = rng.next_double();
  double cum = 0.0;
  int last_positive = 0;
  for (int y = 0; y < output_size(); ++y) {
    double p = transition_prob_at_level(r, z, y);
    if (p > 0.0) last_positive = y;
    cum += p;
    if (u < cum) return y;
  }
  return last_positive;
}

double NoiseModel::continuity_constant(double q) const {
  double r = level_or_throw(q);
  if (family_ == Family::Bsc || family_ == Family::Bec) {
    double m = std::min(r, 1.0 - r);
    if (m <= 0.0) {
      throw contract_error("continuity constant is unbounded at noise level " + format_q(r));
    }
    return 1.0 / m;
  }
  const double h = 1e-6;
  double lo = std::max(r - h, levels_.front());
  double hi = std::min(r + h, levels_.back());
  if (hi - lo < 1e-12) {
    throw contract_error("noise level table too narrow to estimate the continuity constant");
  }
  double c = 0.0;
  for (int z = 0; z < 2; ++z) {
    for (int y = 0; y < output_size(); ++y) {
      double plo = transition_prob_at_level(lo, z, y);
      double phi = transition_prob_at_level(hi, z, y);
      if (plo <= 0.0 && phi <= 0.0) continue;
      if (plo <= 0.0 || phi <= 0.0) {
        throw contract_error("continuity constant is unbounded near noise level " +
                             format_q(r));
      }
      c = std::max(c, std::abs(std::log(phi) - std::log(plo)) / (hi - lo));
    }
  }
  return c;
}

}  // namespace tq
