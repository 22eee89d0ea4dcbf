#pragma once

#include <string>
#include <vector>

#include "tqsearch/rng.hpp"

namespace tq {

// Noise level as a function of query size q in [0, 1].
class NoiseMap {
 public:
  enum class Kind { Constant, Affine, Table };

  // mu < 0 derives the Lipschitz constant from the map itself
  // (0 for constant, |b| for affine, max segment slope for table).
  // An explicit mu below the derived value is rejected.
  static NoiseMap constant(double a, double mu = -1.0);
  static NoiseMap affine(double a, double b, double mu = -1.0);
  static NoiseMap table(std::vector<double> q, std::vector<double> f, double mu = -1.0);

  double operator()(double q) const;
  double mu() const { return mu_; }

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const std::vector<double>& table_q() const { return q_; }
  const std::vector<double>& table_f() const { return f_; }

 private:
  NoiseMap() = default;

  Kind kind_ = Kind::Constant;
  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<double> q_;
  std::vector<double> f_;
  double mu_ = 0.0;
};

enum class Family { Bsc, Bec, Custom };

// Query-dependent memoryless channel: input z in {0,1}, output y indexed into
// alphabet(), per-use law P^{f(q)}(y|z) where q is the size of that use's query.
class NoiseModel {
 public:
  static NoiseModel bsc(NoiseMap f);
  static NoiseModel bec(NoiseMap f);
  // levels must be strictly increasing; tables[j][z * alphabet.size() + y]
  // holds P^{levels[j]}(y|z). Between levels the law is linear in the level.
  static NoiseModel custom(NoiseMap f, std::vector<double> levels,
                           std::vector<std::vector<double>> tables,
                           std::vector<std::string> alphabet);

  Family family() const { return family_; }
  int output_size() const { return static_cast<int>(alphabet_.size()); }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const NoiseMap& noise_map() const { return f_; }
  double mu() const { return f_.mu(); }

  // grid data behind a custom family; empty for BSC/BEC
  const std::vector<double>& levels() const { return levels_; }
  const std::vector<std::vector<double>>& tables() const { return tables_; }

  double noise_level(double q) const;
  double transition_prob(double q, int z, int y) const;
  double transition_prob_at_level(double r, int z, int y) const;
  int sample_output(double q, int z, Rng& rng) const;
  double continuity_constant(double q) const;

 private:
  explicit NoiseModel(Family family, NoiseMap f);

  void validate_range() const;
  double level_or_throw(double q) const;

  Family family_;
  NoiseMap f_;
  std::vector<std::string> alphabet_;
  std::vector<double> levels_;
  std::vector<std::vector<double>> tables_;
};

}  // namespace tq
