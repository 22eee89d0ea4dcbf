#include <doctest.h>

#include <cmath>
#include <vector>

#include "tqsearch/channel.hpp"
#include "tqsearch/errors.hpp"
#include "tqsearch/rng.hpp"

using tq::NoiseMap;
using tq::NoiseModel;

namespace {

// BEC-shaped custom channel: exact linear dependence on the level, so the
// interpolated table reproduces a BEC on [0.3, 0.7].
NoiseModel bec_like_custom(NoiseMap f) {
  std::vector<double> levels = {0.3, 0.5, 0.7};
  std::vector<std::vector<double>> tables;
  for (double r : levels) {
    tables.push_back({1.0 - r, 0.0, r,
                      0.0, 1.0 - r, r});
  }
  return NoiseModel::custom(std::move(f), levels, tables, {"0", "1", "e"});
}

NoiseModel asymmetric_custom() {
  std::vector<double> levels = {0.1, 0.9};
  std::vector<std::vector<double>> tables = {
      {0.9, 0.1, 0.15, 0.85},
      {0.3, 0.7, 0.6, 0.4},
  };
  return NoiseModel::custom(NoiseMap::affine(0.2, 0.6), levels, tables, {"a", "b"});
}

std::vector<NoiseModel> property_models() {
  std::vector<NoiseModel> models;
  models.push_back(NoiseModel::bsc(NoiseMap::constant(0.3)));
  models.push_back(NoiseModel::bsc(NoiseMap::affine(0.3, 0.1)));
  models.push_back(NoiseModel::bec(NoiseMap::affine(0.6, 0.2)));
  models.push_back(bec_like_custom(NoiseMap::affine(0.4, 0.2)));
  models.push_back(asymmetric_custom());
  return models;
}

}  // namespace

TEST_SUITE("channels") {

TEST_CASE("bsc transition probabilities") {
  auto m = NoiseModel::bsc(NoiseMap::constant(0.3));
  CHECK(m.transition_prob(0.7, 0, 1) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(m.transition_prob(0.7, 0, 0) == doctest::Approx(0.7).epsilon(1e-12));

  auto affine = NoiseModel::bsc(NoiseMap::affine(0.3, 0.1));
  CHECK(affine.transition_prob(0.5, 1, 1) == doctest::Approx(0.65).epsilon(1e-12));
  CHECK(affine.noise_level(0.5) == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("bec transition probabilities") {
  auto m = NoiseModel::bec(NoiseMap::constant(0.4));
  CHECK(m.transition_prob(0.2, 1, 2) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(m.transition_prob(0.2, 1, 0) == 0.0);
  CHECK(m.transition_prob(0.2, 1, 1) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(m.alphabet() == std::vector<std::string>{"0", "1", "e"});
}

TEST_CASE("custom table interpolates linearly in the level") {
  auto m = bec_like_custom(NoiseMap::affine(0.4, 0.2));
  auto bec = NoiseModel::bec(NoiseMap::affine(0.4, 0.2));
  for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (int z = 0; z < 2; ++z) {
      for (int y = 0; y < 3; ++y) {
        CHECK(m.transition_prob(q, z, y) ==
              doctest::Approx(bec.transition_prob(q, z, y)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("noise map table interpolation and derived mu") {
  auto f = NoiseMap::table({0.0, 0.5, 1.0}, {0.1, 0.2, 0.4});
  CHECK(f(0.25) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(f(0.75) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.mu() == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(NoiseMap::affine(0.3, 0.1).mu() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(NoiseMap::constant(0.3).mu() == 0.0);
}

TEST_CASE("continuity constant closed forms") {
  CHECK(NoiseModel::bsc(NoiseMap::constant(0.25)).continuity_constant(0.5) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(NoiseModel::bsc(NoiseMap::constant(0.5)).continuity_constant(0.5) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(NoiseModel::bec(NoiseMap::constant(0.5)).continuity_constant(0.5) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("continuity constant finite difference matches closed form") {
  auto m = bec_like_custom(NoiseMap::constant(0.5));
  CHECK(m.continuity_constant(0.3) == doctest::Approx(2.0).epsilon(1e-6));
  auto m2 = bec_like_custom(NoiseMap::affine(0.4, 0.2));
  CHECK(m2.continuity_constant(0.0) == doctest::Approx(1.0 / 0.4).epsilon(1e-6));
}

TEST_CASE("rows are stochastic on a 100-point grid") {
  for (const auto& m : property_models()) {
    for (int i = 0; i < 100; ++i) {
      double q = static_cast<double>(i) / 99.0;
      for (int z = 0; z < 2; ++z) {
        double sum = 0.0;
        for (int y = 0; y < m.output_size(); ++y) {
          double p = m.transition_prob(q, z, y);
          CHECK(p >= 0.0);
          CHECK(p <= 1.0);
          sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("log-likelihood shifts stay under the continuity constant") {
  for (const auto& m : property_models()) {
    for (int i = 1; i < 20; ++i) {
      double q = static_cast<double>(i) / 20.0;
      double r = m.noise_level(q);
      if (r <= 0.0 || r >= 1.0) continue;
      double c = m.continuity_constant(q);
      for (double xi : {1e-3, 1e-4}) {
        for (double sign : {-1.0, 1.0}) {
          double q2 = q + sign * xi;
          if (q2 < 0.0 || q2 > 1.0) continue;
          double worst = 0.0;
          for (int z = 0; z < 2; ++z) {
            for (int y = 0; y < m.output_size(); ++y) {
              double p1 = m.transition_prob(q, z, y);
              double p2 = m.transition_prob(q2, z, y);
              if (p1 <= 0.0 || p2 <= 0.0) continue;
              worst = std::max(worst, std::abs(std::log(p1) - std::log(p2)));
            }
          }
          CHECK(worst <= c * xi * (1.0 + 1e-2));
        }
      }
    }
  }
}

TEST_CASE("sampling is deterministic given the seed") {
  auto m = NoiseModel::bec(NoiseMap::affine(0.6, 0.2));
  tq::Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(m.sample_output(0.3, i & 1, a) == m.sample_output(0.3, i & 1, b));
  }
}

TEST_CASE("noiseless and fully erased channels sample deterministically") {
  auto noiseless = NoiseModel::bsc(NoiseMap::constant(0.0));
  tq::Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    int z = i & 1;
    CHECK(noiseless.sample_output(0.5, z, rng) == z);
  }
  auto erased = NoiseModel::bec(NoiseMap::constant(1.0 - 1e-15));
  for (int i = 0; i < 1000; ++i) {
    CHECK(erased.sample_output(0.5, i & 1, rng) == 2);
  }
}

TEST_CASE("empirical crossover rate matches the transition probability") {
  auto m = NoiseModel::bsc(NoiseMap::constant(0.3));
  tq::Rng rng(7);
  int ones = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    if (m.sample_output(0.5, 0, rng) == 1) ++ones;
  }
  double hat = static_cast<double>(ones) / n;
  CHECK(std::abs(hat - 0.3) <= 0.002);
}

TEST_CASE("sampled frequencies pass a chi-square check") {
  const int draws = 100000;
  int suite_index = 0;
  for (const auto& m : property_models()) {
    tq::Rng rng(100 + suite_index++);
    for (int z = 0; z < 2; ++z) {
      double q = 0.5;
      std::vector<int> counts(m.output_size(), 0);
      for (int i = 0; i < draws; ++i) ++counts[m.sample_output(q, z, rng)];
      double stat = 0.0;
      int dof = -1;
      for (int y = 0; y < m.output_size(); ++y) {
        double expect = draws * m.transition_prob(q, z, y);
        if (expect <= 0.0) {
          CHECK(counts[y] == 0);
          continue;
        }
        ++dof;
        double diff = counts[y] - expect;
        stat += diff * diff / expect;
      }
      // 3-sigma chi-square quantile via the Wilson-Hilferty cube approximation.
      double u = 2.0 / (9.0 * dof);
      double limit = dof * std::pow(1.0 - u + 3.0 * std::sqrt(u), 3.0);
      CHECK(stat <= limit);
    }
  }
}

TEST_CASE("invalid configurations are rejected") {
  CHECK_THROWS_AS(NoiseModel::bsc(NoiseMap::affine(0.4, 0.2)), tq::contract_error);
  CHECK_THROWS_AS(NoiseModel::bec(NoiseMap::constant(1.0)), tq::contract_error);
  CHECK_THROWS_AS(NoiseMap::constant(1.5), tq::contract_error);
  CHECK_THROWS_AS(NoiseMap::affine(0.3, 0.1, 0.05), tq::contract_error);
  CHECK_THROWS_AS(NoiseMap::table({0.0, 1.0}, {0.1}), tq::contract_error);
  CHECK_THROWS_AS(NoiseMap::table({0.2, 1.0}, {0.1, 0.2}), tq::contract_error);

  auto m = NoiseModel::bsc(NoiseMap::constant(0.3));
  CHECK_THROWS_AS(m.transition_prob(0.5, 0, 2), tq::contract_error);
  CHECK_THROWS_AS(m.transition_prob(1.5, 0, 1), tq::contract_error);
  CHECK_THROWS_AS(m.transition_prob(0.5, 2, 1), tq::contract_error);

  CHECK_THROWS_AS(NoiseModel::bsc(NoiseMap::constant(0.0)).continuity_constant(0.5),
                  tq::contract_error);
  CHECK_THROWS_AS(
      NoiseModel::custom(NoiseMap::affine(0.2, 0.6), {0.1, 0.9},
                         {{0.9, 0.2, 0.15, 0.85}, {0.3, 0.7, 0.6, 0.4}}, {"a", "b"}),
      tq::contract_error);
  CHECK_THROWS_AS(bec_like_custom(NoiseMap::affine(0.1, 0.2)), tq::contract_error);
}

}  // TEST_SUITE
