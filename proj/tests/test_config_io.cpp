#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "tqsearch/config_io.hpp"
#include "tqsearch/errors.hpp"
#include "tqsearch/ormac.hpp"

using nlohmann::json;

TEST_SUITE("config_io") {

TEST_CASE("noise map shorthand") {
  auto c = tq::noise_map_from_shorthand("const:0.11");
  CHECK(c(0.0) == 0.11);
  CHECK(c(1.0) == 0.11);
  CHECK(c.mu() == 0.0);

  auto a = tq::noise_map_from_shorthand("affine:0.3,0.1");
  CHECK(a(0.0) == doctest::Approx(0.3));
  CHECK(a(0.5) == doctest::Approx(0.35));
  CHECK(a.mu() == doctest::Approx(0.1));

  auto t = tq::noise_map_from_shorthand("table:0=0.2,0.5=0.4,1=0.3");
  CHECK(t(0.0) == doctest::Approx(0.2));
  CHECK(t(0.25) == doctest::Approx(0.3));
  CHECK(t(1.0) == doctest::Approx(0.3));

  CHECK_THROWS_AS(tq::noise_map_from_shorthand("0.11"), tq::contract_error);
  CHECK_THROWS_AS(tq::noise_map_from_shorthand("gauss:0.1"), tq::contract_error);
  CHECK_THROWS_AS(tq::noise_map_from_shorthand("const:abc"), tq::contract_error);
  CHECK_THROWS_AS(tq::noise_map_from_shorthand("const:0.1x"), tq::contract_error);
  CHECK_THROWS_AS(tq::noise_map_from_shorthand("affine:0.3"), tq::contract_error);
  CHECK_THROWS_AS(tq::noise_map_from_shorthand("table:0.5"), tq::contract_error);
}

TEST_CASE("family and shorthand compose") {
  auto bsc = tq::noise_from_family("bsc", tq::noise_map_from_shorthand("const:0.3"));
  CHECK(bsc.transition_prob(0.5, 0, 1) == doctest::Approx(0.3));
  auto bec = tq::noise_from_family("bec", tq::noise_map_from_shorthand("const:0.4"));
  CHECK(bec.transition_prob(0.5, 1, 2) == doctest::Approx(0.4));
  CHECK_THROWS_AS(tq::noise_from_family("custom",
                                        tq::noise_map_from_shorthand("const:0.3")),
                  tq::contract_error);
  CHECK_THROWS_AS(tq::noise_from_family("awgn",
                                        tq::noise_map_from_shorthand("const:0.3")),
                  tq::contract_error);
}

TEST_CASE("noise json round trip") {
  json spec = {{"family", "bsc"},
               {"f", {{"kind", "affine"}, {"a", 0.3}, {"b", 0.1}}},
               {"mu", 0.1}};
  auto noise = tq::noise_from_json(spec);
  CHECK(noise.family() == tq::Family::Bsc);
  CHECK(noise.mu() == doctest::Approx(0.1));
  CHECK(noise.transition_prob(0.5, 1, 1) == doctest::Approx(0.65));

  auto back = tq::noise_from_json(tq::noise_to_json(noise));
  for (double q : {0.0, 0.25, 0.5, 1.0}) {
    for (int z = 0; z < 2; ++z) {
      for (int y = 0; y < 2; ++y) {
        CHECK(back.transition_prob(q, z, y) == noise.transition_prob(q, z, y));
      }
    }
  }

  // mu defaults to the derived constant when absent
  json nomu = {{"family", "bec"}, {"f", {{"kind", "affine"}, {"a", 0.6}, {"b", 0.2}}}};
  auto bec = tq::noise_from_json(nomu);
  CHECK(bec.mu() == doctest::Approx(0.2));

  json lowmu = {{"family", "bsc"},
                {"f", {{"kind", "affine"}, {"a", 0.3}, {"b", 0.1}}},
                {"mu", 0.05}};
  CHECK_THROWS_AS(tq::noise_from_json(lowmu), tq::contract_error);
}

TEST_CASE("custom channel json") {
  json spec = {{"family", "custom"},
               {"f", {{"kind", "constant"}, {"a", 0.5}}},
               {"levels", {0.0, 1.0}},
               {"tables",
                {{1.0, 0.0, 0.0, 1.0},      // identity at level 0
                 {0.5, 0.5, 0.5, 0.5}}},    // pure noise at level 1
               {"alphabet", {"0", "1"}}};
  auto noise = tq::noise_from_json(spec);
  CHECK(noise.family() == tq::Family::Custom);
  CHECK(noise.transition_prob_at_level(0.5, 0, 0) == doctest::Approx(0.75));
  auto back = tq::noise_from_json(tq::noise_to_json(noise));
  CHECK(back.transition_prob_at_level(0.25, 1, 0) ==
        noise.transition_prob_at_level(0.25, 1, 0));

  json missing = spec;
  missing.erase("tables");
  CHECK_THROWS_AS(tq::noise_from_json(missing), tq::contract_error);
}

TEST_CASE("noise json rejects malformed specs") {
  CHECK_THROWS_AS(tq::noise_from_json(json::array()), tq::contract_error);
  CHECK_THROWS_AS(tq::noise_from_json(json{{"family", "bsc"}}), tq::contract_error);
  CHECK_THROWS_AS(
      tq::noise_from_json(json{{"family", "bsc"},
                               {"f", {{"kind", "constant"}, {"a", 0.1}}},
                               {"extra", 1}}),
      tq::contract_error);
  CHECK_THROWS_AS(
      tq::noise_from_json(json{{"family", "bsc"},
                               {"f", {{"kind", "constant"}, {"a", "x"}}}}),
      tq::contract_error);
  CHECK_THROWS_AS(
      tq::noise_from_json(json{{"family", "bsc"},
                               {"f", {{"kind", "spline"}, {"a", 0.1}}}}),
      tq::contract_error);
}

TEST_CASE("experiment config json round trip") {
  json doc = {{"noise",
               {{"family", "bsc"}, {"f", {{"kind", "affine"}, {"a", 0.3}, {"b", 0.1}}}}},
              {"k", 2},
              {"d", 1},
              {"eps", 0.3},
              {"n", {100, 200, 400}},
              {"runs_per_batch", 1000},
              {"batches", 10},
              {"seed", 77},
              {"timing", true}};
  auto cfg = tq::config_from_json(doc);
  CHECK(cfg.k == 2);
  CHECK(cfg.d == 1);
  CHECK(cfg.eps == 0.3);
  CHECK(cfg.n_list == std::vector<long long>{100, 200, 400});
  CHECK(cfg.runs_per_batch == 1000);
  CHECK(cfg.batches == 10);
  CHECK(cfg.master_seed == 77);
  CHECK(cfg.m_override == 0);
  CHECK(cfg.gamma_override == -1.0);
  CHECK(cfg.p_override == -1.0);
  CHECK(cfg.timing);

  auto cfg2 = tq::config_from_json(tq::config_to_json(cfg));
  CHECK(tq::config_to_json(cfg2) == tq::config_to_json(cfg));

  // scalar n is accepted
  json scalar = doc;
  scalar["n"] = 64;
  CHECK(tq::config_from_json(scalar).n_list == std::vector<long long>{64});

  json typo = doc;
  typo["batchs"] = 10;
  CHECK_THROWS_AS(tq::config_from_json(typo), tq::contract_error);
  json noiseless = doc;
  noiseless.erase("noise");
  CHECK_THROWS_AS(tq::config_from_json(noiseless), tq::contract_error);
  json badk = doc;
  badk["k"] = "two";
  CHECK_THROWS_AS(tq::config_from_json(badk), tq::contract_error);
}

TEST_CASE("rac report serialization") {
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::constant(0.2));
  auto report = tq::verify_rac_assumptions(noise, 0.4, 2);
  auto j = tq::rac_report_to_json(report);
  CHECK(j["permutation_invariant"].get<bool>() == report.permutation_invariant);
  CHECK(j["all_hold"].get<bool>() == report.all_hold());
  CHECK(j["friendliness_margin"].get<double>() == report.friendliness_margin);
  CHECK(j.contains("witness"));
}

}  // TEST_SUITE
