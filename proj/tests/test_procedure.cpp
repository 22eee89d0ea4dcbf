#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "tqsearch/channel.hpp"
#include "tqsearch/errors.hpp"
#include "tqsearch/ormac.hpp"
#include "tqsearch/procedure.hpp"
#include "tqsearch/rng.hpp"

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_le(std::ofstream& os, std::uint64_t v, int bytes) {
  char b[8];
  for (int i = 0; i < bytes; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, bytes);
}

// Hand-built codebook file: M=4, d=1, n=16.
// Row bits: row 1 = ones on columns 8..15, rows 2 and 3 = ones on columns
// 0..7, row 4 = all ones.
std::string write_crafted_codebook() {
  std::string path = temp_path("tq_crafted.tqcb");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os.write("TQCB", 4);
  write_le(os, 1, 4);
  write_le(os, 4, 4);
  write_le(os, 1, 4);
  write_le(os, 16, 8);
  write_le(os, std::bit_cast<std::uint64_t>(0.5), 8);
  write_le(os, 99, 8);
  write_le(os, 0xFF00ull, 8);
  write_le(os, 0x00FFull, 8);
  write_le(os, 0x00FFull, 8);
  write_le(os, 0xFFFFull, 8);
  os.close();
  return path;
}

}  // namespace

TEST_SUITE("procedure") {

TEST_CASE("gamma index examples and round trip") {
  tq::CubePartition part(3, 2);
  CHECK(part.cells() == 9);
  CHECK(part.gamma_index({1, 1}) == 1);
  CHECK(part.gamma_index({2, 3}) == 6);
  CHECK(part.gamma_index({3, 3}) == 9);
  for (long long i = 1; i <= 9; ++i) {
    CHECK(part.gamma_index(part.gamma_inverse(i)) == i);
  }
  CHECK_THROWS_AS(part.gamma_index({0, 1}), tq::contract_error);
  CHECK_THROWS_AS(part.gamma_index({1, 4}), tq::contract_error);
  CHECK_THROWS_AS(part.gamma_index({1}), tq::contract_error);
  CHECK_THROWS_AS(part.gamma_inverse(0), tq::contract_error);
  CHECK_THROWS_AS(part.gamma_inverse(10), tq::contract_error);
}

TEST_CASE("quantize examples") {
  tq::CubePartition part(4, 1);
  CHECK(part.quantize(0.3) == 2);
  CHECK(part.quantize(1.0) == 4);
  CHECK(part.quantize(0.0) == 1);
  CHECK(part.quantize(0.26) == 2);
  CHECK_THROWS_AS(part.quantize(-0.1), tq::contract_error);
  CHECK_THROWS_AS(part.quantize(1.1), tq::contract_error);
}

TEST_CASE("cell centers") {
  tq::CubePartition part(4, 1);
  CHECK(part.center(1)[0] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(part.center(4)[0] == doctest::Approx(0.875).epsilon(1e-12));
  tq::CubePartition part2(3, 2);
  auto c = part2.center(6);
  CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c[1] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("codebook degenerate parameters") {
  auto zeros = tq::Codebook::generate(4, 1, 32, 0.0, 5);
  auto ones = tq::Codebook::generate(4, 1, 32, 1.0, 5);
  for (long long l = 0; l < 32; ++l) {
    CHECK(zeros.column_count(l) == 0);
    CHECK(ones.column_count(l) == 4);
    CHECK(ones.column_density(l) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("codebook mean density near p") {
  auto cb = tq::Codebook::generate(2, 10, 256, 0.3, 11);
  CHECK(cb.rows() == 1024);
  double total = 0.0;
  for (long long l = 0; l < cb.n(); ++l) total += cb.column_density(l);
  CHECK(total / cb.n() == doctest::Approx(0.3).epsilon(0.034));
  CHECK(std::abs(total / cb.n() - 0.3) < 0.01);
}

TEST_CASE("codebook determinism") {
  auto a = tq::Codebook::generate(4, 2, 100, 0.4, 123);
  auto b = tq::Codebook::generate(4, 2, 100, 0.4, 123);
  auto c = tq::Codebook::generate(4, 2, 100, 0.4, 124);
  bool same = true, differs = false;
  for (long long i = 0; i < a.rows(); ++i) {
    for (long long l = 0; l < a.n(); ++l) {
      if (a.bit(i, l) != b.bit(i, l)) same = false;
      if (a.bit(i, l) != c.bit(i, l)) differs = true;
    }
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("codebook save and load round trip") {
  std::string path = temp_path("tq_roundtrip.tqcb");
  auto a = tq::Codebook::generate(3, 2, 70, 0.35, 77);
  a.save(path);

  CHECK(std::filesystem::file_size(path) ==
        16u + 24u + static_cast<std::uintmax_t>(a.rows()) * a.words_per_row() * 8u);

  auto b = tq::Codebook::load(path);
  CHECK(b.M() == 3);
  CHECK(b.d() == 2);
  CHECK(b.n() == 70);
  CHECK(b.p() == 0.35);
  CHECK(b.seed() == 77);
  CHECK(b.rows() == 9);
  for (long long i = 0; i < a.rows(); ++i) {
    for (long long l = 0; l < a.n(); ++l) CHECK(a.bit(i, l) == b.bit(i, l));
  }
  for (long long l = 0; l < a.n(); ++l) {
    CHECK(a.column_count(l) == b.column_count(l));
  }
  std::filesystem::remove(path);
}

TEST_CASE("codebook load rejects corrupt files") {
  std::string path = temp_path("tq_corrupt.tqcb");
  auto a = tq::Codebook::generate(2, 1, 16, 0.5, 1);
  a.save(path);
  {
    std::fstream fs(path, std::ios::binary | std::ios::in | std::ios::out);
    fs.seekp(0);
    fs.put('X');
  }
  CHECK_THROWS_AS(tq::Codebook::load(path), tq::contract_error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(tq::Codebook::load(temp_path("tq_missing.tqcb")),
                  tq::contract_error);
}

TEST_CASE("codebook memory cap") {
  CHECK_THROWS_AS(tq::Codebook::generate(32, 2, 1024, 0.5, 1, 1000),
                  tq::resource_error);
  std::string msg;
  try {
    tq::Codebook::generate(32, 2, 1024, 0.5, 1, 1000);
  } catch (const tq::resource_error& e) {
    msg = e.what();
  }
  CHECK(msg.find("bytes") != std::string::npos);
}

TEST_CASE("oracle examples") {
  tq::CubePartition part(2, 1);
  auto cb = tq::Codebook::generate(2, 1, 40, 0.5, 3);
  auto res = tq::oracle_noiseless(part, cb, {{0.2}, {0.8}});
  CHECK(res.k_p == 2);
  REQUIRE(res.w_p.size() == 2);
  CHECK(res.w_p[0] == 1);
  CHECK(res.w_p[1] == 2);
  for (long long l = 0; l < cb.n(); ++l) {
    CHECK(static_cast<int>(res.z[l]) == (cb.bit(0, l) | cb.bit(1, l)));
  }

  auto dedup = tq::oracle_noiseless(part, cb, {{0.26}, {0.3}});
  CHECK(dedup.k_p == 1);
  CHECK(dedup.w_p[0] == 1);

  auto zeros = tq::Codebook::generate(2, 1, 40, 0.0, 3);
  auto res0 = tq::oracle_noiseless(part, zeros, {{0.2}, {0.8}});
  for (auto bitv : res0.z) CHECK(bitv == 0);

  CHECK_THROWS_AS(tq::oracle_noiseless(part, cb, {}), tq::contract_error);
  CHECK_THROWS_AS(tq::oracle_noiseless(part, cb, {{0.2, 0.3}}), tq::contract_error);
}

TEST_CASE("apply_noise noiseless identity") {
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::constant(0.0));
  auto cb = tq::Codebook::generate(4, 1, 64, 0.5, 9);
  tq::CubePartition part(4, 1);
  auto res = tq::oracle_noiseless(part, cb, {{0.1}, {0.6}});
  tq::Rng rng(17);
  auto y = tq::apply_noise(res.z, cb, noise, rng);
  for (std::size_t l = 0; l < y.size(); ++l) CHECK(y[l] == res.z[l]);
}

TEST_CASE("apply_noise constant flip rate") {
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::constant(0.3));
  auto cb = tq::Codebook::generate(2, 1, 100000, 0.5, 21);
  std::vector<std::uint8_t> z(100000, 0);
  tq::Rng rng(33);
  auto y = tq::apply_noise(z, cb, noise, rng);
  long long flips = 0;
  for (int v : y) flips += v;
  CHECK(static_cast<double>(flips) / 100000.0 == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("apply_noise follows realized column density") {
  // M=2, d=1: realized densities are 0, 0.5, or 1; with f(q)=0.3+0.1q the
  // flip rates at those columns are 0.30, 0.35, 0.40.
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::affine(0.3, 0.1));
  auto cb = tq::Codebook::generate(2, 1, 60000, 0.5, 41);
  std::vector<std::uint8_t> z(60000, 0);
  tq::Rng rng(55);
  auto y = tq::apply_noise(z, cb, noise, rng);
  long long flips[3] = {0, 0, 0};
  long long count[3] = {0, 0, 0};
  for (long long l = 0; l < cb.n(); ++l) {
    int cls = cb.column_count(l);
    ++count[cls];
    flips[cls] += y[l];
  }
  REQUIRE(count[1] > 5000);
  CHECK(static_cast<double>(flips[1]) / count[1] ==
        doctest::Approx(0.35).epsilon(0.03));
  if (count[0] > 1000) {
    CHECK(static_cast<double>(flips[0]) / count[0] ==
          doctest::Approx(0.30).epsilon(0.04));
  }
  if (count[2] > 1000) {
    CHECK(static_cast<double>(flips[2]) / count[2] ==
          doctest::Approx(0.40).epsilon(0.04));
  }
  CHECK_THROWS_AS(tq::apply_noise(std::vector<std::uint8_t>(10, 0), cb, noise, rng),
                  tq::contract_error);
}

TEST_CASE("decode recovers targets over a clean channel") {
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::constant(0.0));
  tq::CubePartition part(4, 1);
  auto cb = tq::Codebook::generate(4, 1, 64, 0.5, 2024);
  auto res = tq::oracle_noiseless(part, cb, {{0.2}, {0.8}});
  REQUIRE(res.w_p == std::vector<long long>{1, 4});
  std::vector<int> y(res.z.begin(), res.z.end());
  auto out = tq::decode(y, cb, part, noise, 0.5, 1.0, 2);
  CHECK(out.m == 2);
  CHECK(out.t_loop_exit == 2);
  REQUIRE(out.indices.size() == 2);
  CHECK(out.indices[0] == 1);
  CHECK(out.indices[1] == 4);
  CHECK(out.centers[0][0] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(out.centers[1][0] == doctest::Approx(0.875).epsilon(1e-12));

  auto r = tq::run_resolution({{0.2}, {0.8}}, out, 1.0 / 4.0);
  CHECK_FALSE(r.excess);
  CHECK(r.rho <= 0.125 + 1e-12);
}

TEST_CASE("decode with infinite gamma declares an error") {
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::constant(0.0));
  tq::CubePartition part(4, 1);
  auto cb = tq::Codebook::generate(4, 1, 64, 0.5, 2024);
  auto res = tq::oracle_noiseless(part, cb, {{0.2}, {0.8}});
  std::vector<int> y(res.z.begin(), res.z.end());
  auto out = tq::decode(y, cb, part, noise, 0.5, kInf, 2);
  CHECK(out.m == 0);
  CHECK(out.t_loop_exit == 0);
  auto r = tq::run_resolution({{0.2}, {0.8}}, out, 100.0);
  CHECK(r.excess);
  CHECK(r.rho == kInf);
}

TEST_CASE("decode falls back to t=1 when targets share a sub-cube") {
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::constant(0.0));
  tq::CubePartition part(4, 1);
  auto cb = tq::Codebook::generate(4, 1, 64, 0.5, 909);
  auto res = tq::oracle_noiseless(part, cb, {{0.30}, {0.27}});
  REQUIRE(res.k_p == 1);
  REQUIRE(res.w_p[0] == 2);
  std::vector<int> y(res.z.begin(), res.z.end());
  auto out = tq::decode(y, cb, part, noise, 0.5, 1.0, 2);
  CHECK(out.m == 1);
  CHECK(out.t_loop_exit == 1);
  CHECK(out.indices[0] == 2);
  CHECK(out.centers[0][0] == doctest::Approx(0.375).epsilon(1e-12));
  auto r = tq::run_resolution({{0.30}, {0.27}}, out, 1.0 / 4.0);
  CHECK_FALSE(r.excess);
}

TEST_CASE("decode picks the lexicographically smallest accepting tuple") {
  std::string path = write_crafted_codebook();
  auto cb = tq::Codebook::load(path);
  std::filesystem::remove(path);
  REQUIRE(cb.rows() == 4);
  REQUIRE(cb.n() == 16);
  REQUIRE(cb.bit(0, 8) == 1);
  REQUIRE(cb.bit(0, 0) == 0);
  REQUIRE(cb.bit(3, 0) == 1);

  tq::CubePartition part(4, 1);
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::constant(0.0));
  std::vector<int> y(16, 1);
  // Accepting pairs are (1,2) and (1,3): row 4 alone covers every response,
  // which kills its own conditional score. Rows 2 and 3 are identical, so the
  // tie must resolve to the smaller index.
  auto out = tq::decode(y, cb, part, noise, 0.5, 1.0, 2);
  CHECK(out.m == 2);
  CHECK(out.indices[0] == 1);
  CHECK(out.indices[1] == 2);
}

TEST_CASE("fast scores match the per-symbol reference") {
  auto bsc = tq::NoiseModel::bsc(tq::NoiseMap::constant(0.1));
  auto bec = tq::NoiseModel::bec(tq::NoiseMap::affine(0.2, 0.3));
  auto cb = tq::Codebook::generate(6, 2, 100, 0.4, 314);
  tq::CubePartition part(6, 2);

  for (const auto* noise : {&bsc, &bec}) {
    tq::Rng rng(271);
    auto res = tq::oracle_noiseless(part, cb, {{0.1, 0.2}, {0.7, 0.9}});
    auto y = tq::apply_noise(res.z, cb, *noise, rng);

    for (int t : {2, 3}) {
      tq::LevelTables lt(cb, *noise, 0.4, t, y);
      REQUIRE_FALSE(lt.dead());
      tq::Rng pick(1000 + t);
      int checked = 0;
      while (checked < 1000) {
        std::vector<long long> rows;
        while (static_cast<int>(rows.size()) < t) {
          long long r = static_cast<long long>(pick.next_u64() % cb.rows());
          if (std::find(rows.begin(), rows.end(), r) == rows.end()) {
            rows.push_back(r);
          }
        }
        std::sort(rows.begin(), rows.end());
        ++checked;

        double fast = lt.empty_score(rows);
        double ref = tq::tuple_score_reference(cb, *noise, 0.4, t, 0, rows, y);
        if (std::isinf(fast) || std::isinf(ref)) {
          CHECK(fast == ref);
        } else {
          CHECK(std::abs(fast - ref) <= 1e-9);
        }
        for (std::uint32_t J = 1; J < (1u << t) - 1u; ++J) {
          double fs = lt.subset_score(J, rows);
          double rs = tq::tuple_score_reference(cb, *noise, 0.4, t, J, rows, y);
          if (std::isinf(fs) || std::isinf(rs)) {
            CHECK(fs == rs);
          } else {
            CHECK(std::abs(fs - rs) <= 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("noiseless excess rate is zero") {
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::constant(0.0));
  const double p = 0.5;
  const int n = 64;
  int trial = 0;
  for (int M : {2, 4, 8}) {
    tq::CubePartition part(M, 1);
    // positive per-symbol densities at t=2: -2 log(1-p) and -log(1-(1-p)^2)
    double minpos = std::min(-2.0 * std::log(1.0 - p), -std::log(1.0 - 0.75));
    double bound = n * minpos - 1.0 * 2.0 * std::log(static_cast<double>(M));
    REQUIRE(bound > 1.0);
    double gamma = 1.0;
    for (int rep = 0; rep < 33; ++rep) {
      ++trial;
      tq::Rng trng(tq::mix_seed(4242, trial));
      auto cb = tq::Codebook::generate(M, 1, n, p, tq::mix_seed(555, trial));
      std::vector<std::vector<double>> targets = {{trng.next_double()},
                                                  {trng.next_double()}};
      auto res = tq::oracle_noiseless(part, cb, targets);
      std::vector<int> y(res.z.begin(), res.z.end());
      auto out = tq::decode(y, cb, part, noise, p, gamma, 2);
      auto r = tq::run_resolution(targets, out, 1.0 / M);
      CHECK_FALSE(r.excess);
    }
  }
  CHECK(trial == 99);
}

TEST_CASE("noisy decode still recovers at moderate blocklength") {
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::constant(0.05));
  tq::CubePartition part(4, 1);
  int hits = 0;
  for (int rep = 0; rep < 20; ++rep) {
    auto cb = tq::Codebook::generate(4, 1, 200, 0.5, tq::mix_seed(77, rep));
    auto res = tq::oracle_noiseless(part, cb, {{0.2}, {0.8}});
    tq::Rng rng(tq::mix_seed(78, rep));
    auto y = tq::apply_noise(res.z, cb, noise, rng);
    auto out = tq::decode(y, cb, part, noise, 0.5, 0.5 * std::log(200.0), 2);
    auto r = tq::run_resolution({{0.2}, {0.8}}, out, 0.25);
    if (!r.excess) ++hits;
  }
  CHECK(hits >= 18);
}

TEST_CASE("decode budget guard") {
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::constant(0.1));
  tq::CubePartition part(32, 1);
  auto cb = tq::Codebook::generate(32, 1, 64, 0.5, 404);
  std::vector<int> y(64, 1);
  std::string msg;
  try {
    tq::decode(y, cb, part, noise, 0.5, 0.0, 2, 10);
  } catch (const tq::resource_error& e) {
    msg = e.what();
  }
  REQUIRE_FALSE(msg.empty());
  CHECK(msg.find("496") != std::string::npos);
  CHECK(msg.find("10") != std::string::npos);

  msg.clear();
  try {
    tq::decode(y, cb, part, noise, 0.5, 0.0, 1, 5);
  } catch (const tq::resource_error& e) {
    msg = e.what();
  }
  REQUIRE_FALSE(msg.empty());
  CHECK(msg.find("32") != std::string::npos);
}

TEST_CASE("decode contract checks") {
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::constant(0.1));
  tq::CubePartition part(4, 1);
  auto cb = tq::Codebook::generate(4, 1, 32, 0.5, 11);
  std::vector<int> y(32, 0);
  CHECK_THROWS_AS(tq::decode(y, cb, part, noise, 0.5, -1.0, 2), tq::contract_error);
  CHECK_THROWS_AS(tq::decode(y, cb, part, noise, 0.5, 1.0, 0), tq::contract_error);
  CHECK_THROWS_AS(tq::decode(y, cb, part, noise, 1.5, 1.0, 2), tq::contract_error);
  CHECK_THROWS_AS(tq::decode(y, cb, part, noise, 0.5, 1.0, 2, 0), tq::contract_error);
  std::vector<int> bad(10, 0);
  CHECK_THROWS_AS(tq::decode(bad, cb, part, noise, 0.5, 1.0, 2), tq::contract_error);
  tq::CubePartition other(8, 1);
  CHECK_THROWS_AS(tq::decode(y, cb, other, noise, 0.5, 1.0, 2), tq::contract_error);
}

TEST_CASE("dead level skips to error") {
  // Third output symbol has probability zero at both inputs, at every level.
  std::vector<double> t0 = {0.9, 0.1, 0.0, 0.1, 0.9, 0.0};
  std::vector<double> t1 = {0.8, 0.2, 0.0, 0.2, 0.8, 0.0};
  auto noise = tq::NoiseModel::custom(tq::NoiseMap::constant(0.5), {0.0, 1.0},
                                      {t0, t1}, {"0", "1", "x"});
  tq::CubePartition part(2, 1);
  auto cb = tq::Codebook::generate(2, 1, 16, 0.5, 5);
  std::vector<int> y(16, 0);
  y[3] = 2;
  auto out = tq::decode(y, cb, part, noise, 0.5, 1.0, 2);
  CHECK(out.m == 0);
  CHECK(out.tuples_evaluated == 0);
}

TEST_CASE("hausdorff distance") {
  CHECK(tq::hausdorff_linf({{0.1}, {0.9}}, {{0.12}}) ==
        doctest::Approx(0.78).epsilon(1e-12));
  CHECK(tq::hausdorff_linf({{0.1}, {0.9}}, {{0.1}, {0.9}}) == 0.0);
  CHECK(tq::hausdorff_linf({}, {}) == 0.0);
  CHECK(tq::hausdorff_linf({{0.5}}, {}) == kInf);
  CHECK(tq::hausdorff_linf({{0.2, 0.3}}, {{0.25, 0.1}}) ==
        doctest::Approx(0.2).epsilon(1e-12));
  CHECK_THROWS_AS(tq::hausdorff_linf({{0.2, 0.3}}, {{0.25}}), tq::contract_error);
}

TEST_CASE("norm sandwich") {
  tq::Rng rng(606);
  for (int d = 1; d <= 5; ++d) {
    for (int rep = 0; rep < 50; ++rep) {
      double linf = 0.0, l2sq = 0.0;
      for (int j = 0; j < d; ++j) {
        double v = rng.next_double() * 2.0 - 1.0;
        linf = std::max(linf, std::abs(v));
        l2sq += v * v;
      }
      double l2 = std::sqrt(l2sq);
      CHECK(linf <= l2 + 1e-15);
      CHECK(l2 <= std::sqrt(static_cast<double>(d)) * linf + 1e-15);
    }
  }
}

TEST_CASE("tuple count") {
  CHECK(tq::tuple_count(4, 2) == 6.0);
  CHECK(tq::tuple_count(1024, 2) == 523776.0);
  CHECK(tq::tuple_count(10, 0) == 1.0);
  CHECK(tq::tuple_count(3, 5) == 0.0);
  CHECK(tq::tuple_count(100000, 40) == doctest::Approx(1.21609e152).epsilon(1e-4));
  CHECK(tq::tuple_count(1000000, 100) == kInf);
}

TEST_CASE("decode determinism") {
  auto noise = tq::NoiseModel::bsc(tq::NoiseMap::affine(0.05, 0.1));
  tq::CubePartition part(4, 2);
  auto run = [&]() {
    auto cb = tq::Codebook::generate(4, 2, 128, 0.4, 31337);
    auto res = tq::oracle_noiseless(part, cb, {{0.2, 0.6}, {0.9, 0.1}});
    tq::Rng rng(999);
    auto y = tq::apply_noise(res.z, cb, noise, rng);
    return tq::decode(y, cb, part, noise, 0.4, 2.0, 2);
  };
  auto a = run();
  auto b = run();
  CHECK(a.m == b.m);
  CHECK(a.indices == b.indices);
  CHECK(a.t_loop_exit == b.t_loop_exit);
  CHECK(a.tuples_evaluated == b.tuples_evaluated);
}

}  // TEST_SUITE
