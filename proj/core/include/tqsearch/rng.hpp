#pragma once

#include <cstdint>
#include <limits>

namespace tq {

// SplitMix64 step; also used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Derives a child seed from (seed, stream). Distinct streams give
// statistically independent generators for the same master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// xoshiro256** seeded via SplitMix64. Satisfies UniformRandomBitGenerator,
// so it plugs into <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double next_double();

  bool next_bernoulli(double p);

  // Sets bit l of dst (word l>>6, bit l&63) per Bernoulli(p) draw.
  // Consumes the same draws as nbits next_bernoulli(p) calls.
  void fill_bernoulli_bits(std::uint64_t* dst, long long nbits, double p);

 private:
  std::uint64_t s_[4];
};

}  // namespace tq
