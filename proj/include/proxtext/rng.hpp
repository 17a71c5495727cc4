#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace proxtext {

/// Portable random stream. Every draw is defined in terms of raw
/// mt19937_64 output so that a seed reproduces the same values on any
/// conforming standard library (std::*_distribution is not portable).
///
/// - uniform():   top 53 bits of one engine word, scaled to [0, 1)
/// - normal():    Box-Muller, cosine branch only; consumes two uniforms
/// - bernoulli(): one uniform, success iff u < p
/// - index(n):    rejection sampling on one or more engine words
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  bool bernoulli(double p);
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a master seed and a stream id
/// (splitmix64 finalizer over both words).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace proxtext
