#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace blab {

// One splitmix64 step. Good enough mixing to spread structured ids
// (trial indices, stream tags) into unrelated engine seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Derives a child seed from a root seed and a path of stream ids, so that
// independent sampling streams (one per resample trial, per experiment
// stage, ...) never share engine state. Same root + same path gives the
// same child on every platform.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

// Deterministic random source. Every sampler in the library draws through
// this class only, so a fixed seed pins every downstream result. unit() and
// normal() avoid std::uniform_real_distribution / std::normal_distribution
// on purpose: their output is not specified bit for bit across standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform on [0, 1), 53 random bits.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform on [0, 2^nbits) for 1 <= nbits <= 63.
  std::uint64_t index_bits(int nbits);

  // Standard normal via the Marsaglia polar method; generates pairs and
  // caches the second value.
  double normal();

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace blab
