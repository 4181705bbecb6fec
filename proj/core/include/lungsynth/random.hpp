#pragma once

#include <cstdint>
#include <random>

namespace lungsynth {

/// 64-bit finalizer from SplitMix64; used to derive engine seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic random source keyed by (master_seed, stream_id).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The conversions to reals and bounded integers are implemented
/// here rather than with <random> distributions, whose algorithms are
/// implementation-defined; this keeps draws identical across toolchains.
///
/// One stream belongs to one task. Parallel work derives its own stream from
/// a distinct stream_id instead of sharing an instance.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0,1) with 53 bits of resolution.
  double uniform();
  /// Uniform in [lo,hi).
  double uniform(double lo, double hi);
  /// Uniform in [-1,1).
  double symmetric() { return uniform(-1.0, 1.0); }
  /// Uniform integer in [lo,hi], unbiased. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// p <= 0 never fires, p >= 1 always fires; one draw is consumed either way.
  bool bernoulli(double p);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace lungsynth
