#pragma once

#include <cstdint>
#include <vector>

namespace laqcc {

/// Seeded, hierarchically splittable random source.
///
/// A stream is identified by (root_seed, stream_path). Identical pairs yield
/// bit-identical draws on every platform; distinct paths yield independent
/// streams. Derivation hashes the path into the xoshiro256** state, so child
/// streams can be created cheaply and deterministically.
class RandomSource {
  public:
    explicit RandomSource(uint64_t root_seed = 0, std::vector<uint64_t> stream_path = {});

    uint64_t root_seed() const { return root_seed_; }
    const std::vector<uint64_t> &stream_path() const { return stream_path_; }

    /// Child stream for path element `index`; does not advance this stream.
    RandomSource derive(uint64_t index) const;

    uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 bits of precision.
    double next_double();
    /// Uniform integer in [0, bound).
    uint64_t next_below(uint64_t bound);
    /// Standard normal via Box-Muller (portable, no libm distribution quirks).
    double next_gaussian();

  private:
    uint64_t root_seed_;
    std::vector<uint64_t> stream_path_;
    uint64_t s_[4];
    bool have_spare_gaussian_ = false;
    double spare_gaussian_ = 0.0;

    void reseed();
};

}  // namespace laqcc
