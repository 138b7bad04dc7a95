#include "laqcc/random.hpp"

#include <cmath>

namespace laqcc {

namespace {

uint64_t splitmix64(uint64_t &x) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RandomSource::RandomSource(uint64_t root_seed, std::vector<uint64_t> stream_path)
    : root_seed_(root_seed), stream_path_(std::move(stream_path)) {
    reseed();
}

void RandomSource::reseed() {
    // Mix the root seed and every path element through splitmix64 so that
    // nearby (seed, path) pairs land in unrelated states.
    uint64_t acc = root_seed_ ^ 0x6c62272e07bb0142ULL;
    splitmix64(acc);
    for (uint64_t p : stream_path_) {
        acc ^= p + 0x100000001b3ULL;
        splitmix64(acc);
    }
    for (auto &word : s_) {
        word = splitmix64(acc);
    }
    // xoshiro must not start in the all-zero state.
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) {
        s_[0] = 1;
    }
}

RandomSource RandomSource::derive(uint64_t index) const {
    std::vector<uint64_t> child = stream_path_;
    child.push_back(index);
    return RandomSource(root_seed_, std::move(child));
}

uint64_t RandomSource::next_u64() {
    // xoshiro256**
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RandomSource::next_double() {
    return (next_u64() >> 11) * 0x1.0p-53;
}

uint64_t RandomSource::next_below(uint64_t bound) {
    // Rejection sampling to avoid modulo bias.
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        uint64_t r = next_u64();
        if (r >= threshold) {
            return r % bound;
        }
    }
}

double RandomSource::next_gaussian() {
    if (have_spare_gaussian_) {
        have_spare_gaussian_ = false;
        return spare_gaussian_;
    }
    double u1, u2;
    do {
        u1 = next_double();
    } while (u1 <= 0.0);
    u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_gaussian_ = r * std::sin(theta);
    have_spare_gaussian_ = true;
    return r * std::cos(theta);
}

}  // namespace laqcc
