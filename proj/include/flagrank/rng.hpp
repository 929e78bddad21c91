#pragma once

#include <cstdint>
#include <string_view>

namespace flagrank {

// Deterministic, platform-independent RNG (splitmix64).  std::mt19937 plus the
// standard distributions are not byte-stable across library implementations,
// and reproducibility of every report given (prime, seed) is part of the
// contract, so all randomness in the library flows through this generator.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, m).  Plain reduction; the negligible modulo bias is
    // irrelevant for genericity sampling and keeps the stream deterministic.
    std::uint64_t below(std::uint64_t m) { return next() % m; }

  private:
    std::uint64_t state_;
};

// FNV-1a, used to derive independent deterministic substreams from a user seed
// and a textual context (shape string, job name, trial number...).
inline std::uint64_t hash64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view context, std::uint64_t salt = 0) {
    Rng r(seed ^ hash64(context) ^ (salt * 0x9e3779b97f4a7c15ULL));
    return r.next();
}

} // namespace flagrank
