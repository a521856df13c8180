#pragma once

#include <cstdint>
#include <random>

namespace mxsketch {

// SplitMix64 step, used both to decorrelate user seeds and to derive
// per-trial substreams that are stable regardless of execution order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

// Explicitly seeded stream. split() hands out an independent child stream
// without disturbing the parent sequence more than one engine draw.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    Rng split() { return Rng(engine_()); }

    std::uint64_t next_u64() { return engine_(); }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    double normal() { return normal_(engine_); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace mxsketch
