#pragma once

#include <cstdint>
#include <random>

namespace rftrack {

using Rng = std::mt19937_64;

namespace detail {
// splitmix64 finalizer, used to decorrelate derived seeds
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministically derive a substream seed from a base seed and stream tags.
/// Every stochastic component takes its own substream so that results do not
/// depend on evaluation order or parallel schedule.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = detail::mix64(base ^ 0x6a09e667f3bcc908ULL);
    s = detail::mix64(s ^ detail::mix64(a));
    s = detail::mix64(s ^ detail::mix64(b + 0x3c6ef372fe94f82aULL));
    s = detail::mix64(s ^ detail::mix64(c + 0xa54ff53a5f1d36f1ULL));
    return s;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace rftrack
