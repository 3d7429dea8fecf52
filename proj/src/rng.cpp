#include "d2d/rng.hpp"

namespace d2d {

namespace {
__extension__ typedef unsigned __int128 u128;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(seed);
    for (std::uint64_t p : path) h = mix64(h ^ mix64(p));
    return Rng(h);
}

// Lemire's multiply-and-reject method.
std::uint64_t Rng::below(std::uint64_t bound) {
    u128 prod = static_cast<u128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            prod = static_cast<u128>(next()) * bound;
            low = static_cast<std::uint64_t>(prod);
        }
    }
    return static_cast<std::uint64_t>(prod >> 64);
}

}  // namespace d2d
