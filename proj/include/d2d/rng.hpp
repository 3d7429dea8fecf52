#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace d2d {

/// Seedable 64-bit generator with platform-independent conversions.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std distributions are not, so integer and real draws are
/// derived here from raw engine output; a given seed produces the same
/// stream on every conforming toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream keyed by a root seed and a path of integers
    /// (e.g. {n, trial, stream tag}).
    static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Stream tags used when splitting a trial seed.
enum class StreamTag : std::uint64_t {
    node_placement = 1,
    cache_placement = 2,
    demands = 3,
    source_selection = 4,
};

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace d2d
