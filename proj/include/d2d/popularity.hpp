#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "d2d/rng.hpp"

namespace d2d {

/// File popularity over indices 1..m, in descending order.
class Popularity {
public:
    enum class Kind { zipf, uniform, explicit_list };

    /// p(i) = i^-gamma / sum_j j^-gamma; gamma = 0 gives the uniform law.
    static Popularity zipf(std::int64_t m, double gamma);
    static Popularity uniform(std::int64_t m);
    /// Accepts a non-increasing list summing to 1 within 1e-9.
    static Popularity from_pmf(std::vector<double> pmf);

    Kind kind() const { return kind_; }
    double gamma() const { return gamma_; }
    std::int64_t size() const { return static_cast<std::int64_t>(pmf_.size()); }

    /// Probability of file `i` (1-based).
    double pmf(std::int64_t i) const { return pmf_[static_cast<std::size_t>(i - 1)]; }
    std::span<const double> pmf() const { return pmf_; }

    /// Mass of files 1..k.
    double head_mass(std::int64_t k) const;

    /// One draw, returned as a 1-based file index.
    std::uint32_t sample(Rng& rng) const;

private:
    Popularity(Kind kind, double gamma, std::vector<double> pmf);

    Kind kind_;
    double gamma_;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

inline Popularity zipf_pmf(std::int64_t m, double gamma) { return Popularity::zipf(m, gamma); }

/// Requested file per node (1-based indices).
struct DemandVector {
    std::vector<std::uint32_t> f;

    std::size_t size() const { return f.size(); }
    std::uint32_t operator[](std::size_t node) const { return f[node]; }
};

DemandVector sample_demands(const Popularity& pop, std::int64_t n, Rng& rng);

}  // namespace d2d
