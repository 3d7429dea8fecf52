#include "d2d/popularity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace d2d {

namespace {

std::vector<double> cumulative(const std::vector<double>& pmf) {
    std::vector<double> cdf(pmf.size());
    long double acc = 0.0L;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        acc += pmf[i];
        cdf[i] = static_cast<double>(acc);
    }
    if (!cdf.empty()) cdf.back() = 1.0;
    return cdf;
}

}  // namespace

Popularity::Popularity(Kind kind, double gamma, std::vector<double> pmf)
    : kind_(kind), gamma_(gamma), pmf_(std::move(pmf)), cdf_(cumulative(pmf_)) {}

Popularity Popularity::zipf(std::int64_t m, double gamma) {
    if (m < 1) throw std::invalid_argument("popularity support must be >= 1");
    if (!(gamma >= 0.0)) throw std::invalid_argument("zipf exponent must be >= 0");
    std::vector<double> w(static_cast<std::size_t>(m));
    // Smallest terms first, so heavy tails with m ~ 10^7 normalize accurately.
    long double total = 0.0L;
    for (std::int64_t i = m; i >= 1; --i) {
        double v = std::pow(static_cast<double>(i), -gamma);
        w[static_cast<std::size_t>(i - 1)] = v;
        total += v;
    }
    for (double& v : w) v = static_cast<double>(v / total);
    return Popularity(gamma == 0.0 ? Kind::uniform : Kind::zipf, gamma, std::move(w));
}

Popularity Popularity::uniform(std::int64_t m) { return zipf(m, 0.0); }

Popularity Popularity::from_pmf(std::vector<double> pmf) {
    if (pmf.empty()) throw std::invalid_argument("popularity support must be >= 1");
    long double total = 0.0L;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        if (!(pmf[i] >= 0.0)) throw std::invalid_argument("probabilities must be >= 0");
        if (i > 0 && pmf[i] > pmf[i - 1])
            throw std::invalid_argument("probabilities must be in descending order");
        total += pmf[i];
    }
    if (std::abs(static_cast<double>(total) - 1.0) > 1e-9)
        throw std::invalid_argument("probabilities must sum to 1");
    return Popularity(Kind::explicit_list, 0.0, std::move(pmf));
}

double Popularity::head_mass(std::int64_t k) const {
    if (k <= 0) return 0.0;
    if (k >= size()) return 1.0;
    long double acc = 0.0L;
    for (std::int64_t i = k; i >= 1; --i) acc += pmf_[static_cast<std::size_t>(i - 1)];
    return static_cast<double>(acc);
}

std::uint32_t Popularity::sample(Rng& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    auto idx = static_cast<std::size_t>(it - cdf_.begin());
    if (idx >= cdf_.size()) idx = cdf_.size() - 1;
    return static_cast<std::uint32_t>(idx + 1);
}

DemandVector sample_demands(const Popularity& pop, std::int64_t n, Rng& rng) {
    DemandVector d;
    d.f.resize(static_cast<std::size_t>(n));
    for (auto& v : d.f) v = pop.sample(rng);
    return d;
}

}  // namespace d2d
