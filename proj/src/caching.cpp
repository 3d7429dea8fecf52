#include "d2d/caching.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace d2d {

const char* to_string(CachePolicy p) {
    switch (p) {
        case CachePolicy::decentralized_full: return "decentralized-full";
        case CachePolicy::decentralized_subset: return "decentralized-subset";
        case CachePolicy::centralized: return "centralized";
    }
    return "?";
}

CachePlacement::CachePlacement(CachePolicy policy, std::int64_t capacity,
                               std::int64_t library_size, std::vector<std::uint32_t> offsets,
                               std::vector<std::uint32_t> files)
    : policy_(policy),
      capacity_(capacity),
      library_size_(library_size),
      offsets_(std::move(offsets)),
      files_(std::move(files)) {
    for (std::size_t u = 0; u + 1 < offsets_.size(); ++u) {
        auto f = files_of(u);
        if (static_cast<std::int64_t>(f.size()) > capacity_)
            throw std::logic_error("cache capacity exceeded");
        if (std::adjacent_find(f.begin(), f.end(), std::greater_equal<>()) != f.end())
            throw std::logic_error("cache contents must be sorted and distinct");
    }
}

bool CachePlacement::holds(std::size_t node, std::uint32_t file) const {
    auto f = files_of(node);
    return std::binary_search(f.begin(), f.end(), file);
}

namespace {

// Partial Fisher-Yates over a persistent identity permutation; the swaps
// are undone afterwards, so each draw costs O(M) regardless of the range.
class SubsetSampler {
public:
    explicit SubsetSampler(std::int64_t range) : perm_(static_cast<std::size_t>(range)) {
        std::iota(perm_.begin(), perm_.end(), 1u);
    }

    void draw(std::size_t k, Rng& rng, std::vector<std::uint32_t>& out) {
        const std::size_t size = perm_.size();
        swaps_.clear();
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.below(size - i));
            std::swap(perm_[i], perm_[j]);
            swaps_.push_back(j);
            out.push_back(perm_[i]);
        }
        for (std::size_t i = k; i-- > 0;) std::swap(perm_[i], perm_[swaps_[i]]);
    }

private:
    std::vector<std::uint32_t> perm_;
    std::vector<std::size_t> swaps_;
};

void check_sizes(std::int64_t n, std::int64_t M) {
    if (n < 1) throw std::invalid_argument("cache placement: n must be >= 1");
    if (M < 1) throw std::invalid_argument("cache placement: M must be >= 1");
}

CachePlacement decentralized(std::int64_t n, std::int64_t M, std::int64_t library_size, Rng& rng,
                             CachePolicy policy) {
    check_sizes(n, M);
    if (M > library_size)
        throw std::invalid_argument("cache placement: M exceeds the library size");
    SubsetSampler sampler(library_size);
    std::vector<std::uint32_t> offsets(static_cast<std::size_t>(n) + 1);
    std::vector<std::uint32_t> files;
    files.reserve(static_cast<std::size_t>(n * M));
    for (std::int64_t u = 0; u < n; ++u) {
        const std::size_t begin = files.size();
        sampler.draw(static_cast<std::size_t>(M), rng, files);
        std::sort(files.begin() + static_cast<std::ptrdiff_t>(begin), files.end());
        offsets[static_cast<std::size_t>(u) + 1] = static_cast<std::uint32_t>(files.size());
    }
    return CachePlacement(policy, M, library_size, std::move(offsets), std::move(files));
}

}  // namespace

CachePlacement place_decentralized(std::int64_t n, std::int64_t M, std::int64_t library_size,
                                   Rng& rng) {
    return decentralized(n, M, library_size, rng, CachePolicy::decentralized_full);
}

CachePlacement place_decentralized_subset(std::int64_t n, const DerivedScales& scales, Rng& rng) {
    if (!scales.sub_library_size)
        throw ConfigError("sub-library placement requires scales derived for the truncated scheme");
    return decentralized(n, scales.M, *scales.sub_library_size, rng,
                         CachePolicy::decentralized_subset);
}

CachePlacement place_centralized(std::int64_t n, std::int64_t M, std::int64_t m, Rng& rng) {
    check_sizes(n, M);
    if (M > m) throw std::invalid_argument("cache placement: M exceeds the library size");
    if (n * M < m)
        throw ConfigError("centralized placement needs n*M >= m to cover the library");

    // slots[u*M + s] holds a file or 0 (free).
    std::vector<std::uint32_t> slots(static_cast<std::size_t>(n * M), 0);
    std::iota(slots.begin(), slots.begin() + m, 1u);
    shuffle(std::span<std::uint32_t>(slots), rng);

    std::vector<std::uint32_t> offsets(static_cast<std::size_t>(n) + 1);
    std::vector<std::uint32_t> files;
    files.reserve(slots.size());
    std::vector<std::uint32_t> node_files;
    std::vector<std::uint32_t> complement;
    for (std::int64_t u = 0; u < n; ++u) {
        node_files.clear();
        for (std::int64_t s = 0; s < M; ++s) {
            const std::uint32_t f = slots[static_cast<std::size_t>(u * M + s)];
            if (f != 0) node_files.push_back(f);
        }
        std::sort(node_files.begin(), node_files.end());
        const std::size_t fixed = node_files.size();
        const std::size_t missing = static_cast<std::size_t>(M) - fixed;
        if (missing > 0 && 2 * M > m) {
            complement.clear();
            for (std::uint32_t f = 1; f <= static_cast<std::uint32_t>(m); ++f)
                if (!std::binary_search(node_files.begin(), node_files.begin() + fixed, f))
                    complement.push_back(f);
            for (std::size_t k = 0; k < missing; ++k) {
                std::size_t j = k + static_cast<std::size_t>(rng.below(complement.size() - k));
                std::swap(complement[k], complement[j]);
                node_files.push_back(complement[k]);
            }
        } else {
            while (node_files.size() < static_cast<std::size_t>(M)) {
                const auto f = static_cast<std::uint32_t>(1 + rng.below(static_cast<std::uint64_t>(m)));
                if (std::find(node_files.begin(), node_files.end(), f) == node_files.end())
                    node_files.push_back(f);
            }
        }
        std::sort(node_files.begin(), node_files.end());
        files.insert(files.end(), node_files.begin(), node_files.end());
        offsets[static_cast<std::size_t>(u) + 1] = static_cast<std::uint32_t>(files.size());
    }
    return CachePlacement(CachePolicy::centralized, M, m, std::move(offsets), std::move(files));
}

void write_cache_csv(std::ostream& out, const CachePlacement& cache) {
    out << "node_id,file_id\n";
    for (std::size_t u = 0; u < cache.node_count(); ++u)
        for (std::uint32_t f : cache.files_of(u)) out << u << ',' << f << '\n';
}

}  // namespace d2d
