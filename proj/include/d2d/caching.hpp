#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "d2d/rng.hpp"
#include "d2d/scales.hpp"

namespace d2d {

enum class CachePolicy { decentralized_full, decentralized_subset, centralized };

const char* to_string(CachePolicy p);

/// Bipartite node -> file caching graph. Each node's files are sorted and
/// distinct; file indices are 1-based.
class CachePlacement {
public:
    CachePlacement(CachePolicy policy, std::int64_t capacity, std::int64_t library_size,
                   std::vector<std::uint32_t> offsets, std::vector<std::uint32_t> files);

    CachePolicy policy() const { return policy_; }
    std::int64_t capacity() const { return capacity_; }
    /// Files 1..library_size are eligible under this policy.
    std::int64_t library_size() const { return library_size_; }
    std::size_t node_count() const { return offsets_.size() - 1; }

    std::span<const std::uint32_t> files_of(std::size_t node) const {
        return {files_.data() + offsets_[node], files_.data() + offsets_[node + 1]};
    }
    bool holds(std::size_t node, std::uint32_t file) const;

private:
    CachePolicy policy_;
    std::int64_t capacity_;
    std::int64_t library_size_;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> files_;
};

/// Every node caches a uniform M-subset of 1..library_size, independently.
CachePlacement place_decentralized(std::int64_t n, std::int64_t M, std::int64_t library_size,
                                   Rng& rng);

/// Decentralized placement restricted to the scales.sub_library_size most
/// popular files.
CachePlacement place_decentralized_subset(std::int64_t n, const DerivedScales& scales, Rng& rng);

/// A random bijection of files 1..m into m of the n*M cache slots; each
/// node's remaining slots are filled with uniform distinct files.
CachePlacement place_centralized(std::int64_t n, std::int64_t M, std::int64_t m, Rng& rng);

/// CSV: node_id,file_id
void write_cache_csv(std::ostream& out, const CachePlacement& cache);

}  // namespace d2d
