#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "d2d/caching.hpp"
#include "d2d/geometry.hpp"
#include "d2d/popularity.hpp"
#include "d2d/rng.hpp"
#include "d2d/scales.hpp"

namespace d2d {

enum class ServeKind : std::uint8_t { self_served, paired, unserved };

/// Outcome of source selection for every demanding node.
struct SDAssignment {
    std::vector<ServeKind> kind;
    std::vector<std::uint32_t> source;  // valid where kind == paired
    std::vector<std::uint32_t> demand;  // requested file per node

    std::size_t node_count() const { return kind.size(); }
    std::size_t count(ServeKind k) const;
};

/// Self-served when the demand is in the node's own cache; otherwise a
/// holder in the same traffic cell, uniformly at random; otherwise unserved.
SDAssignment select_sources(const NodePlacement& placement, const CellGrid& grid,
                            const CachePlacement& cache, const DemandVector& demands, Rng& rng);

/// Hopping-cell sequence per paired demand: along the source's row to the
/// destination's column, then along that column to the destination. A pair
/// sharing a hopping cell gets the single-cell route [cell].
struct RoutePlan {
    std::vector<std::uint32_t> source;
    std::vector<std::uint32_t> destination;
    std::vector<std::uint32_t> offsets{0};
    std::vector<std::uint32_t> cells;

    std::size_t size() const { return source.size(); }
    std::span<const std::uint32_t> route(std::size_t k) const {
        return {cells.data() + offsets[k], cells.data() + offsets[k + 1]};
    }
    /// Total number of cell visits over all routes.
    std::size_t total_length() const { return cells.size(); }
};

/// Row-then-column cell path from `src` to `dst`, both endpoints included.
std::vector<std::uint32_t> hdp_vdp_path(const CellGrid& grid, std::uint32_t src, std::uint32_t dst);

/// Unserved nodes get no route.
RoutePlan build_routes(const SDAssignment& assignment, const CellGrid& grid);

/// One scheduled transmission.
struct Link {
    std::uint32_t tx = 0;
    std::uint32_t rx = 0;
    std::uint32_t cell = 0;  // hopping cell of the transmitter
};

struct Violation {
    enum class Kind { out_of_range, interference };
    Kind kind = Kind::out_of_range;
    std::size_t link = 0;        // index of the failing link
    std::size_t interferer = 0;  // index of the interfering link (interference only)
    double distance = 0.0;
};

struct ProtocolCheck {
    bool ok = true;
    std::optional<Violation> first;
};

/// Protocol model: link k succeeds iff d(tx_k, rx_k) <= r and no other
/// active transmitter lies within (1 + delta) r of rx_k.
ProtocolCheck check_protocol_model(std::span<const Link> links, const NodePlacement& placement,
                                   double r, double delta);

/// K x K spatial TDMA over hopping cells with per-cell round-robin.
class Schedule {
public:
    Schedule(int reuse_side, std::size_t cell_count, std::vector<std::uint32_t> load,
             std::vector<std::uint32_t> link_offsets, std::vector<Link> links,
             std::optional<std::uint32_t> void_cell, int hopping_side);

    int reuse_side() const { return reuse_side_; }
    std::int64_t J() const { return static_cast<std::int64_t>(reuse_side_) * reuse_side_; }

    /// Distinct routes through each hopping cell.
    std::span<const std::uint32_t> load() const { return load_; }
    std::uint32_t max_load() const;

    /// Slot of cell (i, j) is (i mod K) K + (j mod K).
    std::uint32_t slot_of(std::uint32_t cell) const;

    std::span<const Link> links_of(std::uint32_t cell) const {
        return {links_.data() + link_offsets_[cell], links_.data() + link_offsets_[cell + 1]};
    }
    std::size_t link_count() const { return links_.size(); }

    /// Transmissions active in `slot` during round-robin round `round`: each
    /// cell of that color with pending links sends link (round mod count).
    std::vector<Link> activation_set(std::uint32_t slot, std::uint32_t round) const;
    /// Rounds needed for every link to appear in some activation set.
    std::uint32_t round_count() const;

    /// First intermediate cell found empty along some route, if any.
    std::optional<std::uint32_t> relay_void_cell() const { return void_cell_; }

private:
    int reuse_side_;
    int hopping_side_;
    std::vector<std::uint32_t> load_;
    std::vector<std::uint32_t> link_offsets_;
    std::vector<Link> links_;
    std::optional<std::uint32_t> void_cell_;
};

/// Builds per-cell loads and links. Intermediate hops are relayed by the
/// cell's relay node (closest to the cell center); an empty intermediate
/// cell is recorded as a relay void.
Schedule schedule_tdma(const RoutePlan& routes, const CellGrid& grid, const DerivedScales& scales);

/// Single-hop delivery: paired demands per traffic cell.
std::vector<std::uint32_t> deliver_single_hop(const SDAssignment& assignment, const CellGrid& grid);

/// CSV: demand_id,hop_index,cell_i,cell_j
void write_routes_csv(std::ostream& out, const RoutePlan& routes, const CellGrid& grid);

}  // namespace d2d
