#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "d2d/rng.hpp"
#include "d2d/scales.hpp"

namespace d2d {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(Point a, Point b);

struct NodePlacement {
    std::vector<Point> positions;

    std::size_t size() const { return positions.size(); }
    Point operator[](std::size_t node) const { return positions[node]; }
};

/// n i.i.d. uniform points on the unit square.
NodePlacement place_nodes(std::int64_t n, Rng& rng);

/// Grid coordinates of a cell: i is the column (x), j the row (y).
struct CellCoord {
    std::int32_t i = 0;
    std::int32_t j = 0;

    friend bool operator==(CellCoord, CellCoord) = default;
};

/// Square traffic cells, each split into hops_per_traffic_side^2 square
/// hopping cells. Cells are half-open, so a point on a shared edge belongs
/// to the cell with the larger index. Ids are row-major.
class CellGrid {
public:
    CellGrid(const NodePlacement& placement, int traffic_side_count, int hops_per_traffic_side);

    int traffic_side_count() const { return traffic_side_; }
    int hops_per_traffic_side() const { return hops_per_side_; }
    int hopping_side_count() const { return traffic_side_ * hops_per_side_; }
    std::size_t traffic_cell_count() const { return traffic_nodes_.offsets.size() - 1; }
    std::size_t hopping_cell_count() const { return hopping_nodes_.offsets.size() - 1; }
    std::size_t node_count() const { return node_hop_.size(); }

    double hopping_cell_side() const { return 1.0 / hopping_side_count(); }
    double traffic_cell_side() const { return 1.0 / traffic_side_; }

    std::uint32_t hopping_cell_of_node(std::size_t node) const { return node_hop_[node]; }
    std::uint32_t traffic_cell_of_node(std::size_t node) const {
        return traffic_cell_of_hop(node_hop_[node]);
    }

    std::uint32_t hopping_cell_at(Point p) const;
    std::uint32_t traffic_cell_at(Point p) const { return traffic_cell_of_hop(hopping_cell_at(p)); }
    std::uint32_t traffic_cell_of_hop(std::uint32_t hop) const;

    CellCoord coord(std::uint32_t hop) const;
    std::uint32_t hop_id(CellCoord c) const;
    bool adjacent(std::uint32_t a, std::uint32_t b) const;
    Point hopping_cell_center(std::uint32_t hop) const;

    std::span<const std::uint32_t> nodes_in_hopping_cell(std::uint32_t hop) const {
        return hopping_nodes_.row(hop);
    }
    std::span<const std::uint32_t> nodes_in_traffic_cell(std::uint32_t cell) const {
        return traffic_nodes_.row(cell);
    }

    /// Node closest to the cell center (ties to the lower id); kEmpty if none.
    std::uint32_t relay_of(std::uint32_t hop) const { return relay_[hop]; }
    static constexpr std::uint32_t kEmpty = 0xffffffffu;

private:
    struct Buckets {
        std::vector<std::uint32_t> offsets;
        std::vector<std::uint32_t> items;
        std::span<const std::uint32_t> row(std::uint32_t k) const {
            return {items.data() + offsets[k], items.data() + offsets[k + 1]};
        }
    };
    static Buckets bucketize(std::span<const std::uint32_t> key_of_item, std::size_t keys);

    int traffic_side_;
    int hops_per_side_;
    std::vector<std::uint32_t> node_hop_;
    Buckets hopping_nodes_;
    Buckets traffic_nodes_;
    std::vector<std::uint32_t> relay_;
};

/// ceil(n^(eta/2)) traffic cells per side.
int traffic_side_count(const DerivedScales& scales);
/// ceil(traffic side / sqrt(a_h)) hopping cells per traffic-cell side, at least 1.
int hops_per_traffic_side(const DerivedScales& scales);

CellGrid build_grid(const NodePlacement& placement, const DerivedScales& scales);

struct OccupancyStats {
    std::size_t min_hopping = 0;
    std::size_t max_hopping = 0;
    std::size_t min_traffic = 0;
    std::size_t max_traffic = 0;
};

OccupancyStats cell_occupancy_stats(const CellGrid& grid);

/// CSV: node_id,x,y,traffic_cell,hopping_cell
void write_grid_csv(std::ostream& out, const NodePlacement& placement, const CellGrid& grid);

}  // namespace d2d
