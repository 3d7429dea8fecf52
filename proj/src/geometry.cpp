#include "d2d/geometry.hpp"
#include "d2d/csv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace d2d {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

NodePlacement place_nodes(std::int64_t n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("place_nodes: n must be >= 1");
    NodePlacement p;
    p.positions.resize(static_cast<std::size_t>(n));
    for (auto& pt : p.positions) {
        pt.x = rng.uniform();
        pt.y = rng.uniform();
    }
    return p;
}

namespace {

// Guard against pow/sqrt landing a hair above an exact integer.
int ceil_count(double x) {
    return std::max(1, static_cast<int>(std::ceil(x - 1e-9)));
}

int axis_index(double v, int side) {
    int k = static_cast<int>(std::floor(v * side));
    return std::clamp(k, 0, side - 1);
}

}  // namespace

int traffic_side_count(const DerivedScales& scales) {
    return ceil_count(std::pow(static_cast<double>(scales.n), scales.eta / 2.0));
}

int hops_per_traffic_side(const DerivedScales& scales) {
    if (!(scales.a_h > 0.0)) return 1;
    const double side = 1.0 / traffic_side_count(scales);
    return ceil_count(side / std::sqrt(scales.a_h));
}

CellGrid::Buckets CellGrid::bucketize(std::span<const std::uint32_t> key_of_item,
                                      std::size_t keys) {
    Buckets b;
    b.offsets.assign(keys + 1, 0);
    for (std::uint32_t k : key_of_item) ++b.offsets[k + 1];
    for (std::size_t k = 0; k < keys; ++k) b.offsets[k + 1] += b.offsets[k];
    b.items.resize(key_of_item.size());
    std::vector<std::uint32_t> cursor(b.offsets.begin(), b.offsets.end() - 1);
    for (std::size_t item = 0; item < key_of_item.size(); ++item)
        b.items[cursor[key_of_item[item]]++] = static_cast<std::uint32_t>(item);
    return b;
}

CellGrid::CellGrid(const NodePlacement& placement, int traffic_side_count,
                   int hops_per_traffic_side)
    : traffic_side_(traffic_side_count), hops_per_side_(hops_per_traffic_side) {
    if (traffic_side_ < 1 || hops_per_side_ < 1)
        throw std::invalid_argument("CellGrid: side counts must be >= 1");
    const std::size_t side = static_cast<std::size_t>(hopping_side_count());
    if (side * side >= kEmpty) throw std::invalid_argument("CellGrid: too many cells");

    node_hop_.resize(placement.size());
    for (std::size_t u = 0; u < placement.size(); ++u) node_hop_[u] = hopping_cell_at(placement[u]);
    hopping_nodes_ = bucketize(node_hop_, side * side);

    std::vector<std::uint32_t> node_traffic(placement.size());
    for (std::size_t u = 0; u < placement.size(); ++u)
        node_traffic[u] = traffic_cell_of_hop(node_hop_[u]);
    const auto tside = static_cast<std::size_t>(traffic_side_);
    traffic_nodes_ = bucketize(node_traffic, tside * tside);

    relay_.assign(side * side, kEmpty);
    for (std::uint32_t h = 0; h < side * side; ++h) {
        const Point c = hopping_cell_center(h);
        double best = 0.0;
        for (std::uint32_t u : nodes_in_hopping_cell(h)) {
            const double d = distance(placement[u], c);
            if (relay_[h] == kEmpty || d < best) {
                relay_[h] = u;
                best = d;
            }
        }
    }
}

std::uint32_t CellGrid::hopping_cell_at(Point p) const {
    const int side = hopping_side_count();
    return hop_id({axis_index(p.x, side), axis_index(p.y, side)});
}

std::uint32_t CellGrid::traffic_cell_of_hop(std::uint32_t hop) const {
    const CellCoord c = coord(hop);
    return static_cast<std::uint32_t>((c.j / hops_per_side_) * traffic_side_ +
                                      c.i / hops_per_side_);
}

CellCoord CellGrid::coord(std::uint32_t hop) const {
    const auto side = static_cast<std::uint32_t>(hopping_side_count());
    return {static_cast<std::int32_t>(hop % side), static_cast<std::int32_t>(hop / side)};
}

std::uint32_t CellGrid::hop_id(CellCoord c) const {
    return static_cast<std::uint32_t>(c.j) * static_cast<std::uint32_t>(hopping_side_count()) +
           static_cast<std::uint32_t>(c.i);
}

bool CellGrid::adjacent(std::uint32_t a, std::uint32_t b) const {
    const CellCoord ca = coord(a), cb = coord(b);
    const int di = std::abs(ca.i - cb.i), dj = std::abs(ca.j - cb.j);
    return di + dj == 1;
}

Point CellGrid::hopping_cell_center(std::uint32_t hop) const {
    const CellCoord c = coord(hop);
    const double s = hopping_cell_side();
    return {(c.i + 0.5) * s, (c.j + 0.5) * s};
}

CellGrid build_grid(const NodePlacement& placement, const DerivedScales& scales) {
    if (static_cast<std::int64_t>(placement.size()) != scales.n)
        throw std::invalid_argument("build_grid: placement size does not match scales.n");
    return CellGrid(placement, traffic_side_count(scales), hops_per_traffic_side(scales));
}

OccupancyStats cell_occupancy_stats(const CellGrid& grid) {
    OccupancyStats s;
    auto scan = [](std::size_t cells, auto&& count, std::size_t& lo, std::size_t& hi) {
        lo = count(0);
        hi = lo;
        for (std::size_t c = 1; c < cells; ++c) {
            lo = std::min(lo, count(c));
            hi = std::max(hi, count(c));
        }
    };
    scan(
        grid.hopping_cell_count(),
        [&](std::size_t c) { return grid.nodes_in_hopping_cell(static_cast<std::uint32_t>(c)).size(); },
        s.min_hopping, s.max_hopping);
    scan(
        grid.traffic_cell_count(),
        [&](std::size_t c) { return grid.nodes_in_traffic_cell(static_cast<std::uint32_t>(c)).size(); },
        s.min_traffic, s.max_traffic);
    return s;
}

void write_grid_csv(std::ostream& out, const NodePlacement& placement, const CellGrid& grid) {
    out << "node_id,x,y,traffic_cell,hopping_cell\n";
    for (std::size_t u = 0; u < placement.size(); ++u) {
        out << u << ',' << format_double(placement[u].x) << ',' << format_double(placement[u].y) << ','
            << grid.traffic_cell_of_node(u) << ',' << grid.hopping_cell_of_node(u) << '\n';
    }
}

}  // namespace d2d
