#include "d2d/delivery.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace d2d {

std::size_t SDAssignment::count(ServeKind k) const {
    return static_cast<std::size_t>(std::count(kind.begin(), kind.end(), k));
}

SDAssignment select_sources(const NodePlacement& placement, const CellGrid& grid,
                            const CachePlacement& cache, const DemandVector& demands, Rng& rng) {
    const std::size_t n = placement.size();
    if (grid.node_count() != n || cache.node_count() != n || demands.size() != n)
        throw std::invalid_argument("select_sources: inputs disagree on the node count");

    SDAssignment a;
    a.kind.assign(n, ServeKind::unserved);
    a.source.assign(n, CellGrid::kEmpty);
    a.demand = demands.f;

    std::uint32_t max_file = static_cast<std::uint32_t>(cache.library_size());
    for (std::uint32_t f : demands.f) max_file = std::max(max_file, f);

    // Per-file scratch, reset lazily by stamping with the current cell.
    std::vector<std::uint32_t> stamp(max_file + 1, 0);
    std::vector<std::uint32_t> count(max_file + 1, 0);
    std::vector<std::uint32_t> start(max_file + 1, 0);
    std::vector<std::uint32_t> needed;
    std::vector<std::uint32_t> pending;
    std::vector<std::uint32_t> holders;

    for (std::uint32_t c = 0; c < grid.traffic_cell_count(); ++c) {
        const std::uint32_t tag = c + 1;
        auto members = grid.nodes_in_traffic_cell(c);
        needed.clear();
        pending.clear();
        for (std::uint32_t u : members) {
            const std::uint32_t f = demands[u];
            if (cache.holds(u, f)) {
                a.kind[u] = ServeKind::self_served;
                continue;
            }
            pending.push_back(u);
            if (stamp[f] != tag) {
                stamp[f] = tag;
                count[f] = 0;
                needed.push_back(f);
            }
        }
        if (pending.empty()) continue;

        for (std::uint32_t v : members)
            for (std::uint32_t f : cache.files_of(v))
                if (stamp[f] == tag) ++count[f];
        std::uint32_t total = 0;
        for (std::uint32_t f : needed) {
            start[f] = total;
            total += count[f];
            count[f] = 0;
        }
        holders.resize(total);
        for (std::uint32_t v : members)
            for (std::uint32_t f : cache.files_of(v))
                if (stamp[f] == tag) holders[start[f] + count[f]++] = v;

        for (std::uint32_t u : pending) {
            const std::uint32_t f = demands[u];
            if (count[f] == 0) continue;
            a.kind[u] = ServeKind::paired;
            a.source[u] = holders[start[f] + static_cast<std::uint32_t>(rng.below(count[f]))];
        }
    }
    return a;
}

std::vector<std::uint32_t> hdp_vdp_path(const CellGrid& grid, std::uint32_t src, std::uint32_t dst) {
    CellCoord at = grid.coord(src);
    const CellCoord to = grid.coord(dst);
    std::vector<std::uint32_t> path{src};
    while (at.i != to.i) {
        at.i += (to.i > at.i) ? 1 : -1;
        path.push_back(grid.hop_id(at));
    }
    while (at.j != to.j) {
        at.j += (to.j > at.j) ? 1 : -1;
        path.push_back(grid.hop_id(at));
    }
    return path;
}

RoutePlan build_routes(const SDAssignment& assignment, const CellGrid& grid) {
    RoutePlan plan;
    for (std::uint32_t u = 0; u < assignment.node_count(); ++u) {
        if (assignment.kind[u] != ServeKind::paired) continue;
        const std::uint32_t s = assignment.source[u];
        auto path = hdp_vdp_path(grid, grid.hopping_cell_of_node(s), grid.hopping_cell_of_node(u));
        plan.source.push_back(s);
        plan.destination.push_back(u);
        plan.cells.insert(plan.cells.end(), path.begin(), path.end());
        plan.offsets.push_back(static_cast<std::uint32_t>(plan.cells.size()));
    }
    return plan;
}

ProtocolCheck check_protocol_model(std::span<const Link> links, const NodePlacement& placement,
                                   double r, double delta) {
    const double guard = (1.0 + delta) * r;
    for (std::size_t k = 0; k < links.size(); ++k) {
        const Point rx = placement[links[k].rx];
        const double d = distance(placement[links[k].tx], rx);
        if (d > r) return {false, Violation{Violation::Kind::out_of_range, k, k, d}};
        for (std::size_t other = 0; other < links.size(); ++other) {
            if (other == k || links[other].tx == links[k].tx) continue;
            const double di = distance(placement[links[other].tx], rx);
            if (di <= guard) return {false, Violation{Violation::Kind::interference, k, other, di}};
        }
    }
    return {};
}

Schedule::Schedule(int reuse_side, std::size_t cell_count, std::vector<std::uint32_t> load,
                   std::vector<std::uint32_t> link_offsets, std::vector<Link> links,
                   std::optional<std::uint32_t> void_cell, int hopping_side)
    : reuse_side_(reuse_side),
      hopping_side_(hopping_side),
      load_(std::move(load)),
      link_offsets_(std::move(link_offsets)),
      links_(std::move(links)),
      void_cell_(void_cell) {
    if (reuse_side_ < 1) throw std::invalid_argument("Schedule: reuse side must be >= 1");
    if (load_.size() != cell_count || link_offsets_.size() != cell_count + 1)
        throw std::invalid_argument("Schedule: per-cell tables have the wrong size");
}

std::uint32_t Schedule::max_load() const {
    return load_.empty() ? 0 : *std::max_element(load_.begin(), load_.end());
}

std::uint32_t Schedule::slot_of(std::uint32_t cell) const {
    const auto side = static_cast<std::uint32_t>(hopping_side_);
    const auto K = static_cast<std::uint32_t>(reuse_side_);
    return ((cell % side) % K) * K + (cell / side) % K;
}

std::vector<Link> Schedule::activation_set(std::uint32_t slot, std::uint32_t round) const {
    const auto K = static_cast<std::uint32_t>(reuse_side_);
    const auto side = static_cast<std::uint32_t>(hopping_side_);
    std::vector<Link> active;
    for (std::uint32_t j = slot % K; j < side; j += K) {
        for (std::uint32_t i = slot / K; i < side; i += K) {
            auto pending = links_of(j * side + i);
            if (!pending.empty()) active.push_back(pending[round % pending.size()]);
        }
    }
    return active;
}

std::uint32_t Schedule::round_count() const {
    std::uint32_t rounds = 0;
    for (std::size_t c = 0; c + 1 < link_offsets_.size(); ++c)
        rounds = std::max(rounds, link_offsets_[c + 1] - link_offsets_[c]);
    return rounds;
}

Schedule schedule_tdma(const RoutePlan& routes, const CellGrid& grid, const DerivedScales& scales) {
    const std::size_t cells = grid.hopping_cell_count();
    std::vector<std::uint32_t> load(cells, 0);
    std::vector<std::pair<std::uint32_t, Link>> staged;
    staged.reserve(routes.total_length());
    std::optional<std::uint32_t> void_cell;

    for (std::size_t k = 0; k < routes.size(); ++k) {
        auto path = routes.route(k);
        for (std::uint32_t c : path) ++load[c];
        if (path.size() == 1) {
            staged.push_back({path[0], Link{routes.source[k], routes.destination[k], path[0]}});
            continue;
        }
        bool broken = false;
        for (std::size_t t = 1; t + 1 < path.size(); ++t) {
            if (grid.relay_of(path[t]) == CellGrid::kEmpty) {
                if (!void_cell) void_cell = path[t];
                broken = true;
                break;
            }
        }
        if (broken) continue;
        for (std::size_t t = 0; t + 1 < path.size(); ++t) {
            const std::uint32_t tx = t == 0 ? routes.source[k] : grid.relay_of(path[t]);
            const std::uint32_t rx =
                t + 2 == path.size() ? routes.destination[k] : grid.relay_of(path[t + 1]);
            staged.push_back({path[t], Link{tx, rx, path[t]}});
        }
    }

    std::vector<std::uint32_t> offsets(cells + 1, 0);
    for (const auto& s : staged) ++offsets[s.first + 1];
    for (std::size_t c = 0; c < cells; ++c) offsets[c + 1] += offsets[c];
    std::vector<Link> links(staged.size());
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& s : staged) links[cursor[s.first]++] = s.second;

    return Schedule(scales.reuse_side, cells, std::move(load), std::move(offsets), std::move(links),
                    void_cell, grid.hopping_side_count());
}

std::vector<std::uint32_t> deliver_single_hop(const SDAssignment& assignment, const CellGrid& grid) {
    std::vector<std::uint32_t> load(grid.traffic_cell_count(), 0);
    for (std::uint32_t u = 0; u < assignment.node_count(); ++u)
        if (assignment.kind[u] == ServeKind::paired) ++load[grid.traffic_cell_of_node(u)];
    return load;
}

void write_routes_csv(std::ostream& out, const RoutePlan& routes, const CellGrid& grid) {
    out << "demand_id,hop_index,cell_i,cell_j\n";
    for (std::size_t k = 0; k < routes.size(); ++k) {
        auto path = routes.route(k);
        for (std::size_t h = 0; h < path.size(); ++h) {
            const CellCoord c = grid.coord(path[h]);
            out << routes.destination[k] << ',' << h << ',' << c.i << ',' << c.j << '\n';
        }
    }
}

}  // namespace d2d
