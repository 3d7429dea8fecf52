#include "d2d/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2d {

const char* to_string(OutageCause c) {
    switch (c) {
        case OutageCause::none: return "none";
        case OutageCause::cache_miss: return "cache-miss";
        case OutageCause::relay_void: return "relay-void";
    }
    return "?";
}

OutageCause parse_outage_cause(std::string_view s) {
    if (s == "none") return OutageCause::none;
    if (s == "cache-miss") return OutageCause::cache_miss;
    if (s == "relay-void") return OutageCause::relay_void;
    throw std::invalid_argument("unknown outage cause: " + std::string(s));
}

std::uint32_t max_sources_per_node(const SDAssignment& assignment) {
    std::vector<std::uint32_t> picks(assignment.node_count(), 0);
    std::uint32_t best = 0;
    for (std::size_t u = 0; u < assignment.node_count(); ++u) {
        if (assignment.kind[u] != ServeKind::paired) continue;
        best = std::max(best, ++picks[assignment.source[u]]);
    }
    return best;
}

SimResult compute_throughput(std::span<const std::uint32_t> loads, const DerivedScales& scales,
                             const SDAssignment& assignment, bool relay_void) {
    SimResult r;
    r.L_max = loads.empty() ? 0 : *std::max_element(loads.begin(), loads.end());
    r.unserved_count = static_cast<std::uint32_t>(assignment.count(ServeKind::unserved));
    r.max_sources_per_node = max_sources_per_node(assignment);
    r.T_served = r.L_max == 0 ? scales.W : scales.R_agg / r.L_max;

    if (r.unserved_count > 0)
        r.outage = OutageCause::cache_miss;
    else if (relay_void)
        r.outage = OutageCause::relay_void;

    r.T_n = r.in_outage() ? 0.0 : r.T_served;
    r.S_n = static_cast<double>(scales.n) * r.T_n;
    return r;
}

OutageRates outage_fraction(std::span<const SimResult> trials) {
    if (trials.empty()) throw std::invalid_argument("outage_fraction: no trials");
    OutageRates rates;
    for (const auto& t : trials) {
        if (t.outage == OutageCause::cache_miss) rates.cache_miss += 1.0;
        if (t.outage == OutageCause::relay_void) rates.relay_void += 1.0;
    }
    rates.cache_miss /= static_cast<double>(trials.size());
    rates.relay_void /= static_cast<double>(trials.size());
    return rates;
}

}  // namespace d2d
