#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "d2d/delivery.hpp"
#include "d2d/scales.hpp"

namespace d2d {

enum class OutageCause { none, cache_miss, relay_void };

const char* to_string(OutageCause c);
OutageCause parse_outage_cause(std::string_view s);

/// Result of one realization.
struct SimResult {
    double T_n = 0.0;          // symmetric per-node throughput, 0 on outage
    double S_n = 0.0;          // n * T_n
    OutageCause outage = OutageCause::none;
    std::uint32_t L_max = 0;   // bottleneck load
    std::uint32_t unserved_count = 0;
    std::uint32_t max_sources_per_node = 0;
    /// Throughput the schedule would give the served demands alone. Equals
    /// T_n when there is no outage; kept as a diagnostic otherwise.
    double T_served = 0.0;

    bool in_outage() const { return outage != OutageCause::none; }
};

/// T_n = (W / J) / L_max, with L_max the largest entry of `loads`; W when
/// nothing needs transmitting. Any unserved node forces a cache-miss
/// outage, and `relay_void` a relay-void outage, both with T_n = 0.
SimResult compute_throughput(std::span<const std::uint32_t> loads, const DerivedScales& scales,
                             const SDAssignment& assignment, bool relay_void = false);

/// Largest number of demanders that picked the same source.
std::uint32_t max_sources_per_node(const SDAssignment& assignment);

struct OutageRates {
    double cache_miss = 0.0;
    double relay_void = 0.0;
};

/// Empirical outage frequencies; throws on an empty list.
OutageRates outage_fraction(std::span<const SimResult> trials);

}  // namespace d2d
