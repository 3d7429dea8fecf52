#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d2d/analysis.hpp"
#include "d2d/caching.hpp"
#include "d2d/delivery.hpp"
#include "d2d/geometry.hpp"
#include "d2d/metrics.hpp"
#include "d2d/popularity.hpp"
#include "d2d/scales.hpp"

namespace d2d {

/// Delivery pipelines.
///   multihop            decentralized caching, local row/column relaying
///   single-hop          decentralized caching, direct delivery per traffic cell
///   multihop-improved   caching restricted to the most popular M*n2 files
///   centralized-global  library spread over all caches, one global traffic cell
enum class Scheme { multihop, single_hop, multihop_improved, centralized_global };

const char* to_string(Scheme s);
Scheme parse_scheme(std::string_view s);

struct ExperimentSpec {
    std::vector<std::int64_t> n_grid;
    std::vector<Scheme> schemes{Scheme::multihop};
    int trials = 1;
    NetworkConfig network;              // network.n is ignored
    std::optional<double> gamma;        // Zipf exponent of demands; uniform when absent
    std::optional<double> eps_c;        // truncated scheme only
    std::optional<double> eta;          // fixed traffic-cell exponent, overriding the rule
    std::filesystem::path output_dir = "results";

    /// Throws ConfigError, including for scheme-specific preconditions at
    /// every n of the grid.
    void validate() const;
};

/// Plain-text `key = value` lines; `#` starts a comment. Keys: n_grid,
/// alpha, beta, a1, a2, gamma, delta, eta_margin, eps_c, trials, scheme,
/// seed, and optionally W, eta, output_dir. n_grid is a list
/// ("4096, 8192") or a geometric range ("4096:65536:2"); scheme may list
/// several pipelines. Errors name the line and field.
ExperimentSpec parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentSpec load_config(const std::filesystem::path& path);

/// Scales used by `scheme` at network size n.
DerivedScales scales_for(const ExperimentSpec& spec, Scheme scheme, std::int64_t n);

/// Every intermediate product of one realization.
struct TrialState {
    DerivedScales scales;
    NodePlacement placement;
    CellGrid grid;
    CachePlacement cache;
    DemandVector demands;
    SDAssignment assignment;
    RoutePlan routes;
    std::optional<Schedule> schedule;     // multihop pipelines
    std::vector<std::uint32_t> cell_load; // hopping cells, or traffic cells for single-hop
    SimResult result;
};

/// Deterministic in (spec.network.seed, n, trial). Node positions and
/// demands do not depend on the scheme, so schemes compared at the same
/// (n, trial) see the same network.
TrialState simulate_trial(const ExperimentSpec& spec, Scheme scheme, std::int64_t n,
                          std::uint32_t trial);

struct TrialRecord {
    std::int64_t n = 0;
    Scheme scheme = Scheme::multihop;
    std::uint64_t seed = 0;
    std::uint32_t trial = 0;
    SimResult result;
    double runtime_ms = 0.0;
};

/// Worker count from D2DSIM_WORKERS, else the hardware concurrency.
unsigned workers_from_env();

/// All (n, trial, scheme) units, run on up to `workers` threads and
/// returned sorted by (n, trial, scheme position in the spec).
std::vector<TrialRecord> run_trials(const ExperimentSpec& spec, unsigned workers);

/// CSV: n,scheme,seed,trial,T_n,T_served,L_max,outage_cause,unserved,max_sources
void write_results_csv(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_results_csv(std::istream& in);
/// CSV: n,scheme,trial,runtime_ms (kept apart so results.csv is reproducible)
void write_timing_csv(std::ostream& out, const std::vector<TrialRecord>& records);

struct PointSummary {
    std::int64_t n = 0;
    std::size_t trials = 0;
    std::size_t outage_free = 0;
    double mean_T = 0.0;         // over outage-free trials
    double mean_T_served = 0.0;  // over all trials
    double mean_L_max = 0.0;
    OutageRates outage;
};

struct SchemeSummary {
    Scheme scheme = Scheme::multihop;
    std::vector<PointSummary> points;
    std::optional<ScalingFit> fit;          // outage-free means
    std::string fit_error;                  // why `fit` is absent
    std::optional<ScalingFit> served_fit;   // diagnostic: T_served means
    std::optional<ScalingLaw> theory;
};

/// Theoretical law a scheme is compared against.
std::optional<ScalingLaw> theory_for(Scheme scheme, const BoundSet& bounds);

std::vector<SchemeSummary> summarize(const std::vector<TrialRecord>& records,
                                     const std::optional<BoundSet>& bounds);

/// CSV: scheme,n,trials,outage_free,mean_T,mean_T_served,mean_L_max,cache_miss_rate,relay_void_rate
void write_outage_table(std::ostream& out, const std::vector<SchemeSummary>& summaries);
/// CSV: scheme,points,slope,slope_stderr,r_squared,theory,served_slope,note
void write_fit_summary(std::ostream& out, const std::vector<SchemeSummary>& summaries);

/// Writes `<scheme>.dat` (ln n, ln mean T_n) per scheme with at least one
/// usable point, plus `bounds.dat` with reference lines of the theoretical
/// slopes anchored at each scheme's first point. n values whose trials are
/// all in outage are skipped; the returned strings describe what was
/// skipped. Throws when `records` is empty.
std::vector<std::string> emit_plot_data(const std::vector<TrialRecord>& records,
                                        const std::filesystem::path& dir,
                                        const std::optional<BoundSet>& bounds);

struct ExperimentReport {
    std::vector<TrialRecord> records;
    std::vector<SchemeSummary> summaries;
    BoundSet bounds;
    std::vector<std::string> warnings;
};

/// Runs the sweep and writes results.csv, timing.csv, outage.csv,
/// summary.csv, bounds.csv and plot/*.dat under spec.output_dir.
ExperimentReport run_experiment(const ExperimentSpec& spec, unsigned workers);

}  // namespace d2d
