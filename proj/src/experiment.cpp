#include "d2d/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "d2d/csv.hpp"
#include "d2d/rng.hpp"

namespace d2d {

const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::multihop: return "multihop";
        case Scheme::single_hop: return "single-hop";
        case Scheme::multihop_improved: return "multihop-improved";
        case Scheme::centralized_global: return "centralized-global";
    }
    return "?";
}

Scheme parse_scheme(std::string_view s) {
    for (Scheme k : {Scheme::multihop, Scheme::single_hop, Scheme::multihop_improved,
                     Scheme::centralized_global})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown scheme '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

template <typename T>
T parse_number(std::string_view text) {
    text = trim(text);
    T value{};
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ConfigError("expected a number, got '" + std::string(text) + "'");
    return value;
}

std::vector<std::int64_t> parse_grid(std::string_view text) {
    std::vector<std::int64_t> grid;
    if (text.find(':') != std::string_view::npos) {
        auto parts = split(text, ':');
        if (parts.size() != 3) throw ConfigError("geometric grid must be start:stop:factor");
        const auto start = parse_number<std::int64_t>(parts[0]);
        const auto stop = parse_number<std::int64_t>(parts[1]);
        const auto factor = parse_number<std::int64_t>(parts[2]);
        if (start < 1 || factor < 2) throw ConfigError("geometric grid needs start >= 1, factor >= 2");
        for (std::int64_t v = start; v <= stop; v *= factor) grid.push_back(v);
        return grid;
    }
    std::string normalized(text);
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream in(normalized);
    std::string token;
    while (in >> token) grid.push_back(parse_number<std::int64_t>(token));
    return grid;
}

std::vector<Scheme> parse_schemes(std::string_view text) {
    std::vector<Scheme> schemes;
    for (const auto& part : split(text, ',')) {
        auto name = trim(part);
        if (!name.empty()) schemes.push_back(parse_scheme(name));
    }
    return schemes;
}

}  // namespace

ExperimentSpec parse_config(std::istream& in, const std::string& source) {
    ExperimentSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view body = line;
        if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        std::string key(trim(body.substr(0, eq)));
        auto where = [&] {
            return source + ":" + std::to_string(lineno) + ": field '" + key + "': ";
        };
        if (eq == std::string_view::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string_view value = trim(body.substr(eq + 1));
        try {
            if (key == "n_grid") spec.n_grid = parse_grid(value);
            else if (key == "alpha") spec.network.alpha = parse_number<double>(value);
            else if (key == "beta") spec.network.beta = parse_number<double>(value);
            else if (key == "a1") spec.network.a1 = parse_number<double>(value);
            else if (key == "a2") spec.network.a2 = parse_number<double>(value);
            else if (key == "W") spec.network.W = parse_number<double>(value);
            else if (key == "delta") spec.network.delta = parse_number<double>(value);
            else if (key == "eta_margin") spec.network.eta_margin = parse_number<double>(value);
            else if (key == "seed") spec.network.seed = parse_number<std::uint64_t>(value);
            else if (key == "gamma") spec.gamma = parse_number<double>(value);
            else if (key == "eps_c") spec.eps_c = parse_number<double>(value);
            else if (key == "eta") spec.eta = parse_number<double>(value);
            else if (key == "trials") spec.trials = parse_number<int>(value);
            else if (key == "scheme") spec.schemes = parse_schemes(value);
            else if (key == "output_dir") spec.output_dir = std::string(value);
            else throw ConfigError("unknown key");
        } catch (const ConfigError& e) {
            throw ConfigError(where() + e.what());
        }
    }
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return spec;
}

ExperimentSpec load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in, path.string());
}

void ExperimentSpec::validate() const {
    if (n_grid.empty()) throw ConfigError("n_grid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 2) throw ConfigError("n_grid values must be >= 2");
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid must be strictly increasing");
    }
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (schemes.empty()) throw ConfigError("no scheme given");
    if (gamma && !(*gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
    for (Scheme s : schemes) {
        if (s == Scheme::multihop_improved && (!gamma || !eps_c))
            throw ConfigError("scheme multihop-improved needs gamma and eps_c");
        for (std::int64_t n : n_grid) {
            const DerivedScales sc = scales_for(*this, s, n);
            if (s == Scheme::centralized_global && n * sc.M < sc.m)
                throw ConfigError("scheme centralized-global needs n*M >= m (fails at n = " +
                                  std::to_string(n) + ")");
        }
    }
}

DerivedScales scales_for(const ExperimentSpec& spec, Scheme scheme, std::int64_t n) {
    NetworkConfig cfg = spec.network;
    cfg.n = n;
    if (scheme == Scheme::centralized_global) return derive_scales_with_eta(cfg, 0.0);
    std::optional<ImprovedParams> improved;
    if (scheme == Scheme::multihop_improved) {
        if (!spec.gamma || !spec.eps_c) throw ConfigError("multihop-improved needs gamma and eps_c");
        improved = ImprovedParams{*spec.gamma, *spec.eps_c};
    }
    if (spec.eta) {
        DerivedScales s = improved ? derive_scales(cfg, improved) : derive_scales_with_eta(cfg, *spec.eta);
        return with_eta(s, *spec.eta);
    }
    return derive_scales(cfg, improved);
}

// ---------------------------------------------------------------------------
// One realization

TrialState simulate_trial(const ExperimentSpec& spec, Scheme scheme, std::int64_t n,
                          std::uint32_t trial) {
    const std::uint64_t seed = spec.network.seed;
    const auto un = static_cast<std::uint64_t>(n);
    auto stream = [&](StreamTag tag) {
        return Rng::stream(seed, {un, trial, static_cast<std::uint64_t>(tag)});
    };

    DerivedScales scales = scales_for(spec, scheme, n);

    Rng placement_rng = stream(StreamTag::node_placement);
    NodePlacement placement = place_nodes(n, placement_rng);
    CellGrid grid = build_grid(placement, scales);

    Rng cache_rng = stream(StreamTag::cache_placement);
    CachePlacement cache = [&] {
        switch (scheme) {
            case Scheme::multihop_improved: return place_decentralized_subset(n, scales, cache_rng);
            case Scheme::centralized_global: return place_centralized(n, scales.M, scales.m, cache_rng);
            default: return place_decentralized(n, scales.M, scales.m, cache_rng);
        }
    }();

    const Popularity pop = Popularity::zipf(scales.m, spec.gamma.value_or(0.0));
    Rng demand_rng = stream(StreamTag::demands);
    DemandVector demands = sample_demands(pop, n, demand_rng);

    Rng select_rng = stream(StreamTag::source_selection);
    SDAssignment assignment = select_sources(placement, grid, cache, demands, select_rng);

    RoutePlan routes;
    std::optional<Schedule> schedule;
    std::vector<std::uint32_t> load;
    SimResult result;
    if (scheme == Scheme::single_hop) {
        load = deliver_single_hop(assignment, grid);
        result = compute_throughput(load, scales, assignment);
    } else {
        routes = build_routes(assignment, grid);
        schedule = schedule_tdma(routes, grid, scales);
        load.assign(schedule->load().begin(), schedule->load().end());
        result = compute_throughput(load, scales, assignment,
                                    schedule->relay_void_cell().has_value());
    }
    return TrialState{std::move(scales),     std::move(placement), std::move(grid),
                      std::move(cache),      std::move(demands),   std::move(assignment),
                      std::move(routes),     std::move(schedule),  std::move(load),
                      result};
}

// ---------------------------------------------------------------------------
// Sweeps

unsigned workers_from_env() {
    if (const char* env = std::getenv("D2DSIM_WORKERS")) {
        unsigned v = 0;
        std::string_view s(env);
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec == std::errc() && v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<TrialRecord> run_trials(const ExperimentSpec& spec, unsigned workers) {
    spec.validate();
    std::vector<TrialRecord> units;
    for (std::int64_t n : spec.n_grid)
        for (int t = 0; t < spec.trials; ++t)
            for (Scheme s : spec.schemes) {
                TrialRecord r;
                r.n = n;
                r.scheme = s;
                r.seed = spec.network.seed;
                r.trial = static_cast<std::uint32_t>(t);
                units.push_back(r);
            }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        while (!failed) {
            const std::size_t k = next.fetch_add(1);
            if (k >= units.size()) return;
            TrialRecord& r = units[k];
            try {
                const auto t0 = std::chrono::steady_clock::now();
                r.result = simulate_trial(spec, r.scheme, r.n, r.trial).result;
                const auto t1 = std::chrono::steady_clock::now();
                r.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(units.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return units;
}

void write_results_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
    out << "n,scheme,seed,trial,T_n,T_served,L_max,outage_cause,unserved,max_sources\n";
    for (const auto& r : records) {
        out << r.n << ',' << to_string(r.scheme) << ',' << r.seed << ',' << r.trial << ','
            << format_double(r.result.T_n) << ',' << format_double(r.result.T_served) << ','
            << r.result.L_max << ',' << to_string(r.result.outage) << ','
            << r.result.unserved_count << ',' << r.result.max_sources_per_node << '\n';
    }
}

std::vector<TrialRecord> read_results_csv(std::istream& in) {
    std::vector<TrialRecord> records;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("results CSV is empty");
    const auto header = split(trim(line), ',');
    const std::vector<std::string> expected{"n", "scheme", "seed", "trial", "T_n", "T_served",
                                            "L_max", "outage_cause", "unserved", "max_sources"};
    if (header != expected) throw std::runtime_error("results CSV: unexpected header");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = split(trim(line), ',');
        if (f.size() != expected.size())
            throw std::runtime_error("results CSV line " + std::to_string(lineno) + ": wrong field count");
        try {
            TrialRecord r;
            r.n = parse_number<std::int64_t>(f[0]);
            r.scheme = parse_scheme(f[1]);
            r.seed = parse_number<std::uint64_t>(f[2]);
            r.trial = parse_number<std::uint32_t>(f[3]);
            r.result.T_n = parse_number<double>(f[4]);
            r.result.T_served = parse_number<double>(f[5]);
            r.result.L_max = parse_number<std::uint32_t>(f[6]);
            r.result.outage = parse_outage_cause(f[7]);
            r.result.unserved_count = parse_number<std::uint32_t>(f[8]);
            r.result.max_sources_per_node = parse_number<std::uint32_t>(f[9]);
            r.result.S_n = static_cast<double>(r.n) * r.result.T_n;
            records.push_back(r);
        } catch (const std::exception& e) {
            throw std::runtime_error("results CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return records;
}

void write_timing_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
    out << "n,scheme,trial,runtime_ms\n";
    for (const auto& r : records)
        out << r.n << ',' << to_string(r.scheme) << ',' << r.trial << ','
            << format_double(r.runtime_ms) << '\n';
}

// ---------------------------------------------------------------------------
// Summaries

std::optional<ScalingLaw> theory_for(Scheme scheme, const BoundSet& bounds) {
    switch (scheme) {
        case Scheme::multihop:
        case Scheme::centralized_global: return bounds.multihop_achievable;
        case Scheme::single_hop: return bounds.singlehop_achievable;
        case Scheme::multihop_improved: return bounds.improved;
    }
    return std::nullopt;
}

std::vector<SchemeSummary> summarize(const std::vector<TrialRecord>& records,
                                     const std::optional<BoundSet>& bounds) {
    std::vector<Scheme> order;
    for (const auto& r : records)
        if (std::find(order.begin(), order.end(), r.scheme) == order.end()) order.push_back(r.scheme);

    std::vector<SchemeSummary> out;
    for (Scheme s : order) {
        SchemeSummary sum;
        sum.scheme = s;
        if (bounds) sum.theory = theory_for(s, *bounds);

        std::map<std::int64_t, std::vector<const TrialRecord*>> by_n;
        for (const auto& r : records)
            if (r.scheme == s) by_n[r.n].push_back(&r);

        std::vector<TrialOutcome> outcomes;
        std::vector<double> xs, served;
        for (const auto& [n, rows] : by_n) {
            PointSummary p;
            p.n = n;
            p.trials = rows.size();
            std::vector<SimResult> results;
            double total_served = 0.0, total_L = 0.0, total_T = 0.0;
            for (const TrialRecord* r : rows) {
                results.push_back(r->result);
                outcomes.push_back({n, r->result.T_n, r->result.in_outage()});
                total_served += r->result.T_served;
                total_L += r->result.L_max;
                if (!r->result.in_outage()) {
                    ++p.outage_free;
                    total_T += r->result.T_n;
                }
            }
            p.mean_T = p.outage_free ? total_T / static_cast<double>(p.outage_free) : 0.0;
            p.mean_T_served = total_served / static_cast<double>(p.trials);
            p.mean_L_max = total_L / static_cast<double>(p.trials);
            p.outage = outage_fraction(results);
            xs.push_back(static_cast<double>(n));
            served.push_back(p.mean_T_served);
            sum.points.push_back(p);
        }
        try {
            sum.fit = fit_scaling(outcomes);
        } catch (const std::invalid_argument& e) {
            sum.fit_error = e.what();
        }
        try {
            sum.served_fit = fit_power_law(xs, served);
        } catch (const std::invalid_argument&) {
        }
        out.push_back(std::move(sum));
    }
    return out;
}

void write_outage_table(std::ostream& out, const std::vector<SchemeSummary>& summaries) {
    out << "scheme,n,trials,outage_free,mean_T,mean_T_served,mean_L_max,cache_miss_rate,"
           "relay_void_rate\n";
    for (const auto& s : summaries)
        for (const auto& p : s.points)
            out << to_string(s.scheme) << ',' << p.n << ',' << p.trials << ',' << p.outage_free << ','
                << format_double(p.mean_T) << ',' << format_double(p.mean_T_served) << ','
                << format_double(p.mean_L_max) << ',' << format_double(p.outage.cache_miss) << ','
                << format_double(p.outage.relay_void) << '\n';
}

void write_fit_summary(std::ostream& out, const std::vector<SchemeSummary>& summaries) {
    out << "scheme,points,slope,slope_stderr,r_squared,theory,served_slope,note\n";
    for (const auto& s : summaries) {
        out << to_string(s.scheme) << ',';
        if (s.fit)
            out << s.fit->points << ',' << format_double(s.fit->slope) << ','
                << format_double(s.fit->slope_stderr) << ',' << format_double(s.fit->r_squared);
        else
            out << "0,,,";
        out << ',' << (s.theory ? s.theory->label() : "") << ','
            << (s.served_fit ? format_double(s.served_fit->slope) : "") << ',';
        std::string note = s.fit_error;
        std::replace(note.begin(), note.end(), ',', ';');
        out << note << '\n';
    }
}

std::vector<std::string> emit_plot_data(const std::vector<TrialRecord>& records,
                                        const std::filesystem::path& dir,
                                        const std::optional<BoundSet>& bounds) {
    if (records.empty()) throw std::invalid_argument("emit_plot_data: no results");
    std::vector<std::string> warnings;
    const auto summaries = summarize(records, bounds);

    struct Line {
        std::string name;
        double x0, y0, slope;
    };
    std::vector<Line> refs;
    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> series;
    for (const auto& s : summaries) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : s.points) {
            if (p.outage_free == 0) {
                warnings.push_back(std::string(to_string(s.scheme)) + ": skipped n = " +
                                   std::to_string(p.n) + " (every trial in outage)");
                continue;
            }
            pts.emplace_back(std::log(static_cast<double>(p.n)), std::log(p.mean_T));
        }
        if (pts.empty()) {
            warnings.push_back(std::string(to_string(s.scheme)) + ": no usable points, no data file");
            continue;
        }
        if (s.theory && s.theory->kind == ScalingLaw::Kind::power)
            refs.push_back({to_string(s.scheme), pts.front().first, pts.front().second,
                            s.theory->exponent});
        series.emplace_back(to_string(s.scheme), std::move(pts));
    }
    if (series.empty()) throw std::invalid_argument("emit_plot_data: every n point is in outage");

    std::filesystem::create_directories(dir);
    std::vector<double> all_x;
    for (const auto& [name, pts] : series) {
        std::ofstream f(dir / (name + ".dat"));
        f << "# " << name << ": column 1 = ln n, column 2 = ln mean T_n (outage-free trials)\n";
        for (const auto& [x, y] : pts) {
            f << format_double(x) << ' ' << format_double(y) << '\n';
            all_x.push_back(x);
        }
    }
    std::sort(all_x.begin(), all_x.end());
    all_x.erase(std::unique(all_x.begin(), all_x.end()), all_x.end());
    std::ofstream f(dir / "bounds.dat");
    f << "# column 1 = ln n; then per scheme the theoretical slope through its first point:";
    for (const auto& r : refs) f << ' ' << r.name << "(slope " << format_double(r.slope) << ')';
    f << '\n';
    for (double x : all_x) {
        f << format_double(x);
        for (const auto& r : refs) f << ' ' << format_double(r.y0 + r.slope * (x - r.x0));
        f << '\n';
    }
    return warnings;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, unsigned workers) {
    ExperimentReport report;
    report.bounds = theoretical_bounds(spec.network.alpha, spec.network.beta, spec.network.a1,
                                       spec.network.a2, spec.gamma);
    report.records = run_trials(spec, workers);
    report.summaries = summarize(report.records, report.bounds);

    const auto& dir = spec.output_dir;
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "results.csv");
        write_results_csv(f, report.records);
    }
    {
        std::ofstream f(dir / "timing.csv");
        write_timing_csv(f, report.records);
    }
    {
        std::ofstream f(dir / "outage.csv");
        write_outage_table(f, report.summaries);
    }
    {
        std::ofstream f(dir / "summary.csv");
        write_fit_summary(f, report.summaries);
    }
    {
        std::ofstream f(dir / "bounds.csv");
        write_bounds_csv(f, report.bounds);
    }
    try {
        report.warnings = emit_plot_data(report.records, dir / "plot", report.bounds);
    } catch (const std::invalid_argument& e) {
        report.warnings.push_back(std::string("plot data not written: ") + e.what());
    }
    return report;
}

}  // namespace d2d
