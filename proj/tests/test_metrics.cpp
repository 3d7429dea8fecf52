#include <doctest.h>

#include "d2d/caching.hpp"
#include "d2d/delivery.hpp"
#include "d2d/geometry.hpp"
#include "d2d/metrics.hpp"
#include "d2d/popularity.hpp"
#include "d2d/rng.hpp"
#include "d2d/scales.hpp"

using namespace d2d;

namespace {

DerivedScales unit_scales() {
    DerivedScales s;
    s.n = 4;
    s.W = 1.0;
    s.reuse_side = 11;
    s.J = 121;
    s.R_agg = 1.0 / 121;
    return s;
}

SDAssignment assignment_of(std::vector<ServeKind> kinds, std::vector<std::uint32_t> sources) {
    SDAssignment a;
    a.kind = std::move(kinds);
    a.source = std::move(sources);
    a.demand.assign(a.kind.size(), 1);
    return a;
}

}  // namespace

TEST_CASE("any unserved node is a cache-miss outage") {
    auto a = assignment_of({ServeKind::paired, ServeKind::unserved, ServeKind::self_served, ServeKind::paired},
                           {2, 0, 0, 2});
    std::vector<std::uint32_t> load{1, 3, 0};
    auto r = compute_throughput(load, unit_scales(), a);
    CHECK(r.T_n == 0.0);
    CHECK(r.S_n == 0.0);
    CHECK(r.outage == OutageCause::cache_miss);
    CHECK(r.unserved_count == 1);
    CHECK(r.L_max == 3);
    CHECK(r.T_served == doctest::Approx(1.0 / 363));
    // cache miss takes precedence over a relay void
    CHECK(compute_throughput(load, unit_scales(), a, true).outage == OutageCause::cache_miss);
}

TEST_CASE("one route of one hop") {
    auto a = assignment_of({ServeKind::paired, ServeKind::self_served}, {1, 0});
    std::vector<std::uint32_t> load{1, 0, 0};
    auto r = compute_throughput(load, unit_scales(), a);
    CHECK(r.T_n == doctest::Approx(1.0 / 121));
    CHECK_FALSE(r.in_outage());
    CHECK(r.S_n == doctest::Approx(4.0 / 121));
}

TEST_CASE("everyone self-served gets W") {
    auto a = assignment_of({ServeKind::self_served, ServeKind::self_served}, {0, 0});
    auto s = unit_scales();
    s.W = 2.5;
    auto r = compute_throughput(std::vector<std::uint32_t>(5, 0), s, a);
    CHECK(r.T_n == 2.5);
    CHECK(r.L_max == 0);
    CHECK(r.max_sources_per_node == 0);
}

TEST_CASE("relay void") {
    auto a = assignment_of({ServeKind::paired, ServeKind::self_served}, {1, 0});
    auto r = compute_throughput(std::vector<std::uint32_t>{2}, unit_scales(), a, true);
    CHECK(r.outage == OutageCause::relay_void);
    CHECK(r.T_n == 0.0);
}

TEST_CASE("sources per node") {
    CHECK(max_sources_per_node(assignment_of({ServeKind::self_served}, {0})) == 0);
    auto a = assignment_of({ServeKind::paired, ServeKind::paired, ServeKind::self_served, ServeKind::paired},
                           {2, 2, 0, 1});
    CHECK(max_sources_per_node(a) == 2);
}

TEST_CASE("outage fractions") {
    std::vector<SimResult> rs(4);
    CHECK(outage_fraction(rs).cache_miss == 0.0);
    CHECK(outage_fraction(rs).relay_void == 0.0);
    rs[0].outage = OutageCause::cache_miss;
    rs[1].outage = OutageCause::cache_miss;
    rs[2].outage = OutageCause::relay_void;
    auto f = outage_fraction(rs);
    CHECK(f.cache_miss == 0.5);
    CHECK(f.relay_void == 0.25);
    CHECK_THROWS(outage_fraction(std::vector<SimResult>{}));
}

TEST_CASE("outage cause names round trip") {
    for (auto c : {OutageCause::none, OutageCause::cache_miss, OutageCause::relay_void})
        CHECK(parse_outage_cause(to_string(c)) == c);
    CHECK_THROWS(parse_outage_cause("nope"));
}

TEST_CASE("throughput properties on random instances") {
    NetworkConfig cfg;
    cfg.n = 4096;
    cfg.alpha = 0.5;
    cfg.beta = 0.3;
    cfg.a1 = 1;
    cfg.a2 = 1;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto s = derive_scales_with_eta(cfg, 0.3);
        Rng r(seed);
        auto p = place_nodes(cfg.n, r);
        auto g = build_grid(p, s);
        auto c = place_decentralized(cfg.n, s.M, s.m, r);
        auto d = sample_demands(Popularity::zipf(s.m, 0.6), cfg.n, r);
        auto a = select_sources(p, g, c, d, r);
        auto plan = build_routes(a, g);
        auto sched = schedule_tdma(plan, g, s);
        auto res = compute_throughput(sched.load(), s, a, sched.relay_void_cell().has_value());

        CHECK((res.T_n > 0) == !res.in_outage());
        CHECK(res.T_n <= s.W);
        if (plan.size() > 0) CHECK(res.L_max >= 1);
        // aggregate capacity: transmitting demands times their rate cannot
        // exceed one W / J per hopping cell
        const double paired = static_cast<double>(a.count(ServeKind::paired));
        CHECK(paired * res.T_served <= s.W * g.hopping_cell_count() / s.J * (1 + 1e-12));

        // adding routes never lowers the bottleneck
        RoutePlan grown;
        std::uint32_t prev = 0;
        for (std::size_t k = 0; k < plan.size(); ++k) {
            auto path = plan.route(k);
            grown.source.push_back(plan.source[k]);
            grown.destination.push_back(plan.destination[k]);
            grown.cells.insert(grown.cells.end(), path.begin(), path.end());
            grown.offsets.push_back(std::uint32_t(grown.cells.size()));
            if (k % 97 != 0 && k + 1 != plan.size()) continue;
            auto lm = schedule_tdma(grown, g, s).max_load();
            CHECK(lm >= prev);
            prev = lm;
        }
        CHECK(prev == sched.max_load());
    }
}

TEST_CASE("larger caches never raise the mean miss count (common random numbers)") {
    NetworkConfig cfg;
    cfg.n = 2000;
    cfg.alpha = 0.8;
    cfg.beta = 0.2;
    auto base = derive_scales_with_eta(cfg, 0.3);
    const std::int64_t m = base.m;
    double prev_outage = 2.0;
    double prev_missing = 1e18;
    for (std::int64_t M : {1, 4, 16, 32, 64}) {
        double outages = 0, missing = 0;
        const int trials = 40;
        for (int t = 0; t < trials; ++t) {
            Rng pr = Rng::stream(5, {std::uint64_t(t), 1});
            Rng cr = Rng::stream(5, {std::uint64_t(t), 2});
            Rng dr = Rng::stream(5, {std::uint64_t(t), 3});
            Rng sr = Rng::stream(5, {std::uint64_t(t), 4});
            auto p = place_nodes(cfg.n, pr);
            auto g = build_grid(p, base);
            auto c = place_decentralized(cfg.n, M, m, cr);
            auto d = sample_demands(Popularity::zipf(m, 0.6), cfg.n, dr);
            auto a = select_sources(p, g, c, d, sr);
            auto res = compute_throughput(std::vector<std::uint32_t>{1}, base, a);
            outages += res.outage == OutageCause::cache_miss;
            missing += res.unserved_count;
        }
        CHECK(outages / trials <= prev_outage);
        CHECK(missing <= prev_missing);
        prev_outage = outages / trials;
        prev_missing = missing;
    }
    CHECK(prev_outage == 0.0);
}
