#include <doctest.h>

#include <cmath>
#include <sstream>

#include "d2d/analysis.hpp"
#include "d2d/rng.hpp"

using namespace d2d;

namespace {

// P(Bin(l, p) <= k) for every k in 0..l, summed from log-space terms.
std::vector<double> binomial_cdf(int l, double p) {
    std::vector<double> cdf(static_cast<std::size_t>(l) + 1);
    double acc = 0;
    for (int k = 0; k <= l; ++k) {
        double lg = std::lgamma(l + 1.0) - std::lgamma(k + 1.0) - std::lgamma(l - k + 1.0) +
                    k * std::log(p) + (l - k) * std::log1p(-p);
        acc += std::exp(lg);
        cdf[k] = std::min(acc, 1.0);
    }
    return cdf;
}

// Direct partial sum of the Zipf law on m files up to `head`.
double zipf_head(std::int64_t m, std::int64_t head, double gamma) {
    long double top = 0, all = 0;
    for (std::int64_t i = m; i >= 1; --i) {
        long double v = std::pow(static_cast<long double>(i), -gamma);
        all += v;
        if (i <= head) top += v;
    }
    return static_cast<double>(top / all);
}

}  // namespace

TEST_SUITE("regimes") {
    TEST_CASE("labels") {
        CHECK(classify_regime(1.0, 0.0, 1, 1) == Regime::III);
        CHECK(classify_regime(1.0, 0.0, 2, 1) == Regime::II);
        CHECK(classify_regime(0.8, 0.2, 1, 1) == Regime::IV);
        CHECK(classify_regime(1.5, 0.2, 1, 1) == Regime::I);
        CHECK(classify_regime(0.5, 0.5, 2, 1) == Regime::V);
        CHECK_THROWS(classify_regime(0.5, 0.5, 1, 1));
        CHECK_THROWS(classify_regime(0.5, 0.5, 1, 2));
    }

    TEST_CASE("every admissible point gets exactly the label its gap dictates") {
        for (double alpha = 0.1; alpha <= 2.0; alpha += 0.1)
            for (double beta = 0.0; beta <= alpha + 1e-9; beta += 0.05)
                for (double a1 : {0.5, 1.0, 2.0})
                    for (double a2 : {0.5, 1.0, 2.0}) {
                        const double gap = alpha - beta;
                        const bool flat = std::abs(gap) < 1e-9;
                        if (flat && a1 <= a2) {
                            CHECK_THROWS(classify_regime(alpha, beta, a1, a2));
                            continue;
                        }
                        Regime expected;
                        if (flat) expected = Regime::V;
                        else if (std::abs(gap - 1) < 1e-9) expected = a1 > a2 ? Regime::II : Regime::III;
                        else if (gap > 1) expected = Regime::I;
                        else expected = Regime::IV;
                        CHECK(classify_regime(alpha, beta, a1, a2) == expected);
                    }
    }
}

TEST_SUITE("bounds") {
    TEST_CASE("regime IV exponents") {
        auto b = theoretical_bounds(0.8, 0.3, 1, 1);
        CHECK(b.regime == Regime::IV);
        CHECK(b.multihop_achievable.kind == ScalingLaw::Kind::power);
        CHECK(b.multihop_achievable.exponent == doctest::Approx(-0.25));
        CHECK(b.singlehop_achievable.exponent == doctest::Approx(-0.5));
        CHECK(b.multihop_converse.exponent == doctest::Approx(-0.25));
        CHECK_FALSE(b.improved.has_value());
    }

    TEST_CASE("outage regimes have zero throughput") {
        for (auto b : {theoretical_bounds(1.5, 0.2, 1, 1), theoretical_bounds(1.0, 0.0, 2, 1)}) {
            CHECK(b.multihop_achievable.kind == ScalingLaw::Kind::zero);
            CHECK(b.singlehop_converse.kind == ScalingLaw::Kind::zero);
            CHECK_FALSE(theoretical_bounds(1.5, 0.2, 1, 1, 3.0).improved.has_value());
        }
    }

    TEST_CASE("regime V reports the log gap") {
        auto b = theoretical_bounds(0.5, 0.5, 2, 1);
        CHECK(b.multihop_achievable.kind == ScalingLaw::Kind::power);
        CHECK(b.multihop_achievable.exponent == 0.0);
        CHECK(b.multihop_converse.kind == ScalingLaw::Kind::inverse_log);
        CHECK(b.multihop_converse.label() == "1/log(n)");
    }

    TEST_CASE("truncated scheme exponent") {
        auto b = theoretical_bounds(1.0, 0.0, 1, 1, 2.5);
        REQUIRE(b.improved.has_value());
        CHECK(b.improved->exponent == doctest::Approx(-1.0 / 3));
        CHECK(b.multihop_achievable.exponent == doctest::Approx(-0.5));
        CHECK_FALSE(theoretical_bounds(1.0, 0.0, 1, 1, 1.2).improved.has_value());
        CHECK_FALSE(theoretical_bounds(1.0, 0.0, 1, 1, 2.0).improved.has_value());
    }

    TEST_CASE("multihop exponent is half the single-hop exponent") {
        for (double alpha = 0.1; alpha <= 1.0; alpha += 0.05)
            for (double beta = 0.0; beta < alpha - 0.01; beta += 0.05) {
                auto b = theoretical_bounds(alpha, beta, 1, 1);
                REQUIRE((b.regime == Regime::III || b.regime == Regime::IV));
                CHECK(b.multihop_achievable.exponent ==
                      doctest::Approx(b.singlehop_achievable.exponent / 2));
                CHECK(b.multihop_achievable.exponent <= b.multihop_converse.exponent + 1e-12);
            }
    }

    TEST_CASE("bounds csv") {
        std::ostringstream out;
        write_bounds_csv(out, theoretical_bounds(1.0, 0.0, 1, 1, 2.5));
        CHECK(out.str() ==
              "regime,multihop_ach,multihop_conv,singlehop_ach,singlehop_conv,improved\n"
              "III,-0.5,-0.5,-1,-1,-0.3333333333\n");
    }
}

TEST_SUITE("chernoff") {
    TEST_CASE("zero exponent at the mean") {
        CHECK(chernoff_upper(100, 0.3, 30) == doctest::Approx(1.0));
    }

    TEST_CASE("hand values") {
        CHECK(chernoff_upper(100, 0.3, 15) == doctest::Approx(std::exp(-3.75)));
        CHECK(chernoff_upper(100, 0.3, 15) == doctest::Approx(0.0235).epsilon(0.01));
        auto cdf = binomial_cdf(100, 0.3);
        CHECK(cdf[15] < 0.0235);
        CHECK(cdf[15] == doctest::Approx(4.04999542e-4).epsilon(1e-6));

        CHECK(chernoff_upper(10, 0.5, 0) == doctest::Approx(0.0821).epsilon(0.001));
        CHECK(std::pow(0.5, 10) == doctest::Approx(0.00098).epsilon(0.01));
    }

    TEST_CASE("rejects k outside [0, lp]") {
        CHECK_THROWS(chernoff_upper(10, 0.5, -1));
        CHECK_THROWS(chernoff_upper(10, 0.5, 6));
        CHECK_THROWS(chernoff_upper(0, 0.5, 0));
        CHECK_THROWS(chernoff_upper(10, 0.0, 0));
    }

    TEST_CASE("dominates the exact binomial tail") {
        std::size_t checked = 0, violations = 0;
        for (int l = 1; l <= 200; ++l)
            for (int t = 1; t <= 9; ++t) {
                const double p = t / 10.0;
                auto cdf = binomial_cdf(l, p);
                const int top = static_cast<int>(std::floor(l * p + 1e-9));
                for (int k = 0; k <= top; ++k) {
                    ++checked;
                    if (chernoff_upper(l, p, k) < cdf[k]) ++violations;
                }
            }
        CHECK(checked > 90000);
        CHECK(violations == 0);
    }
}

TEST_SUITE("heavy tail") {
    TEST_CASE("uniform head mass tends to one as c1 approaches a1") {
        PopularityFamily u{PopularityFamily::Kind::uniform, 0};
        CHECK(heavy_tail_mass(u, 0.5, 1.0, 0.999, 1000000) == doctest::Approx(0.999).epsilon(1e-3));
        CHECK(heavy_tail_mass(u, 0.5, 1.0, 0.5, 1000000) == doctest::Approx(0.5));
    }

    TEST_CASE("zipf 0.6 converges to (c1/a1)^(1-gamma)") {
        PopularityFamily z{PopularityFamily::Kind::zipf, 0.6};
        const double got = heavy_tail_mass(z, 1.0, 1.0, 0.5, 1000000);
        const double oracle = zipf_head(1000000, 500000, 0.6);
        CHECK(got == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(std::abs(got - std::pow(0.5, 0.4)) < 1e-2);
        // frozen value of the partial sum
        CHECK(got == doctest::Approx(0.7571031535).epsilon(1e-8));
    }

    TEST_CASE("zipf 3 is not heavy tailed") {
        PopularityFamily z{PopularityFamily::Kind::zipf, 3.0};
        double prev = 0;
        for (std::int64_t n : {100, 10000, 1000000}) {
            double h = heavy_tail_mass(z, 1.0, 1.0, 0.5, n);
            CHECK(h >= prev);
            prev = h;
        }
        CHECK(prev > 1 - 1e-11);
    }

    TEST_CASE("precondition") {
        PopularityFamily z{PopularityFamily::Kind::zipf, 0.6};
        CHECK_THROWS(heavy_tail_mass(z, 1.0, 1.0, 1.0, 1000));
        CHECK_THROWS(heavy_tail_mass(z, 1.0, 1.0, 0.0, 1000));
    }
}

TEST_SUITE("outage bound") {
    TEST_CASE("full caches give certainty") {
        CHECK(analytic_outage_bound(1000, 50, 50, 0.1, 0.2) == 1.0);
    }

    TEST_CASE("hand value") {
        // 1 - 10^4 * 0.9^900 with 0.9^900 = e^-94.8
        const double b = analytic_outage_bound(10000, 100, 10, 0.1, 0.1);
        CHECK(b == doctest::Approx(1.0));
        CHECK(10000 * std::pow(0.9, 900) < 1e-36);
    }

    TEST_CASE("clamped at zero") {
        CHECK(analytic_outage_bound(10000, 1000, 1, 0.01, 0.1) == 0.0);
    }

    TEST_CASE("matches the formula in between") {
        // 1 - 4096 * (0.95)^(0.8 * 4096 * 0.0625)
        const double expected = 1 - 4096 * std::pow(0.95, 0.8 * 4096 * 0.0625);
        CHECK(analytic_outage_bound(4096, 100, 5, 0.0625, 0.2) == doctest::Approx(expected));
        CHECK(expected > 0.0);
        CHECK(expected < 1.0);
    }
}

TEST_SUITE("fits") {
    TEST_CASE("exact power law") {
        std::vector<double> x, y;
        for (double n = 1024; n <= 65536; n *= 2) {
            x.push_back(n);
            y.push_back(std::pow(n, -0.5));
        }
        auto f = fit_power_law(x, y);
        CHECK(std::abs(f.slope + 0.5) < 1e-9);
        CHECK(f.r_squared == doctest::Approx(1.0));
        CHECK(f.points == x.size());
    }

    TEST_CASE("noisy power law") {
        Rng r(2718);
        std::vector<TrialOutcome> trials;
        for (std::int64_t n = 4096; n <= 65536; n *= 2)
            for (int t = 0; t < 20; ++t) {
                double noise = 1 + 0.01 * (2 * r.uniform() - 1);
                trials.push_back({n, 3.0 * std::pow(double(n), -0.25) * noise, false});
            }
        auto f = fit_scaling(trials);
        CHECK(std::abs(f.slope + 0.25) <= 0.02);
        CHECK(f.slope_stderr < 0.01);
    }

    TEST_CASE("constant") {
        std::vector<double> x{10, 100, 1000}, y{2, 2, 2};
        auto f = fit_power_law(x, y);
        CHECK(f.slope == doctest::Approx(0.0));
        CHECK(f.intercept == doctest::Approx(std::log(2.0)));
    }

    TEST_CASE("hand regression") {
        // ln-space points (0,0), (1,1), (2,3): slope 1.5, intercept -1/6
        const double e = std::exp(1.0);
        std::vector<double> x{1, e, e * e}, y{1, e, e * e * e};
        auto f = fit_power_law(x, y);
        CHECK(f.slope == doctest::Approx(1.5));
        CHECK(f.intercept == doctest::Approx(-1.0 / 6));
        // residuals 1/6, -1/3, 1/6: SSE = 1/6, stderr = sqrt(SSE / 1 / 2)
        CHECK(f.slope_stderr == doctest::Approx(std::sqrt(1.0 / 12)));
        CHECK(f.r_squared == doctest::Approx(1 - (1.0 / 6) / (14.0 / 3)));
    }

    TEST_CASE("outage trials are excluded, not averaged as zeros") {
        std::vector<TrialOutcome> t{{100, 0.1, false}, {100, 0.0, true},  {1000, 0.01, false},
                                    {1000, 0.0, true}, {10000, 0.001, false}};
        CHECK(fit_scaling(t).slope == doctest::Approx(-1.0));
    }

    TEST_CASE("rejections") {
        std::vector<TrialOutcome> t{{100, 0.1, false}, {1000, 0.0, true}, {10000, 0.001, false}};
        CHECK_THROWS_WITH(fit_scaling(t), doctest::Contains("n = 1000"));
        std::vector<TrialOutcome> two{{100, 0.1, false}, {1000, 0.01, false}};
        CHECK_THROWS(fit_scaling(two));
        std::vector<double> x{1, 2}, y{1, 2};
        CHECK_THROWS(fit_power_law(x, y));
    }
}
