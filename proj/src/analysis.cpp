#include "d2d/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "d2d/csv.hpp"
#include "d2d/popularity.hpp"
#include "d2d/scales.hpp"

namespace d2d {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::I: return "I";
        case Regime::II: return "II";
        case Regime::III: return "III";
        case Regime::IV: return "IV";
        case Regime::V: return "V";
    }
    return "?";
}

Regime classify_regime(double alpha, double beta, double a1, double a2) {
    if (!(alpha > 0.0) || !(a1 > 0.0) || !(a2 > 0.0) || !(beta >= 0.0) || beta > alpha + 1e-12)
        throw ConfigError("classify_regime: invalid parameters");
    const double gap = alpha - beta;
    if (nearly_equal(gap, 0.0)) {
        if (a1 <= a2) throw ConfigError("alpha = beta requires a1 > a2");
        return Regime::V;
    }
    if (nearly_equal(gap, 1.0)) return a1 > a2 ? Regime::II : Regime::III;
    return gap > 1.0 ? Regime::I : Regime::IV;
}

std::string ScalingLaw::label() const {
    switch (kind) {
        case Kind::zero: return "0";
        case Kind::inverse_log: return "1/log(n)";
        case Kind::power: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.10g", exponent);
            return buf;
        }
    }
    return "?";
}

BoundSet theoretical_bounds(double alpha, double beta, double a1, double a2,
                            std::optional<double> gamma) {
    BoundSet b;
    b.regime = classify_regime(alpha, beta, a1, a2);
    const double gap = alpha - beta;
    switch (b.regime) {
        case Regime::I:
        case Regime::II:
            b.multihop_achievable = b.multihop_converse = ScalingLaw::zero();
            b.singlehop_achievable = b.singlehop_converse = ScalingLaw::zero();
            return b;
        case Regime::III:
            b.multihop_achievable = b.multihop_converse = ScalingLaw::power(-0.5);
            b.singlehop_achievable = b.singlehop_converse = ScalingLaw::power(-1.0);
            break;
        case Regime::IV:
            b.multihop_achievable = b.multihop_converse = ScalingLaw::power(-gap / 2.0);
            b.singlehop_achievable = b.singlehop_converse = ScalingLaw::power(-gap);
            break;
        case Regime::V:
            b.multihop_achievable = b.singlehop_achievable = ScalingLaw::power(0.0);
            b.multihop_converse = b.singlehop_converse = ScalingLaw::inverse_log();
            break;
    }
    if (gamma && *gamma > 1.0 + 1.0 / alpha) {
        const double reach = std::min(1.0, beta + 1.0 - 1.0 / (*gamma - 1.0));
        b.improved = ScalingLaw::power(-(1.0 - reach) / 2.0);
    }
    return b;
}

void write_bounds_csv(std::ostream& out, const BoundSet& b) {
    out << "regime,multihop_ach,multihop_conv,singlehop_ach,singlehop_conv,improved\n";
    out << to_string(b.regime) << ',' << b.multihop_achievable.label() << ','
        << b.multihop_converse.label() << ',' << b.singlehop_achievable.label() << ','
        << b.singlehop_converse.label() << ',' << (b.improved ? b.improved->label() : "") << '\n';
}

double chernoff_upper(std::int64_t l, double p, double k) {
    if (l < 1) throw std::invalid_argument("chernoff_upper: l must be >= 1");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("chernoff_upper: p must be in (0, 1]");
    const double mean = static_cast<double>(l) * p;
    if (!(k >= 0.0) || k > mean * (1.0 + 1e-12))
        throw std::invalid_argument("chernoff_upper: k must lie in [0, l p]");
    const double gap = std::max(0.0, mean - k);
    return std::exp(-(gap * gap) / (2.0 * p * static_cast<double>(l)));
}

double heavy_tail_mass(PopularityFamily family, double alpha, double a1, double c1, std::int64_t n) {
    if (!(c1 > 0.0 && c1 < a1)) throw std::invalid_argument("heavy_tail_mass: need 0 < c1 < a1");
    if (n < 1) throw std::invalid_argument("heavy_tail_mass: n must be >= 1");
    const double scale = std::pow(static_cast<double>(n), alpha);
    const auto m = std::max<std::int64_t>(1, std::llround(a1 * scale));
    const auto head = std::min<std::int64_t>(m, static_cast<std::int64_t>(std::floor(c1 * scale)));
    if (family.kind == PopularityFamily::Kind::uniform)
        return static_cast<double>(head) / static_cast<double>(m);
    return Popularity::zipf(m, family.gamma).head_mass(head);
}

double analytic_outage_bound(std::int64_t n, std::int64_t m, std::int64_t M, double a_c,
                             double delta) {
    if (M < 1 || m < M) throw std::invalid_argument("analytic_outage_bound: need m >= M >= 1");
    if (!(a_c > 0.0 && a_c <= 1.0)) throw std::invalid_argument("analytic_outage_bound: a_c in (0, 1]");
    const double miss = static_cast<double>(m - M) / static_cast<double>(m);
    const double nodes = (1.0 - delta) * static_cast<double>(n) * a_c;
    const double bound = 1.0 - static_cast<double>(n) * std::pow(miss, nodes);
    return std::clamp(bound, 0.0, 1.0);
}

ScalingFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
    if (x.size() < 3) throw std::invalid_argument("fit_power_law: need at least 3 points");
    const std::size_t k = x.size();
    std::vector<double> lx(k), ly(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("fit_power_law: coordinates must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_power_law: x values must differ");

    ScalingFit fit;
    fit.points = k;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
        sse += e * e;
    }
    fit.slope_stderr = std::sqrt(sse / static_cast<double>(k - 2) / sxx);
    fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return fit;
}

ScalingFit fit_scaling(std::span<const TrialOutcome> trials) {
    struct Acc {
        double sum = 0.0;
        std::size_t ok = 0;
    };
    std::map<std::int64_t, Acc> by_n;
    for (const auto& t : trials) {
        Acc& a = by_n[t.n];
        if (!t.outage) {
            a.sum += t.T_n;
            ++a.ok;
        }
    }
    std::vector<double> xs, ys;
    for (const auto& [n, acc] : by_n) {
        if (acc.ok == 0) {
            std::ostringstream msg;
            msg << "fit_scaling: no outage-free trial at n = " << n;
            throw std::invalid_argument(msg.str());
        }
        xs.push_back(static_cast<double>(n));
        ys.push_back(acc.sum / static_cast<double>(acc.ok));
    }
    if (xs.size() < 3) throw std::invalid_argument("fit_scaling: need at least 3 values of n");
    return fit_power_law(xs, ys);
}

}  // namespace d2d
