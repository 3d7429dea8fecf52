#include "d2d/scales.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace d2d {

bool nearly_equal(double x, double y) { return std::abs(x - y) <= 1e-12; }

void NetworkConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (n < 1) fail("n must be a positive integer");
    if (!(alpha > 0.0)) fail("alpha must be > 0");
    if (!(beta >= 0.0) || beta > alpha + 1e-12) fail("beta must lie in [0, alpha]");
    if (!(a1 > 0.0) || !(a2 > 0.0)) fail("a1 and a2 must be > 0");
    if (!(W > 0.0)) fail("W must be > 0");
    if (!(delta > 0.0)) fail("delta must be > 0");
    if (!(eta_margin > 0.0)) fail("eta_margin must be > 0");
    if (nearly_equal(alpha, beta) && a1 <= a2)
        fail("alpha = beta requires a1 > a2 (every node would hold the whole library)");
}

int reuse_side_for(double delta) {
    return 2 * static_cast<int>(std::ceil((1.0 + delta) * std::sqrt(5.0))) + 1;
}

namespace {

std::int64_t round_positive(double x) {
    return std::max<std::int64_t>(1, std::llround(x));
}

// Everything except the traffic-cell exponent (left at 0, a_c = 1).
DerivedScales base_scales(const NetworkConfig& cfg) {
    cfg.validate();
    DerivedScales s;
    const double n = static_cast<double>(cfg.n);
    s.n = cfg.n;
    s.m = round_positive(cfg.a1 * std::pow(n, cfg.alpha));
    s.M = std::min(round_positive(cfg.a2 * std::pow(n, cfg.beta)), s.m);
    s.a_h = 2.0 * std::log(n) / n;
    s.r = std::sqrt(5.0 * s.a_h);
    s.reuse_side = reuse_side_for(cfg.delta);
    s.J = static_cast<std::int64_t>(s.reuse_side) * s.reuse_side;
    s.W = cfg.W;
    s.R_agg = cfg.W / static_cast<double>(s.J);
    s.delta = cfg.delta;
    return s;
}

}  // namespace

DerivedScales derive_scales(const NetworkConfig& cfg, std::optional<ImprovedParams> improved) {
    DerivedScales s = base_scales(cfg);
    const double n = static_cast<double>(cfg.n);
    const double gap = cfg.alpha - cfg.beta;

    if (improved) {
        const double gamma = improved->gamma;
        const double eps_c = improved->eps_c;
        if (!(gamma > 1.0 + 1.0 / cfg.alpha)) {
            std::ostringstream msg;
            msg << "truncated scheme requires gamma > 1 + 1/alpha = " << 1.0 + 1.0 / cfg.alpha
                << " (got gamma = " << gamma << ")";
            throw ConfigError(msg.str());
        }
        if (!(eps_c > 0.0)) throw ConfigError("eps_c must be > 0");
        const double reach = std::min(1.0, cfg.beta + 1.0 - 1.0 / (gamma - 1.0));
        if (!(reach - eps_c > 0.0))
            throw ConfigError("eps_c too large: min(1, beta + 1 - 1/(gamma - 1)) - eps_c must be > 0");
        s.n2 = std::pow(n, 1.0 - reach + eps_c / 2.0);
        s.sub_library_size = std::min(s.M * round_positive(*s.n2), s.m);
        return with_eta(s, reach - eps_c);
    }
    if (nearly_equal(gap, 1.0)) return with_eta(s, 0.0);

    const double eta = 1.0 - gap - cfg.eta_margin;
    if (eta < 0.0) {
        std::ostringstream msg;
        msg << "no admissible traffic-cell exponent: 1 - (alpha - beta) - eta_margin = " << eta
            << " < 0";
        throw ConfigError(msg.str());
    }
    return with_eta(s, eta);
}

DerivedScales derive_scales_with_eta(const NetworkConfig& cfg, double eta) {
    return with_eta(base_scales(cfg), eta);
}

DerivedScales with_eta(DerivedScales scales, double eta) {
    if (!(eta >= 0.0 && eta < 1.0)) throw ConfigError("eta must lie in [0, 1)");
    scales.eta = eta;
    scales.a_c = std::pow(static_cast<double>(scales.n), -eta);
    return scales;
}

}  // namespace d2d
