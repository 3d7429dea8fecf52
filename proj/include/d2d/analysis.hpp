#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

namespace d2d {

enum class Regime { I, II, III, IV, V };

const char* to_string(Regime r);

/// I: alpha-beta > 1; II: = 1, a1 > a2; III: = 1, a1 <= a2;
/// IV: in (0, 1); V: = 0, a1 > a2. Rejects alpha = beta with a1 <= a2.
Regime classify_regime(double alpha, double beta, double a1, double a2);

/// Order of T_n in n with the epsilon slack dropped.
struct ScalingLaw {
    enum class Kind { zero, power, inverse_log };
    Kind kind = Kind::zero;
    double exponent = 0.0;  // meaningful for power

    static ScalingLaw zero() { return {Kind::zero, 0.0}; }
    static ScalingLaw power(double e) { return {Kind::power, e}; }
    static ScalingLaw inverse_log() { return {Kind::inverse_log, 0.0}; }

    /// "0", "1/log(n)" or the exponent.
    std::string label() const;
};

struct BoundSet {
    Regime regime = Regime::I;
    ScalingLaw multihop_achievable;
    ScalingLaw multihop_converse;
    ScalingLaw singlehop_achievable;
    ScalingLaw singlehop_converse;
    /// Present when gamma > 1 + 1/alpha and the regime admits throughput.
    std::optional<ScalingLaw> improved;
};

BoundSet theoretical_bounds(double alpha, double beta, double a1, double a2,
                            std::optional<double> gamma = std::nullopt);

/// CSV: regime,multihop_ach,multihop_conv,singlehop_ach,singlehop_conv,improved
void write_bounds_csv(std::ostream& out, const BoundSet& b);

/// exp(-(l p - k)^2 / (2 p l)), an upper bound on P(Bin(l, p) <= k).
/// Requires 0 <= k <= l p.
double chernoff_upper(std::int64_t l, double p, double k);

struct PopularityFamily {
    enum class Kind { zipf, uniform };
    Kind kind = Kind::uniform;
    double gamma = 0.0;
};

/// Head mass sum_{i <= c1 n^alpha} p(i) of the family instantiated on
/// m = a1 n^alpha files. Requires 0 < c1 < a1.
double heavy_tail_mass(PopularityFamily family, double alpha, double a1, double c1, std::int64_t n);

/// 1 - n ((m - M) / m)^((1 - delta) n a_c), clamped to [0, 1]: a lower bound
/// on the probability that every node finds a source in its traffic cell.
double analytic_outage_bound(std::int64_t n, std::int64_t m, std::int64_t M, double a_c,
                             double delta);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares of log y on log x. Needs at least 3 points with
/// positive coordinates.
ScalingFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct TrialOutcome {
    std::int64_t n = 0;
    double T_n = 0.0;
    bool outage = false;
};

/// Fit of ln(mean T_n) against ln n, where each mean is over the
/// outage-free trials at that n. Throws if some n has none, or fewer than
/// three distinct n are present.
ScalingFit fit_scaling(std::span<const TrialOutcome> trials);

}  // namespace d2d
