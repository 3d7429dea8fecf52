#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace d2d {

/// Raised for parameter combinations the model does not admit.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Scaling parameters of one network instance.
///
/// Library size m = a1 n^alpha, cache size M = a2 n^beta. delta is the
/// protocol-model guard factor, eta_margin the slack subtracted from the
/// largest outage-free traffic-cell exponent.
struct NetworkConfig {
    std::int64_t n = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double a1 = 1.0;
    double a2 = 1.0;
    double W = 1.0;
    double delta = 1.0;
    double eta_margin = 0.05;
    std::uint64_t seed = 0;

    /// Throws ConfigError on any invariant violation.
    void validate() const;
};

/// Parameters of the popularity-truncated (sub-library) scheme.
struct ImprovedParams {
    double gamma = 0.0;
    double eps_c = 0.0;
};

struct DerivedScales {
    std::int64_t n = 0;
    std::int64_t m = 0;         // library size
    std::int64_t M = 0;         // cache size, files per node
    double eta = 0.0;           // traffic-cell exponent
    double a_c = 1.0;           // traffic-cell area n^-eta
    double a_h = 0.0;           // hopping-cell area 2 ln n / n
    double r = 0.0;             // transmission radius sqrt(5 a_h)
    int reuse_side = 1;         // K, with J = K^2
    std::int64_t J = 1;         // TDMA reuse factor
    double W = 1.0;
    double R_agg = 1.0;         // per-cell aggregate rate W / J
    double delta = 1.0;
    std::optional<double> n2;
    std::optional<std::int64_t> sub_library_size;
};

/// K = 2 ceil((1 + delta) sqrt 5) + 1.
int reuse_side_for(double delta);

/// Pure function of its inputs. With `improved` set, the traffic-cell
/// exponent and the sub-library size follow the truncated scheme;
/// otherwise eta = 1 - (alpha - beta) - eta_margin, or 0 when
/// alpha - beta = 1.
DerivedScales derive_scales(const NetworkConfig& cfg,
                            std::optional<ImprovedParams> improved = std::nullopt);

/// Scales with an explicitly chosen traffic-cell exponent (eta in [0, 1)),
/// bypassing the derivation rule.
DerivedScales derive_scales_with_eta(const NetworkConfig& cfg, double eta);

/// Copy of `scales` with a different traffic-cell exponent (eta in [0, 1)).
DerivedScales with_eta(DerivedScales scales, double eta);

/// |x - y| within the tolerance used for regime boundaries.
bool nearly_equal(double x, double y);

}  // namespace d2d
