#ifndef ZONOREACH_CONFIG_HPP_
#define ZONOREACH_CONFIG_HPP_

#include <cstddef>

namespace zonoreach
{

/// Numerical tolerances shared by every module.
struct Tolerances
{
    double feasibility = 1e-7;  ///< LP constraint residuals, containment certificates
    double equality = 1e-9;     ///< exact-arithmetic identities (support additivity, replay)
    double structural = 1e-12;  ///< zero-norm generators, rank decisions
};

struct Config
{
    Tolerances tol;

    /// Containment falsifier samples this many directions per ambient dimension.
    std::size_t directions_per_dim = 64;

    /// Upper bound on C(N, n) for exact volume enumeration.
    std::size_t volume_subset_cap = 200000;
};

/// Process-wide defaults. Functions that take tolerances explicitly never read this.
inline const Config& default_config()
{
    static const Config config{};
    return config;
}

} // namespace zonoreach

#endif
