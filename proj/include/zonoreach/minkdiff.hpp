#ifndef ZONOREACH_MINKDIFF_HPP_
#define ZONOREACH_MINKDIFF_HPP_

#include "zonoreach/geometry.hpp"
#include "zonoreach/solver.hpp"

#include <optional>

namespace zonoreach
{

/// Size of an LP as built (before any backend presolve).
struct ProblemSize
{
    Eigen::Index variables = 0;            ///< decision variables of the formulation
    Eigen::Index auxiliary_variables = 0;  ///< epigraph columns for |.| terms, if any
    Eigen::Index equality_rows = 0;
    Eigen::Index inequality_rows = 0;

    Eigen::Index constraints() const { return equality_rows + inequality_rows; }
};

/// Closed-form sizes of the two template LPs.
Eigen::Index min_out_variable_count(Eigen::Index N, Eigen::Index M, Eigen::Index n);
Eigen::Index sadraddini_variable_count(Eigen::Index N, Eigen::Index N_W, Eigen::Index n);

/**
 * @brief A zonotope aligned with a template: ([alpha_1 g_1, ..., alpha_N g_N], center)
 * where g_i are the template's generators and alpha in [0, 1]^N.
 */
struct ScaledTemplate
{
    Zonotope templ;
    Vector alpha;
    Vector center;
    ProblemSize size;

    Zonotope zonotope() const { return scaled_generators(templ, alpha, center); }
};

/// Disturbance set W with both representations available.
struct DisturbanceSet
{
    VPolytope vrep;
    HPolytope hrep;
    std::optional<Box> box;

    static DisturbanceSet from_box(const Box& box);

    /// Checks dimensions and that the H-rep is bounded and nonempty.
    static DisturbanceSet from_polytope(HPolytope hrep, VPolytope vrep);

    Eigen::Index dim() const { return vrep.dim(); }

    /// G-rep, available only for boxes.
    std::optional<Zonotope> zonotope() const;
};

/// EW in the representations each template LP consumes.
struct ImageSet
{
    VPolytope vrep;                  ///< E w_j, duplicate columns removed
    std::optional<HPolytope> hrep;   ///< H-rep of EW itself
    std::optional<Zonotope> zono;    ///< E W for box W

    Eigen::Index dim() const { return vrep.dim(); }
};

/**
 * @brief Maps W through E. The H-rep of EW is H_W E^{-1} when E is square and
 * invertible; otherwise `image_hrep` must be supplied by the caller or the
 * result carries no H-rep.
 */
ImageSet image_of(const Matrix& E, const DisturbanceSet& W, const std::optional<HPolytope>& image_hrep = std::nullopt);

/**
 * @brief Outer approximation of EW by a zonotope aligned with Z:
 *
 *   min  sum_i b_i alpha_i
 *   s.t. c + sum_i theta_ij g_i = E w_j   for each vertex w_j
 *        |theta_ij| <= alpha_i <= 1
 *
 * Throws EmptyUnderApprox when no aligned sub-zonotope of Z covers EW.
 */
ScaledTemplate outer_approx_min_out(const Zonotope& Z, const VPolytope& image_vertices, const Vector& b,
    const SolverOptions& options = {});

/// Same LP with the vertices E w_j formed from W's V-rep.
ScaledTemplate outer_approx_min_out(const Zonotope& Z, const Matrix& E, const VPolytope& W_vertices, const Vector& b,
    const SolverOptions& options = {});

/**
 * @brief Inner approximation of EW by a zonotope aligned with Z:
 *
 *   max  sum_i d_i log(alpha_i)
 *   s.t. H c + |H G| alpha <= h,  0 <= alpha <= 1
 *
 * where (H, h) is the H-rep of EW. Generators that cannot be scaled up at all
 * (EW lower-dimensional or a point) come back with alpha_i = 0.
 */
ScaledTemplate inner_approx_max_in(const Zonotope& Z, const HPolytope& image_hrep, const Vector& d,
    const ConcaveLogOptions& options = {});

/// H c + |H G_alpha| 1 <= h + tol, row by row.
bool max_in_certificate(const ScaledTemplate& inner, const HPolytope& image_hrep, double tol = 1e-7);

/**
 * @brief Containment-encoding baseline: (G diag(alpha), c) \subseteq Z - EW via
 *
 *   max  sum_i alpha_i
 *   s.t. [G diag(alpha), E G_W] = G Gamma
 *        c_Z - (c + E c_W) = G gamma
 *        ||[Gamma, gamma]||_inf <= 1,  0 <= alpha <= 1
 *
 * The returned template *is* the under-approximation (not a subtrahend).
 * Throws EmptyUnderApprox when even alpha = 0 is infeasible.
 */
ScaledTemplate under_approx_sadraddini(const Zonotope& Z, const Matrix& E, const Zonotope& W,
    const SolverOptions& options = {});

/// Overload taking the already-mapped zonotope EW.
ScaledTemplate under_approx_sadraddini(const Zonotope& Z, const Zonotope& image, const SolverOptions& options = {});

/// Weights b_i = ||T g_i||_1 - ||T g_i||_inf with T the pseudo-inverse of E;
/// ||g_i||_2 when E is rank-deficient. Values below 1e-6 are lifted to 1e-6.
Vector default_b_weights(const Zonotope& Z, const Matrix& E);

/// d_i = ||g_i||_2.
Vector default_d_weights(const Zonotope& Z);

struct DiffResult
{
    Zonotope under;  ///< Z - outer(EW) \subseteq Z - EW
    Zonotope over;   ///< Z - inner(EW) \supseteq Z - EW
    ScaledTemplate outer_template;
    ScaledTemplate inner_template;
};

struct DiffWeights
{
    std::optional<Vector> b;
    std::optional<Vector> d;
};

/// Both bounds on Z - EW. Needs EW's V-rep and H-rep.
DiffResult sandwich_diff(const Zonotope& Z, const Matrix& E, const ImageSet& image, const DiffWeights& weights = {},
    const ConcaveLogOptions& options = {});

} // namespace zonoreach

#endif
