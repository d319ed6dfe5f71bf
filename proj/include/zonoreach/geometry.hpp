#ifndef ZONOREACH_GEOMETRY_HPP_
#define ZONOREACH_GEOMETRY_HPP_

#include "zonoreach/config.hpp"
#include "zonoreach/solver.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace zonoreach
{

/**
 * @brief Zonotope in generator representation (G-rep):
 * Z = { c + G * theta | theta in [-1, 1]^N }.
 *
 * Generators with Euclidean norm below 1e-12 are dropped on construction. A
 * zonotope with N = 0 generators is the singleton {c}.
 */
class Zonotope
{
    public:
        Zonotope() = default;
        Zonotope(Matrix generators, Vector center);

        static Zonotope point(const Vector& center);

        Eigen::Index dim() const { return center_.size(); }
        Eigen::Index num_generators() const { return generators_.cols(); }

        /// N / n; 0 for the 0-dimensional zonotope.
        double order() const;

        const Matrix& generators() const { return generators_; }
        const Vector& center() const { return center_; }
        auto generator(Eigen::Index i) const { return generators_.col(i); }

        /// Axis-aligned bounding box as (lower, upper).
        std::pair<Vector, Vector> bounding_box() const;

    private:
        Matrix generators_;
        Vector center_;
};

/// { x | H x <= h }.
struct HPolytope
{
    Matrix H;
    Vector h;

    Eigen::Index dim() const { return H.cols(); }
    Eigen::Index num_rows() const { return H.rows(); }

    void validate() const;
    bool contains(const Vector& x, double tol = 1e-9) const;

    /// Nonempty and bounded, decided by 2n LPs over the coordinate directions.
    bool is_bounded_nonempty() const;
};

/// Convex hull of `vertices` (columns).
struct VPolytope
{
    Matrix vertices;  ///< n x M

    Eigen::Index dim() const { return vertices.rows(); }
    Eigen::Index num_vertices() const { return vertices.cols(); }

    void validate() const;
};

struct Box
{
    Vector lower;
    Vector upper;

    Box() = default;
    Box(Vector lower, Vector upper);

    /// Symmetric box [-radius, radius] shifted to `center`.
    static Box centered(const Vector& center, const Vector& radius);

    Eigen::Index dim() const { return lower.size(); }
    Vector center() const { return 0.5 * (lower + upper); }
    Vector radius() const { return 0.5 * (upper - lower); }

    Zonotope to_zonotope() const;
    HPolytope to_hpolytope() const;
    VPolytope to_vpolytope() const;
};

/// h_Z(d) = d'c + sum_i |d'g_i|.
double support(const Zonotope& Z, const Vector& dir);

/// A Z = (A G, A c).
Zonotope linear_map(const Matrix& A, const Zonotope& Z);

/// Z1 + Z2 = ([G1, G2], c1 + c2).
Zonotope minkowski_sum(const Zonotope& Z1, const Zonotope& Z2);

/// Z + {v}.
Zonotope translate(const Zonotope& Z, const Vector& v);

/**
 * @brief Minkowski difference Z - ([alpha_i g_i], c_prime) of an aligned
 * subtrahend: ([(1 - alpha_i) g_i], c - c_prime).
 *
 * alpha entries within `tol` outside [0, 1] are clamped; larger excursions throw.
 */
Zonotope aligned_diff(const Zonotope& Z, const Vector& alpha, const Vector& c_prime, double tol = 1e-9);

/// ([alpha_i g_i], center) aligned with Z.
Zonotope scaled_generators(const Zonotope& Z, const Vector& alpha, const Vector& center);

/**
 * @brief Point membership via the LP c + G theta = x, |theta| <= 1.
 * Throws SolverError if the backend fails; never reports that as `false`.
 */
bool contains_point(const Zonotope& Z, const Vector& x, double feasibility_tol = 1e-7);

/// Unit directions drawn from a seeded normalized Gaussian.
std::vector<Vector> sample_directions(Eigen::Index dim, std::size_t count, std::uint64_t seed);

struct DominanceResult
{
    bool holds = true;
    std::optional<Vector> witness;  ///< direction d with h_inner(d) > h_outer(d) + tol
    double worst_gap = 0.0;         ///< max_d h_inner(d) - h_outer(d) over the tested set

    explicit operator bool() const { return holds; }
};

/**
 * @brief Necessary condition for inner \subseteq outer:
 * h_inner(d) <= h_outer(d) + tol for the 2n coordinate directions and
 * `n_dirs` sampled unit directions. A failure carries a true separating
 * direction.
 */
DominanceResult support_dominates(const Zonotope& inner, const Zonotope& outer, std::size_t n_dirs, std::uint64_t seed,
    double tol = 1e-7);

/// Number of n-subsets of the generators, saturating at SIZE_MAX.
std::size_t volume_subset_count(const Zonotope& Z);

/**
 * @brief Exact volume 2^n * sum_{|S| = n} |det G_S|.
 * Returns 0 when N < n. Throws VolumeTooLarge when C(N, n) exceeds `cap`.
 */
double volume_exact(const Zonotope& Z, std::size_t cap = 200000);

/// Uniform sample from Z's parameter cube mapped through G (not uniform on Z).
Vector sample_in_zonotope(const Zonotope& Z, std::mt19937_64& rng);

/// c + G theta for a uniformly random sign vector theta in {-1, 1}^N.
Vector sample_zonotope_corner(const Zonotope& Z, std::mt19937_64& rng);

} // namespace zonoreach

#endif
