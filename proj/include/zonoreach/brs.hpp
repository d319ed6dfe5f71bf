#ifndef ZONOREACH_BRS_HPP_
#define ZONOREACH_BRS_HPP_

#include "zonoreach/geometry.hpp"
#include "zonoreach/minkdiff.hpp"

#include <Eigen/LU>

#include <optional>
#include <string>
#include <vector>

namespace zonoreach
{

/**
 * @brief x_{t+1} = A x_t + B u_t + E w_t + K with u in U (G-rep) and w in W.
 *
 * A must be invertible; its LU factorization is computed once here.
 */
class SystemModel
{
    public:
        SystemModel(Matrix A, Matrix B, Matrix E, Vector K, Zonotope U, DisturbanceSet W,
            std::optional<HPolytope> image_hrep = std::nullopt);

        const Matrix& A() const { return A_; }
        const Matrix& B() const { return B_; }
        const Matrix& E() const { return E_; }
        const Vector& K() const { return K_; }
        const Zonotope& U() const { return U_; }
        const DisturbanceSet& W() const { return W_; }
        const std::optional<HPolytope>& image_hrep() const { return image_hrep_; }

        /// EW in every representation the template LPs use.
        const ImageSet& EW() const { return EW_; }

        Eigen::Index state_dim() const { return A_.rows(); }
        Eigen::Index input_dim() const { return B_.cols(); }
        Eigen::Index disturbance_dim() const { return E_.cols(); }

        Vector apply_inverse(const Vector& x) const { return lu_.solve(x); }
        Matrix apply_inverse(const Matrix& X) const { return lu_.solve(X); }

        /// A x + B u + E w + K.
        Vector step(const Vector& x, const Vector& u, const Vector& w) const;

    private:
        Matrix A_, B_, E_;
        Vector K_;
        Zonotope U_;
        DisturbanceSet W_;
        std::optional<HPolytope> image_hrep_;
        ImageSet EW_;
        Eigen::PartialPivLU<Matrix> lu_;
};

enum class ReducePolicy
{
    kNever,
    kAlways,            ///< reduce to max_order before every step
    kAtOrderThreshold   ///< reduce to max_order once the order exceeds threshold_order
};

enum class UnderMethod
{
    kMinOut,
    kSadraddini
};

std::string to_string(ReducePolicy policy);
std::string to_string(UnderMethod method);
ReducePolicy parse_reduce_policy(const std::string& name);
UnderMethod parse_under_method(const std::string& name);

struct BrsOptions
{
    ReducePolicy reduce = ReducePolicy::kNever;
    double max_order = 6.0;
    double threshold_order = 6.0;
    UnderMethod method = UnderMethod::kMinOut;
    bool compute_over = true;
    ConcaveLogOptions solver;
};

struct BrsStepInfo
{
    Eigen::Index k = 0;         ///< index of the produced set
    double under_ms = 0.0;      ///< wall time for Z_under[k] (including reduction)
    double over_ms = 0.0;
    double under_order = 0.0;
    double over_order = 0.0;
    bool reduced = false;       ///< Z_under[k-1] was order-reduced before this step
};

/**
 * @brief Under and over chains. under[k] is the set the controller uses at
 * step k (already order-reduced when reduction fired); diff_under[k] is
 * under[k] - outer(EW), i.e. the landing set for states in under[k+1].
 */
struct BrsSequence
{
    std::vector<Zonotope> under;
    std::vector<Zonotope> over;
    std::vector<Zonotope> diff_under;
    std::vector<BrsStepInfo> steps;

    /// Set when the under chain stopped early; chain is empty from this index on.
    std::optional<Eigen::Index> empty_from;
    std::string empty_reason;

    Eigen::Index horizon() const { return static_cast<Eigen::Index>(diff_under.size()); }
};

struct UnderStep
{
    Zonotope next;
    Zonotope diff;
};

/// Z_{k+1} = A^{-1}((Zk - outer(Zk, EW)) + (-B U) - K). Throws EmptyUnderApprox.
UnderStep brs_step_under(const Zonotope& Zk, const SystemModel& sys, const BrsOptions& opts = {});

/// Z_{k+1} = A^{-1}((Zk - inner(Zk, EW)) + (-B U) - K).
Zonotope brs_step_over(const Zonotope& Zk, const SystemModel& sys, const BrsOptions& opts = {});

/// A^{-1}(D + (-B U) - K) for a difference set D.
Zonotope brs_pre_image(const Zonotope& D, const SystemModel& sys);

/// Runs both recursions for k steps (under chain truncated at the first empty set).
BrsSequence compute_brs(const SystemModel& sys, const Zonotope& Z0, Eigen::Index k, const BrsOptions& opts = {});

} // namespace zonoreach

#endif
