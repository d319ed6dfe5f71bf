#ifndef ZONOREACH_CONTROL_HPP_
#define ZONOREACH_CONTROL_HPP_

#include "zonoreach/brs.hpp"

#include <cstdint>
#include <ostream>
#include <vector>

namespace zonoreach
{

/**
 * @brief Feedback law extracted from a BRS under chain. For x in under[k+1]
 * the input u in U with A x + B u + K in diff_under[k] drives every successor
 * into under[k].
 */
class Controller
{
    public:
        Controller(const SystemModel& sys, const BrsSequence& seq);

        const SystemModel& system() const { return *sys_; }
        const BrsSequence& sequence() const { return *seq_; }

        /// Number of steps the stored chain supports.
        Eigen::Index horizon() const { return seq_->horizon(); }

    private:
        const SystemModel* sys_;
        const BrsSequence* seq_;
};

struct InputOptions
{
    /// Minimize ||theta||_inf instead of returning any feasible input.
    bool centralize = false;
    double feasibility_tol = 1e-7;
};

/**
 * @brief Input bringing x into diff_under[k] (hence into under[k] for every w).
 * Throws NotInBrs when no u in U exists, SolverError on backend failure.
 */
Vector one_step_input(const Vector& x, Eigen::Index k, const Controller& ctrl, const InputOptions& options = {});

enum class DisturbancePolicy
{
    kUniform,  ///< uniform over the W bounding box, rejected to W
    kVertex,   ///< uniform over W's vertices
    kZero
};

std::string to_string(DisturbancePolicy policy);
DisturbancePolicy parse_disturbance_policy(const std::string& name);

struct Trajectory
{
    std::vector<Vector> states;       ///< x_0 ... x_T
    std::vector<Vector> inputs;       ///< u_0 ... u_{T-1}
    std::vector<Vector> disturbances; ///< w_0 ... w_{T-1}
    bool success = false;             ///< x_T in Z_0

    Eigen::Index length() const { return static_cast<Eigen::Index>(inputs.size()); }

    /// Largest |x_{t+1} - (A x_t + B u_t + E w_t + K)| entry.
    double replay_error(const SystemModel& sys) const;

    /// Header t,x1..xn,u1..um,w1..wp,in_target; the last row has empty u and w.
    void write_csv(std::ostream& os, const Zonotope& target) const;
};

/// Draws one disturbance according to the policy.
Vector draw_disturbance(const DisturbanceSet& W, DisturbancePolicy policy, std::mt19937_64& rng);

/**
 * @brief Runs the controller from under[K] down to under[0], K = ctrl.horizon().
 * Throws NotInBrs if x0 is outside under[K]; a NotInBrs raised at a later step
 * would be a soundness bug and is rethrown with the step index.
 */
Trajectory simulate(const Controller& ctrl, const Vector& x0, DisturbancePolicy policy, std::uint64_t seed,
    const InputOptions& options = {});

} // namespace zonoreach

#endif
