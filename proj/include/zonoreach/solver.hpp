#ifndef ZONOREACH_SOLVER_HPP_
#define ZONOREACH_SOLVER_HPP_

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace zonoreach
{

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

enum class Sense
{
    kMinimize,
    kMaximize
};

enum class SolveStatus
{
    kOptimal,
    kInfeasible,
    kUnbounded,
    kNumericalFailure
};

std::string to_string(SolveStatus status);

/**
 * @brief Linear program in the form
 *
 *   min/max  objective' x
 *   s.t.     eq * x   = eq_rhs
 *            ineq * x <= ineq_rhs
 *            lower <= x <= upper
 *
 * Infinite bounds are expressed with +/-std::numeric_limits<double>::infinity().
 * Either constraint block may have zero rows; it must still have
 * `num_variables()` columns.
 */
struct LinearProgram
{
    Vector objective;
    Sense sense = Sense::kMinimize;
    SparseMatrix eq;
    Vector eq_rhs;
    SparseMatrix ineq;
    Vector ineq_rhs;
    Vector lower;
    Vector upper;

    LinearProgram() = default;

    /// Empty program over `num_vars` free variables with zero objective.
    explicit LinearProgram(Eigen::Index num_vars);

    Eigen::Index num_variables() const { return objective.size(); }
    Eigen::Index num_constraints() const { return eq.rows() + ineq.rows(); }

    /// Throws DimensionError / std::invalid_argument when the blocks disagree.
    void validate() const;

    /// Largest violation of any row or bound at `x` (0 when feasible).
    double max_violation(const Vector& x) const;
};

struct SolveOutcome
{
    SolveStatus status = SolveStatus::kNumericalFailure;
    Vector primal;  ///< non-empty iff status == kOptimal
    double objective = 0.0;

    /// Indices into the designated log block whose value was forced to zero
    /// (only filled by solve_concave_log).
    std::vector<Eigen::Index> forced_zero;

    bool optimal() const { return status == SolveStatus::kOptimal; }
};

struct SolverOptions
{
    double feasibility_tol = 1e-7;
    double time_limit_s = 600.0;
};

/**
 * @brief Solves a linear program. Infeasible and unbounded statuses are
 * propagated from the backend; an "optimal" answer is re-checked against the
 * original rows and downgraded to kNumericalFailure if it violates them by
 * more than the feasibility tolerance.
 */
SolveOutcome solve_lp(const LinearProgram& lp, const SolverOptions& options = {});

/**
 * @brief max sum_i weights_i * log(x[log_vars_i]) over the constraint set of
 * `constraints` (its objective and sense are ignored).
 *
 * Variables with zero weight only keep their bounds. Designated variables are
 * expected to be bounded above; unbounded ones are capped so the outer model
 * stays bounded.
 */
struct ConcaveLogProgram
{
    LinearProgram constraints;
    std::vector<Eigen::Index> log_vars;
    Vector weights;

    void validate() const;
};

struct ConcaveLogOptions
{
    SolverOptions lp;
    double gap_tol = 1e-11;        ///< stop when upper - lower bound <= gap_tol, weights scaled to unit sum
    int max_iterations = 200;
    double zero_threshold = 1e-9;  ///< values below this are reported as 0
    double floor = 1e-12;          ///< smallest value kept inside the log
};

/**
 * @brief Separable outer-approximation scheme: each log term is replaced by
 * its tangent cuts, every round solves one LP and adds cuts at the new point.
 * The model objective is an upper bound and the true objective at the LP
 * point a lower bound, so the stopping gap certifies optimality.
 *
 * If some designated variable can only be zero on the feasible set it is
 * listed in `forced_zero`, dropped from the objective, and the remaining
 * problem is solved; status stays kOptimal.
 */
SolveOutcome solve_concave_log(const ConcaveLogProgram& program, const ConcaveLogOptions& options = {});

} // namespace zonoreach

#endif
