#include "zonoreach/solver.hpp"
#include "zonoreach/errors.hpp"

#include "Highs.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace zonoreach
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

double to_highs(double v, double highs_inf)
{
    if (v == kInf) return highs_inf;
    if (v == -kInf) return -highs_inf;
    return v;
}

// Stacks eq and ineq blocks into HiGHS' row-bounded, column-wise form.
HighsLp build_highs_lp(const LinearProgram& lp, double highs_inf)
{
    const auto n = static_cast<HighsInt>(lp.num_variables());
    const auto m_eq = static_cast<HighsInt>(lp.eq.rows());
    const auto m_in = static_cast<HighsInt>(lp.ineq.rows());

    HighsLp out;
    out.num_col_ = n;
    out.num_row_ = m_eq + m_in;
    out.sense_ = lp.sense == Sense::kMinimize ? ObjSense::kMinimize : ObjSense::kMaximize;
    out.col_cost_.assign(lp.objective.data(), lp.objective.data() + n);
    out.col_lower_.resize(n);
    out.col_upper_.resize(n);
    for (HighsInt j = 0; j < n; ++j)
    {
        out.col_lower_[j] = to_highs(lp.lower(j), highs_inf);
        out.col_upper_[j] = to_highs(lp.upper(j), highs_inf);
    }
    out.row_lower_.resize(out.num_row_);
    out.row_upper_.resize(out.num_row_);
    for (HighsInt r = 0; r < m_eq; ++r)
    {
        out.row_lower_[r] = lp.eq_rhs(r);
        out.row_upper_[r] = lp.eq_rhs(r);
    }
    for (HighsInt r = 0; r < m_in; ++r)
    {
        out.row_lower_[m_eq + r] = -highs_inf;
        out.row_upper_[m_eq + r] = to_highs(lp.ineq_rhs(r), highs_inf);
    }

    // Column-wise assembly of [eq; ineq].
    std::vector<HighsInt> counts(n + 1, 0);
    for (int k = 0; k < lp.eq.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(lp.eq, k); it; ++it) ++counts[it.col() + 1];
    for (int k = 0; k < lp.ineq.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(lp.ineq, k); it; ++it) ++counts[it.col() + 1];
    for (HighsInt j = 0; j < n; ++j) counts[j + 1] += counts[j];

    auto& a = out.a_matrix_;
    a.format_ = MatrixFormat::kColwise;
    a.num_col_ = n;
    a.num_row_ = out.num_row_;
    a.start_ = counts;
    a.index_.resize(counts[n]);
    a.value_.resize(counts[n]);
    std::vector<HighsInt> fill(counts.begin(), counts.end() - 1);
    for (int k = 0; k < lp.eq.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(lp.eq, k); it; ++it)
        {
            const HighsInt pos = fill[it.col()]++;
            a.index_[pos] = static_cast<HighsInt>(it.row());
            a.value_[pos] = it.value();
        }
    for (int k = 0; k < lp.ineq.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(lp.ineq, k); it; ++it)
        {
            const HighsInt pos = fill[it.col()]++;
            a.index_[pos] = static_cast<HighsInt>(m_eq + it.row());
            a.value_[pos] = it.value();
        }
    return out;
}

void configure(Highs& highs, const SolverOptions& options)
{
    highs.setOptionValue("output_flag", false);
    highs.setOptionValue("threads", 1);
    highs.setOptionValue("random_seed", 0);
    highs.setOptionValue("time_limit", options.time_limit_s);
    // Leave headroom so the independent residual check passes at feasibility_tol.
    highs.setOptionValue("primal_feasibility_tolerance", std::min(1e-9, options.feasibility_tol * 1e-2));
    highs.setOptionValue("dual_feasibility_tolerance", 1e-9);
}

SolveStatus map_status(HighsModelStatus status)
{
    switch (status)
    {
        case HighsModelStatus::kOptimal: return SolveStatus::kOptimal;
        case HighsModelStatus::kInfeasible: return SolveStatus::kInfeasible;
        case HighsModelStatus::kUnbounded: return SolveStatus::kUnbounded;
        default: return SolveStatus::kNumericalFailure;
    }
}

// Scaled residual check: a row is satisfied when its violation is at most
// tol * (1 + |rhs|).
bool certify(const LinearProgram& lp, const Vector& x, double tol)
{
    if (x.size() != lp.num_variables() || !x.allFinite()) return false;
    for (Eigen::Index j = 0; j < x.size(); ++j)
    {
        if (x(j) < lp.lower(j) - tol * (1.0 + std::abs(lp.lower(j)))) return false;
        if (x(j) > lp.upper(j) + tol * (1.0 + std::abs(lp.upper(j)))) return false;
    }
    if (lp.eq.rows() > 0)
    {
        const Vector r = lp.eq * x - lp.eq_rhs;
        for (Eigen::Index i = 0; i < r.size(); ++i)
            if (std::abs(r(i)) > tol * (1.0 + std::abs(lp.eq_rhs(i)))) return false;
    }
    if (lp.ineq.rows() > 0)
    {
        const Vector r = lp.ineq * x - lp.ineq_rhs;
        for (Eigen::Index i = 0; i < r.size(); ++i)
            if (r(i) > tol * (1.0 + std::abs(lp.ineq_rhs(i)))) return false;
    }
    return true;
}

SolveOutcome read_outcome(Highs& highs, const LinearProgram& lp, const SolverOptions& options)
{
    SolveOutcome outcome;
    HighsModelStatus model_status = highs.getModelStatus();
    if (model_status == HighsModelStatus::kUnboundedOrInfeasible)
    {
        // Presolve cannot tell the two apart; settle it without presolve.
        highs.setOptionValue("presolve", "off");
        highs.run();
        model_status = highs.getModelStatus();
        highs.setOptionValue("presolve", "choose");
    }
    outcome.status = map_status(model_status);
    if (outcome.status != SolveStatus::kOptimal) return outcome;

    const auto& col = highs.getSolution().col_value;
    Vector x = Eigen::Map<const Vector>(col.data(), static_cast<Eigen::Index>(col.size()));
    if (!certify(lp, x, options.feasibility_tol))
    {
        outcome.status = SolveStatus::kNumericalFailure;
        return outcome;
    }
    outcome.primal = std::move(x);
    outcome.objective = lp.objective.dot(outcome.primal);
    return outcome;
}

} // namespace

std::string to_string(SolveStatus status)
{
    switch (status)
    {
        case SolveStatus::kOptimal: return "optimal";
        case SolveStatus::kInfeasible: return "infeasible";
        case SolveStatus::kUnbounded: return "unbounded";
        case SolveStatus::kNumericalFailure: return "numerical-failure";
    }
    return "unknown";
}

LinearProgram::LinearProgram(Eigen::Index num_vars)
    : objective(Vector::Zero(num_vars)),
      eq(0, num_vars),
      eq_rhs(0),
      ineq(0, num_vars),
      ineq_rhs(0),
      lower(Vector::Constant(num_vars, -kInf)),
      upper(Vector::Constant(num_vars, kInf))
{
}

void LinearProgram::validate() const
{
    const auto n = num_variables();
    std::ostringstream err;
    if (eq.cols() != n || ineq.cols() != n)
        err << "constraint blocks must have " << n << " columns";
    else if (eq.rows() != eq_rhs.size())
        err << "equality block has " << eq.rows() << " rows but rhs has " << eq_rhs.size();
    else if (ineq.rows() != ineq_rhs.size())
        err << "inequality block has " << ineq.rows() << " rows but rhs has " << ineq_rhs.size();
    else if (lower.size() != n || upper.size() != n)
        err << "bounds must have length " << n;
    if (!err.str().empty()) throw DimensionError("LinearProgram: " + err.str());

    for (Eigen::Index j = 0; j < n; ++j)
    {
        if (std::isnan(lower(j)) || std::isnan(upper(j)) || lower(j) > upper(j))
            throw std::invalid_argument("LinearProgram: invalid bounds on variable " + std::to_string(j));
    }
    if (!objective.allFinite() || !eq_rhs.allFinite())
        throw std::invalid_argument("LinearProgram: non-finite objective or equality rhs");
}

double LinearProgram::max_violation(const Vector& x) const
{
    double worst = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j)
        worst = std::max({worst, lower(j) - x(j), x(j) - upper(j)});
    if (eq.rows() > 0) worst = std::max(worst, (eq * x - eq_rhs).cwiseAbs().maxCoeff());
    if (ineq.rows() > 0) worst = std::max(worst, (ineq * x - ineq_rhs).maxCoeff());
    return worst;
}

SolveOutcome solve_lp(const LinearProgram& lp, const SolverOptions& options)
{
    lp.validate();
    Highs highs;
    configure(highs, options);
    const HighsLp model = build_highs_lp(lp, highs.getInfinity());
    if (highs.passModel(model) == HighsStatus::kError) throw SolverError("solve_lp: backend rejected the model");
    if (highs.run() == HighsStatus::kError) return SolveOutcome{};
    return read_outcome(highs, lp, options);
}

void ConcaveLogProgram::validate() const
{
    constraints.validate();
    if (weights.size() != static_cast<Eigen::Index>(log_vars.size()))
        throw DimensionError("ConcaveLogProgram: weights and log_vars differ in length");
    for (Eigen::Index i = 0; i < weights.size(); ++i)
    {
        if (!std::isfinite(weights(i)) || weights(i) < 0.0)
            throw std::invalid_argument("ConcaveLogProgram: weights must be finite and nonnegative");
        const auto v = log_vars[static_cast<std::size_t>(i)];
        if (v < 0 || v >= constraints.num_variables())
            throw DimensionError("ConcaveLogProgram: log variable index out of range");
    }
}

SolveOutcome solve_concave_log(const ConcaveLogProgram& program, const ConcaveLogOptions& options)
{
    program.validate();
    const LinearProgram& base = program.constraints;
    const Eigen::Index n = base.num_variables();

    // Largest value variable `v` can take on the feasible set.
    auto max_value = [&](Eigen::Index v) {
        LinearProgram probe = base;
        probe.objective.setZero();
        probe.objective(v) = 1.0;
        probe.sense = Sense::kMaximize;
        const SolveOutcome out = solve_lp(probe, options.lp);
        if (out.status == SolveStatus::kUnbounded) return kInf;
        if (out.status == SolveStatus::kInfeasible) return -kInf;
        if (!out.optimal()) throw SolverError("solve_concave_log: support probe failed");
        return out.primal(v);
    };

    // Designated variables with positive weight; one epigraph column per term.
    // cap is an upper bound on the variable (probed when no bound is given).
    std::vector<Eigen::Index> active;
    std::vector<double> cap;
    for (std::size_t i = 0; i < program.log_vars.size(); ++i)
    {
        if (program.weights(static_cast<Eigen::Index>(i)) <= 0.0) continue;
        active.push_back(static_cast<Eigen::Index>(i));
        double ub = base.upper(program.log_vars[i]);
        if (!std::isfinite(ub)) ub = max_value(program.log_vars[i]);
        if (!std::isfinite(ub))
        {
            SolveOutcome early;
            early.status = ub > 0.0 ? SolveStatus::kUnbounded : SolveStatus::kInfeasible;
            return early;
        }
        cap.push_back(ub > 0.0 ? ub : 1.0);
    }
    const auto n_active = static_cast<Eigen::Index>(active.size());

    // Gaps are measured against weights normalized to unit sum; the argmax is unchanged.
    double weight_sum = 0.0;
    for (Eigen::Index k : active) weight_sum += program.weights(k);
    const double wscale = weight_sum > 0.0 ? 1.0 / weight_sum : 1.0;

    Highs highs;
    configure(highs, options.lp);
    // Cut violations near the optimum are of the order of the gap itself.
    highs.setOptionValue("primal_feasibility_tolerance", 1e-10);

    // Base model with objective zeroed, plus epigraph columns s_k (objective w_k).
    LinearProgram model_lp(n + n_active);
    model_lp.sense = Sense::kMaximize;
    model_lp.lower.head(n) = base.lower;
    model_lp.upper.head(n) = base.upper;
    {
        auto widen = [&](const SparseMatrix& block) {
            std::vector<Triplet> trips;
            for (int k = 0; k < block.outerSize(); ++k)
                for (SparseMatrix::InnerIterator it(block, k); it; ++it)
                    trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
            SparseMatrix out(block.rows(), n + n_active);
            out.setFromTriplets(trips.begin(), trips.end());
            return out;
        };
        model_lp.eq = widen(base.eq);
        model_lp.eq_rhs = base.eq_rhs;
        model_lp.ineq = widen(base.ineq);
        model_lp.ineq_rhs = base.ineq_rhs;
    }
    for (Eigen::Index k = 0; k < n_active; ++k)
    {
        model_lp.objective(n + k) = wscale * program.weights(active[static_cast<std::size_t>(k)]);
        model_lp.upper(n + k) = std::log(cap[static_cast<std::size_t>(k)]);
    }
    const HighsLp model = build_highs_lp(model_lp, highs.getInfinity());
    if (highs.passModel(model) == HighsStatus::kError)
        throw SolverError("solve_concave_log: backend rejected the model");

    // Tangent of log at `a`: s - x / a <= log(a) - 1.
    auto add_cut = [&](Eigen::Index k, double a) {
        const HighsInt idx[2] = {static_cast<HighsInt>(program.log_vars[static_cast<std::size_t>(active[k])]),
                                 static_cast<HighsInt>(n + k)};
        const double val[2] = {-1.0 / a, 1.0};
        highs.addRow(-highs.getInfinity(), std::log(a) - 1.0, 2, idx, val);
    };

    // No cut goes below kCutFloor * cap, which keeps the cut slopes bounded.
    // Under that point the model follows the last tangent, and the lower
    // bound uses the same extension, so both bounds describe one function.
    constexpr double kCutFloor = 1e-7;
    auto floor_of = [&](Eigen::Index k) { return kCutFloor * cap[static_cast<std::size_t>(k)]; };
    auto extended_log = [&](Eigen::Index k, double x) {
        const double a = floor_of(k);
        return x >= a ? std::log(x) : std::log(a) - 1.0 + x / a;
    };
    for (Eigen::Index k = 0; k < n_active; ++k)
    {
        const double u = cap[static_cast<std::size_t>(k)];
        for (double frac : {1.0, 0.5, 0.25, 0.1, 0.03, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, kCutFloor})
            add_cut(k, frac * u);
    }

    std::vector<bool> dropped(static_cast<std::size_t>(n_active), false);
    std::vector<Eigen::Index> forced_zero;

    // The cut LPs cannot close the gap below their own feasibility tolerance.
    const double accept_gap = std::max(1e3 * options.gap_tol, 1e-5);
    const double term_tol = 1e-3 * options.gap_tol / static_cast<double>(std::max<Eigen::Index>(1, n_active));
    constexpr int kStallLimit = 8;

    SolveOutcome outcome;
    Vector best;
    double best_gap = kInf;
    int stall = 0;
    for (int iter = 0; iter < options.max_iterations; ++iter)
    {
        const bool ran = highs.run() != HighsStatus::kError;
        SolveOutcome step = ran ? read_outcome(highs, model_lp, options.lp) : SolveOutcome{};
        if (step.status != SolveStatus::kOptimal)
        {
            // Cuts only restrict epigraph columns, so this reflects the base program.
            if (step.status == SolveStatus::kInfeasible || step.status == SolveStatus::kUnbounded)
            {
                outcome.status = step.status;
                return outcome;
            }
            if (best.size() > 0 && best_gap <= accept_gap) break;
            outcome.status = SolveStatus::kNumericalFailure;
            return outcome;
        }
        const Vector& y = step.primal;

        double upper_bound = 0.0;
        double lower_bound = 0.0;
        bool added = false;
        std::vector<std::pair<Eigen::Index, double>> pending;
        for (Eigen::Index k = 0; k < n_active; ++k)
        {
            if (dropped[static_cast<std::size_t>(k)]) continue;
            const Eigen::Index v = program.log_vars[static_cast<std::size_t>(active[k])];
            const double w = wscale * program.weights(active[k]);
            const double xv = y(v);
            if (xv <= options.zero_threshold)
            {
                if (max_value(v) <= options.zero_threshold)
                {
                    dropped[static_cast<std::size_t>(k)] = true;
                    forced_zero.push_back(active[k]);
                    highs.changeColCost(static_cast<HighsInt>(n + k), 0.0);
                    added = true;
                    continue;
                }
            }
            const double lx = extended_log(k, std::max(xv, 0.0));
            upper_bound += w * y(n + k);
            lower_bound += w * lx;
            if (y(n + k) - lx > term_tol) pending.emplace_back(k, std::max(xv, floor_of(k)));
        }
        const double gap = upper_bound - lower_bound;
        if (gap < best_gap || best.size() == 0)
        {
            stall = gap < 0.99 * best_gap ? 0 : stall + 1;
            best_gap = gap;
            best = y.head(n);
        }
        else
        {
            ++stall;
        }
        if (!added && gap <= options.gap_tol) break;
        if (!added && pending.empty()) break;
        if (!added && stall >= kStallLimit && best_gap <= accept_gap) break;
        for (const auto& [k, a] : pending) add_cut(k, a);
    }

    if (best.size() == 0 || best_gap > accept_gap)
    {
        outcome.status = SolveStatus::kNumericalFailure;
        return outcome;
    }

    for (std::size_t i = 0; i < program.log_vars.size(); ++i)
    {
        const Eigen::Index v = program.log_vars[i];
        if (best(v) < options.zero_threshold) best(v) = 0.0;
    }
    outcome.status = SolveStatus::kOptimal;
    outcome.objective = 0.0;
    for (std::size_t i = 0; i < program.log_vars.size(); ++i)
    {
        const double w = program.weights(static_cast<Eigen::Index>(i));
        const double xv = best(program.log_vars[i]);
        if (w > 0.0 && xv > 0.0) outcome.objective += w * std::log(xv);
    }
    std::sort(forced_zero.begin(), forced_zero.end());
    outcome.forced_zero = std::move(forced_zero);
    outcome.primal = std::move(best);
    return outcome;
}

} // namespace zonoreach
