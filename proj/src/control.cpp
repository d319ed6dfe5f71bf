#include "zonoreach/control.hpp"
#include "zonoreach/errors.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <string>

namespace zonoreach
{

Controller::Controller(const SystemModel& sys, const BrsSequence& seq) : sys_(&sys), seq_(&seq)
{
    if (!seq.under.empty() && seq.under.front().dim() != sys.state_dim())
        throw DimensionError("Controller: sequence dimension does not match the system");
}

Vector one_step_input(const Vector& x, Eigen::Index k, const Controller& ctrl, const InputOptions& options)
{
    const SystemModel& sys = ctrl.system();
    if (x.size() != sys.state_dim()) throw DimensionError("one_step_input: state has the wrong dimension");
    if (k < 0 || k >= ctrl.horizon())
        throw std::out_of_range("one_step_input: step " + std::to_string(k) + " outside the stored horizon");

    const Zonotope& D = ctrl.sequence().diff_under[static_cast<std::size_t>(k)];
    const Zonotope& U = sys.U();
    const Eigen::Index n = sys.state_dim();
    const Eigen::Index NU = U.num_generators();
    const Eigen::Index ND = D.num_generators();
    const Eigen::Index extra = options.centralize ? 1 : 0;

    // Columns: eta (NU), theta (ND), optional t.
    // B G_U eta - G_D theta = c_D - A x - B c_U - K.
    LinearProgram lp(NU + ND + extra);
    lp.lower.head(NU + ND).setConstant(-1.0);
    lp.upper.head(NU + ND).setConstant(1.0);
    const Matrix BG = sys.B() * U.generators();
    Matrix Aeq(n, NU + ND + extra);
    Aeq.setZero();
    Aeq.leftCols(NU) = BG;
    Aeq.middleCols(NU, ND) = -D.generators();
    lp.eq = Aeq.sparseView();
    lp.eq_rhs = D.center() - sys.A() * x - sys.B() * U.center() - sys.K();

    if (options.centralize)
    {
        const Eigen::Index t = NU + ND;
        lp.lower(t) = 0.0;
        lp.upper(t) = 1.0;
        lp.objective(t) = 1.0;
        std::vector<Triplet> rows;
        for (Eigen::Index i = 0; i < ND; ++i)
        {
            rows.emplace_back(static_cast<int>(2 * i), static_cast<int>(NU + i), 1.0);
            rows.emplace_back(static_cast<int>(2 * i), static_cast<int>(t), -1.0);
            rows.emplace_back(static_cast<int>(2 * i + 1), static_cast<int>(NU + i), -1.0);
            rows.emplace_back(static_cast<int>(2 * i + 1), static_cast<int>(t), -1.0);
        }
        lp.ineq.resize(2 * ND, lp.num_variables());
        lp.ineq.setFromTriplets(rows.begin(), rows.end());
        lp.ineq_rhs = Vector::Zero(2 * ND);
    }
    else
    {
        lp.ineq.resize(0, lp.num_variables());
        lp.ineq_rhs.resize(0);
    }

    SolverOptions so;
    so.feasibility_tol = options.feasibility_tol;
    const SolveOutcome sol = solve_lp(lp, so);
    if (sol.status == SolveStatus::kInfeasible)
        throw NotInBrs("one_step_input: state is not in the backward reachable set of step " + std::to_string(k + 1));
    if (!sol.optimal()) throw SolverError("one_step_input: solver returned " + to_string(sol.status));
    return U.center() + U.generators() * sol.primal.head(NU);
}

std::string to_string(DisturbancePolicy policy)
{
    switch (policy)
    {
        case DisturbancePolicy::kUniform: return "uniform";
        case DisturbancePolicy::kVertex: return "vertex";
        case DisturbancePolicy::kZero: return "zero";
    }
    return "unknown";
}

DisturbancePolicy parse_disturbance_policy(const std::string& name)
{
    if (name == "uniform") return DisturbancePolicy::kUniform;
    if (name == "vertex") return DisturbancePolicy::kVertex;
    if (name == "zero") return DisturbancePolicy::kZero;
    throw std::invalid_argument("unknown disturbance policy '" + name + "'");
}

Vector draw_disturbance(const DisturbanceSet& W, DisturbancePolicy policy, std::mt19937_64& rng)
{
    const Matrix& V = W.vrep.vertices;
    switch (policy)
    {
        case DisturbancePolicy::kZero:
        {
            // Zero when it lies in W, otherwise the vertex average.
            const Vector zero = Vector::Zero(W.dim());
            return W.hrep.contains(zero) ? zero : Vector(V.rowwise().mean());
        }
        case DisturbancePolicy::kVertex:
        {
            std::uniform_int_distribution<Eigen::Index> pick(0, V.cols() - 1);
            return V.col(pick(rng));
        }
        case DisturbancePolicy::kUniform:
        {
            const Vector lo = W.box ? W.box->lower : Vector(V.rowwise().minCoeff());
            const Vector hi = W.box ? W.box->upper : Vector(V.rowwise().maxCoeff());
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            for (int attempt = 0; attempt < 10000; ++attempt)
            {
                Vector w(W.dim());
                for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = lo(i) + (hi(i) - lo(i)) * unit(rng);
                if (W.box || W.hrep.contains(w)) return w;
            }
            // Thin polytopes: fall back to a random convex combination of vertices.
            Vector lambda(V.cols());
            std::exponential_distribution<double> expo(1.0);
            for (Eigen::Index j = 0; j < lambda.size(); ++j) lambda(j) = expo(rng);
            return V * (lambda / lambda.sum());
        }
    }
    return Vector::Zero(W.dim());
}

double Trajectory::replay_error(const SystemModel& sys) const
{
    double worst = 0.0;
    for (std::size_t t = 0; t < inputs.size(); ++t)
    {
        const Vector next = sys.step(states[t], inputs[t], disturbances[t]);
        worst = std::max(worst, (states[t + 1] - next).cwiseAbs().maxCoeff());
    }
    return worst;
}

void Trajectory::write_csv(std::ostream& os, const Zonotope& target) const
{
    if (states.empty()) return;
    const Eigen::Index n = states.front().size();
    const Eigen::Index m = inputs.empty() ? 0 : inputs.front().size();
    const Eigen::Index p = disturbances.empty() ? 0 : disturbances.front().size();
    os << "t";
    for (Eigen::Index i = 1; i <= n; ++i) os << ",x" << i;
    for (Eigen::Index i = 1; i <= m; ++i) os << ",u" << i;
    for (Eigen::Index i = 1; i <= p; ++i) os << ",w" << i;
    os << ",in_target\n";
    os << std::setprecision(17);
    for (std::size_t t = 0; t < states.size(); ++t)
    {
        os << t;
        for (Eigen::Index i = 0; i < n; ++i) os << ',' << states[t](i);
        const bool has_step = t < inputs.size();
        for (Eigen::Index i = 0; i < m; ++i)
        {
            os << ',';
            if (has_step) os << inputs[t](i);
        }
        for (Eigen::Index i = 0; i < p; ++i)
        {
            os << ',';
            if (has_step) os << disturbances[t](i);
        }
        os << ',' << (contains_point(target, states[t]) ? 1 : 0) << '\n';
    }
}

Trajectory simulate(const Controller& ctrl, const Vector& x0, DisturbancePolicy policy, std::uint64_t seed,
    const InputOptions& options)
{
    const SystemModel& sys = ctrl.system();
    const Eigen::Index K = ctrl.horizon();
    std::mt19937_64 rng(seed);
    Trajectory traj;
    traj.states.push_back(x0);
    for (Eigen::Index t = 0; t < K; ++t)
    {
        const Vector& x = traj.states.back();
        Vector u;
        try
        {
            u = one_step_input(x, K - t - 1, ctrl, options);
        }
        catch (const NotInBrs& e)
        {
            if (t == 0) throw;
            throw NotInBrs("simulate: soundness violation at step " + std::to_string(t)
                + " (state left the under-approximation): " + e.what());
        }
        const Vector w = draw_disturbance(sys.W(), policy, rng);
        traj.inputs.push_back(u);
        traj.disturbances.push_back(w);
        traj.states.push_back(sys.step(x, u, w));
    }
    traj.success = contains_point(ctrl.sequence().under.front(), traj.states.back());
    return traj;
}

} // namespace zonoreach
