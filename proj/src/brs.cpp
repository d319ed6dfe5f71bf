#include "zonoreach/brs.hpp"
#include "zonoreach/errors.hpp"
#include "zonoreach/reduction.hpp"

#include <Eigen/SVD>

#include <chrono>
#include <stdexcept>

namespace zonoreach
{

namespace
{

double elapsed_ms(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

SystemModel::SystemModel(Matrix A, Matrix B, Matrix E, Vector K, Zonotope U, DisturbanceSet W,
    std::optional<HPolytope> image_hrep)
    : A_(std::move(A)), B_(std::move(B)), E_(std::move(E)), K_(std::move(K)), U_(std::move(U)), W_(std::move(W)),
      image_hrep_(std::move(image_hrep))
{
    const Eigen::Index n = A_.rows();
    if (n == 0 || A_.cols() != n) throw DimensionError("SystemModel: A must be square and non-empty");
    if (B_.rows() != n) throw DimensionError("SystemModel: B must have n rows");
    if (E_.rows() != n) throw DimensionError("SystemModel: E must have n rows");
    if (K_.size() != n) throw DimensionError("SystemModel: K must have n entries");
    if (U_.dim() != B_.cols()) throw DimensionError("SystemModel: dim(U) must match the columns of B");
    if (W_.dim() != E_.cols()) throw DimensionError("SystemModel: dim(W) must match the columns of E");

    Eigen::JacobiSVD<Matrix> svd(A_);
    if (svd.singularValues()(n - 1) <= 1e-10)
        throw std::invalid_argument("SystemModel: A is singular (smallest singular value <= 1e-10); "
                                    "the backward recursion needs an invertible A");
    lu_.compute(A_);
    EW_ = image_of(E_, W_, image_hrep_);
}

Vector SystemModel::step(const Vector& x, const Vector& u, const Vector& w) const
{
    return A_ * x + B_ * u + E_ * w + K_;
}

std::string to_string(ReducePolicy policy)
{
    switch (policy)
    {
        case ReducePolicy::kNever: return "never";
        case ReducePolicy::kAlways: return "always";
        case ReducePolicy::kAtOrderThreshold: return "at_order_threshold";
    }
    return "unknown";
}

std::string to_string(UnderMethod method)
{
    return method == UnderMethod::kMinOut ? "min-out" : "sadraddini";
}

ReducePolicy parse_reduce_policy(const std::string& name)
{
    if (name == "never") return ReducePolicy::kNever;
    if (name == "always") return ReducePolicy::kAlways;
    if (name == "at_order_threshold") return ReducePolicy::kAtOrderThreshold;
    throw std::invalid_argument("unknown reduce policy '" + name + "'");
}

UnderMethod parse_under_method(const std::string& name)
{
    if (name == "min-out") return UnderMethod::kMinOut;
    if (name == "sadraddini") return UnderMethod::kSadraddini;
    throw std::invalid_argument("unknown method '" + name + "'");
}

Zonotope brs_pre_image(const Zonotope& D, const SystemModel& sys)
{
    if (D.dim() != sys.state_dim()) throw DimensionError("brs_pre_image: set dimension must match the state");
    // A^{-1}(D + (-B)U - K) = (A^{-1}[G_D, -B G_U], A^{-1}(c_D - B c_U - K)).
    const Zonotope& U = sys.U();
    Matrix G(D.dim(), D.num_generators() + U.num_generators());
    G << D.generators(), -(sys.B() * U.generators());
    const Vector c = D.center() - sys.B() * U.center() - sys.K();
    return Zonotope(sys.apply_inverse(G), sys.apply_inverse(c));
}

UnderStep brs_step_under(const Zonotope& Zk, const SystemModel& sys, const BrsOptions& opts)
{
    if (Zk.dim() != sys.state_dim()) throw DimensionError("brs_step_under: set dimension must match the state");
    Zonotope diff;
    if (opts.method == UnderMethod::kMinOut)
    {
        const Vector b = default_b_weights(Zk, sys.E());
        const ScaledTemplate outer = outer_approx_min_out(Zk, sys.EW().vrep, b, opts.solver.lp);
        diff = aligned_diff(Zk, outer.alpha, outer.center);
    }
    else
    {
        if (!sys.EW().zono) throw std::invalid_argument("brs_step_under: the containment baseline needs a box W");
        diff = under_approx_sadraddini(Zk, *sys.EW().zono, opts.solver.lp).zonotope();
    }
    return {brs_pre_image(diff, sys), diff};
}

Zonotope brs_step_over(const Zonotope& Zk, const SystemModel& sys, const BrsOptions& opts)
{
    if (Zk.dim() != sys.state_dim()) throw DimensionError("brs_step_over: set dimension must match the state");
    if (!sys.EW().hrep)
        throw std::invalid_argument("brs_step_over: EW has no H-rep (supply one when E is not invertible)");
    const ScaledTemplate inner = inner_approx_max_in(Zk, *sys.EW().hrep, default_d_weights(Zk), opts.solver);
    return brs_pre_image(aligned_diff(Zk, inner.alpha, inner.center), sys);
}

BrsSequence compute_brs(const SystemModel& sys, const Zonotope& Z0, Eigen::Index k, const BrsOptions& opts)
{
    if (k < 0) throw std::invalid_argument("compute_brs: horizon must be non-negative");
    if (Z0.dim() != sys.state_dim()) throw DimensionError("compute_brs: target dimension must match the state");
    if (opts.reduce != ReducePolicy::kNever && opts.max_order < 1.0)
        throw std::invalid_argument("compute_brs: max_order must be at least 1");

    BrsSequence seq;
    seq.under.push_back(Z0);
    seq.over.push_back(Z0);

    bool under_alive = true;
    for (Eigen::Index step = 1; step <= k; ++step)
    {
        BrsStepInfo info;
        info.k = step;

        if (under_alive)
        {
            const auto start = std::chrono::steady_clock::now();
            Zonotope& prev = seq.under.back();
            const bool over_threshold = opts.reduce == ReducePolicy::kAlways
                || (opts.reduce == ReducePolicy::kAtOrderThreshold && prev.order() > opts.threshold_order);
            if (over_threshold && prev.order() > opts.max_order)
            {
                // The stored set is replaced by its reduction so the controller data stays consistent.
                prev = reduce_to_order(prev, opts.max_order).first;
                info.reduced = true;
            }
            try
            {
                UnderStep res = brs_step_under(prev, sys, opts);
                seq.diff_under.push_back(std::move(res.diff));
                seq.under.push_back(std::move(res.next));
                info.under_order = seq.under.back().order();
            }
            catch (const EmptyUnderApprox& e)
            {
                under_alive = false;
                seq.empty_from = step;
                seq.empty_reason = e.what();
            }
            info.under_ms = elapsed_ms(start);
        }

        if (opts.compute_over)
        {
            const auto start = std::chrono::steady_clock::now();
            seq.over.push_back(brs_step_over(seq.over.back(), sys, opts));
            info.over_order = seq.over.back().order();
            info.over_ms = elapsed_ms(start);
        }

        seq.steps.push_back(info);
        if (!under_alive && !opts.compute_over) break;
    }
    return seq;
}

} // namespace zonoreach
