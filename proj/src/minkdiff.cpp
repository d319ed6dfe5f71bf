#include "zonoreach/minkdiff.hpp"
#include "zonoreach/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace zonoreach
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinWeight = 1e-6;

void clamp_unit(Vector& alpha)
{
    for (Eigen::Index i = 0; i < alpha.size(); ++i) alpha(i) = std::clamp(alpha(i), 0.0, 1.0);
}

VPolytope unique_columns(const Matrix& pts)
{
    auto less = [](const Vector& a, const Vector& b) {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    };
    std::set<Vector, decltype(less)> seen(less);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < pts.cols(); ++j)
        if (seen.insert(pts.col(j)).second) keep.push_back(j);
    VPolytope out;
    out.vertices.resize(pts.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) out.vertices.col(static_cast<Eigen::Index>(k)) = pts.col(keep[k]);
    return out;
}

} // namespace

Eigen::Index min_out_variable_count(Eigen::Index N, Eigen::Index M, Eigen::Index n)
{
    return N * M + N + n;
}

Eigen::Index sadraddini_variable_count(Eigen::Index N, Eigen::Index N_W, Eigen::Index n)
{
    // Gamma (N x (N + N_W)), gamma (N), alpha (N), c (n).
    return N * (N + N_W) + 2 * N + n;
}

DisturbanceSet DisturbanceSet::from_box(const Box& b)
{
    DisturbanceSet W;
    W.vrep = b.to_vpolytope();
    W.hrep = b.to_hpolytope();
    W.box = b;
    return W;
}

DisturbanceSet DisturbanceSet::from_polytope(HPolytope hrep, VPolytope vrep)
{
    hrep.validate();
    vrep.validate();
    if (hrep.dim() != vrep.dim()) throw DimensionError("DisturbanceSet: H-rep and V-rep dimensions differ");
    if (!hrep.is_bounded_nonempty()) throw std::invalid_argument("DisturbanceSet: H-rep is empty or unbounded");
    DisturbanceSet W;
    W.hrep = std::move(hrep);
    W.vrep = std::move(vrep);
    return W;
}

std::optional<Zonotope> DisturbanceSet::zonotope() const
{
    if (box) return box->to_zonotope();
    return std::nullopt;
}

ImageSet image_of(const Matrix& E, const DisturbanceSet& W, const std::optional<HPolytope>& image_hrep)
{
    if (E.cols() != W.dim()) throw DimensionError("image_of: E columns must match dim(W)");
    ImageSet out;
    out.vrep = unique_columns(E * W.vrep.vertices);
    if (image_hrep)
    {
        if (image_hrep->dim() != E.rows()) throw DimensionError("image_of: image H-rep has wrong dimension");
        out.hrep = *image_hrep;
    }
    else if (E.rows() == E.cols())
    {
        Eigen::FullPivLU<Matrix> lu(E);
        if (lu.isInvertible())
        {
            HPolytope h;
            h.H = W.hrep.H * lu.inverse();
            h.h = W.hrep.h;
            out.hrep = std::move(h);
        }
    }
    if (auto z = W.zonotope()) out.zono = linear_map(E, *z);
    return out;
}

ScaledTemplate outer_approx_min_out(const Zonotope& Z, const VPolytope& image_vertices, const Vector& b,
    const SolverOptions& options)
{
    const Eigen::Index n = Z.dim();
    const Eigen::Index N = Z.num_generators();
    const Eigen::Index M = image_vertices.num_vertices();
    image_vertices.validate();
    if (image_vertices.dim() != n) throw DimensionError("outer_approx_min_out: vertex dimension must match template");
    if (b.size() != N) throw DimensionError("outer_approx_min_out: need one weight per generator");
    if ((b.array() <= 0.0).any()) throw std::invalid_argument("outer_approx_min_out: weights must be positive");

    // Columns: theta (i + N * j), alpha (N*M + i), c (N*M + N + r).
    const Eigen::Index off_alpha = N * M;
    const Eigen::Index off_c = off_alpha + N;
    LinearProgram lp(off_c + n);
    lp.sense = Sense::kMinimize;
    lp.objective.segment(off_alpha, N) = b;
    lp.lower.head(N * M).setConstant(-1.0);
    lp.upper.head(N * M).setConstant(1.0);
    lp.lower.segment(off_alpha, N).setZero();
    lp.upper.segment(off_alpha, N).setOnes();

    const Matrix& G = Z.generators();
    std::vector<Triplet> eq;
    eq.reserve(static_cast<std::size_t>(M * n * (N + 1)));
    lp.eq_rhs.resize(n * M);
    for (Eigen::Index j = 0; j < M; ++j)
    {
        for (Eigen::Index r = 0; r < n; ++r)
        {
            const auto row = static_cast<int>(j * n + r);
            for (Eigen::Index i = 0; i < N; ++i)
                if (G(r, i) != 0.0) eq.emplace_back(row, static_cast<int>(i + N * j), G(r, i));
            eq.emplace_back(row, static_cast<int>(off_c + r), 1.0);
            lp.eq_rhs(row) = image_vertices.vertices(r, j);
        }
    }
    lp.eq.resize(n * M, lp.num_variables());
    lp.eq.setFromTriplets(eq.begin(), eq.end());

    std::vector<Triplet> in;
    in.reserve(static_cast<std::size_t>(4 * N * M));
    for (Eigen::Index j = 0; j < M; ++j)
    {
        for (Eigen::Index i = 0; i < N; ++i)
        {
            const auto theta = static_cast<int>(i + N * j);
            const auto alpha = static_cast<int>(off_alpha + i);
            const auto row = static_cast<int>(2 * theta);
            in.emplace_back(row, theta, 1.0);
            in.emplace_back(row, alpha, -1.0);
            in.emplace_back(row + 1, theta, -1.0);
            in.emplace_back(row + 1, alpha, -1.0);
        }
    }
    lp.ineq.resize(2 * N * M, lp.num_variables());
    lp.ineq.setFromTriplets(in.begin(), in.end());
    lp.ineq_rhs = Vector::Zero(2 * N * M);

    ScaledTemplate out;
    out.templ = Z;
    out.size.variables = lp.num_variables();
    out.size.equality_rows = lp.eq.rows();
    out.size.inequality_rows = lp.ineq.rows();

    const SolveOutcome sol = solve_lp(lp, options);
    if (sol.status == SolveStatus::kInfeasible)
        throw EmptyUnderApprox("outer_approx_min_out: EW cannot be covered by a sub-zonotope aligned with the template");
    if (!sol.optimal()) throw SolverError("outer_approx_min_out: solver returned " + to_string(sol.status));

    out.alpha = sol.primal.segment(off_alpha, N);
    clamp_unit(out.alpha);
    out.center = sol.primal.segment(off_c, n);
    return out;
}

ScaledTemplate outer_approx_min_out(const Zonotope& Z, const Matrix& E, const VPolytope& W_vertices, const Vector& b,
    const SolverOptions& options)
{
    W_vertices.validate();
    if (E.cols() != W_vertices.dim() || E.rows() != Z.dim())
        throw DimensionError("outer_approx_min_out: E must map dim(W) to dim(Z)");
    return outer_approx_min_out(Z, unique_columns(E * W_vertices.vertices), b, options);
}

ScaledTemplate inner_approx_max_in(const Zonotope& Z, const HPolytope& image_hrep, const Vector& d,
    const ConcaveLogOptions& options)
{
    image_hrep.validate();
    const Eigen::Index n = Z.dim();
    const Eigen::Index N = Z.num_generators();
    if (image_hrep.dim() != n) throw DimensionError("inner_approx_max_in: H-rep dimension must match template");
    if (d.size() != N) throw DimensionError("inner_approx_max_in: need one weight per generator");

    // Columns: alpha (i), c (N + r).
    const Eigen::Index L = image_hrep.num_rows();
    const Matrix HG = (image_hrep.H * Z.generators()).cwiseAbs();
    ConcaveLogProgram prog;
    prog.constraints = LinearProgram(N + n);
    LinearProgram& lp = prog.constraints;
    lp.lower.head(N).setZero();
    lp.upper.head(N).setOnes();
    std::vector<Triplet> rows;
    for (Eigen::Index l = 0; l < L; ++l)
    {
        for (Eigen::Index i = 0; i < N; ++i)
            if (HG(l, i) != 0.0) rows.emplace_back(static_cast<int>(l), static_cast<int>(i), HG(l, i));
        for (Eigen::Index r = 0; r < n; ++r)
            if (image_hrep.H(l, r) != 0.0)
                rows.emplace_back(static_cast<int>(l), static_cast<int>(N + r), image_hrep.H(l, r));
    }
    lp.ineq.resize(L, N + n);
    lp.ineq.setFromTriplets(rows.begin(), rows.end());
    lp.ineq_rhs = image_hrep.h;
    for (Eigen::Index i = 0; i < N; ++i) prog.log_vars.push_back(i);
    prog.weights = d;

    ScaledTemplate out;
    out.templ = Z;
    out.size.variables = N + n;
    out.size.inequality_rows = L;

    const SolveOutcome sol = solve_concave_log(prog, options);
    if (sol.status == SolveStatus::kInfeasible) throw std::invalid_argument("inner_approx_max_in: EW is empty");
    if (!sol.optimal()) throw SolverError("inner_approx_max_in: solver returned " + to_string(sol.status));
    out.alpha = sol.primal.head(N);
    clamp_unit(out.alpha);
    out.center = sol.primal.segment(N, n);
    return out;
}

bool max_in_certificate(const ScaledTemplate& inner, const HPolytope& image_hrep, double tol)
{
    const Matrix Galpha = inner.templ.generators() * inner.alpha.asDiagonal();
    const Vector lhs = image_hrep.H * inner.center + (image_hrep.H * Galpha).cwiseAbs().rowwise().sum();
    for (Eigen::Index l = 0; l < lhs.size(); ++l)
        if (lhs(l) > image_hrep.h(l) + tol * (1.0 + std::abs(image_hrep.h(l)))) return false;
    return true;
}

ScaledTemplate under_approx_sadraddini(const Zonotope& Z, const Zonotope& image, const SolverOptions& options)
{
    const Eigen::Index n = Z.dim();
    const Eigen::Index N = Z.num_generators();
    const Eigen::Index NW = image.num_generators();
    if (image.dim() != n) throw DimensionError("under_approx_sadraddini: EW dimension must match template");
    const Eigen::Index cols = N + NW;  // columns of [G diag(alpha), E G_W]

    // Decision columns: Gamma (r * cols + k), gamma, alpha, c. Auxiliary: |Gamma|, |gamma|.
    const Eigen::Index off_gamma = N * cols;
    const Eigen::Index off_alpha = off_gamma + N;
    const Eigen::Index off_c = off_alpha + N;
    const Eigen::Index off_absG = off_c + n;
    const Eigen::Index off_absg = off_absG + N * cols;
    const Eigen::Index total = off_absg + N;

    LinearProgram lp(total);
    lp.sense = Sense::kMaximize;
    lp.objective.segment(off_alpha, N).setOnes();
    lp.lower.head(off_alpha).setConstant(-1.0);
    lp.upper.head(off_alpha).setConstant(1.0);
    lp.lower.segment(off_alpha, N).setZero();
    lp.upper.segment(off_alpha, N).setOnes();
    lp.lower.tail(N * cols + N).setZero();
    lp.upper.tail(N * cols + N).setOnes();

    const Matrix& G = Z.generators();
    const Matrix& GW = image.generators();
    std::vector<Triplet> eq;
    lp.eq_rhs = Vector::Zero(n * cols + n);
    // G Gamma[:, k] - [G diag(alpha), E G_W][:, k] = 0.
    for (Eigen::Index k = 0; k < cols; ++k)
    {
        for (Eigen::Index r = 0; r < n; ++r)
        {
            const auto row = static_cast<int>(k * n + r);
            for (Eigen::Index i = 0; i < N; ++i)
                if (G(r, i) != 0.0) eq.emplace_back(row, static_cast<int>(i * cols + k), G(r, i));
            if (k < N)
            {
                if (G(r, k) != 0.0) eq.emplace_back(row, static_cast<int>(off_alpha + k), -G(r, k));
            }
            else
            {
                lp.eq_rhs(row) = GW(r, k - N);
            }
        }
    }
    // G gamma + c = c_Z - E c_W.
    for (Eigen::Index r = 0; r < n; ++r)
    {
        const auto row = static_cast<int>(n * cols + r);
        for (Eigen::Index i = 0; i < N; ++i)
            if (G(r, i) != 0.0) eq.emplace_back(row, static_cast<int>(off_gamma + i), G(r, i));
        eq.emplace_back(row, static_cast<int>(off_c + r), 1.0);
        lp.eq_rhs(row) = Z.center()(r) - image.center()(r);
    }
    lp.eq.resize(n * cols + n, total);
    lp.eq.setFromTriplets(eq.begin(), eq.end());

    // |x| <= t pairs, then row sums of [|Gamma|, |gamma|] <= 1.
    std::vector<Triplet> in;
    int row = 0;
    auto abs_pair = [&](Eigen::Index x, Eigen::Index t) {
        in.emplace_back(row, static_cast<int>(x), 1.0);
        in.emplace_back(row, static_cast<int>(t), -1.0);
        ++row;
        in.emplace_back(row, static_cast<int>(x), -1.0);
        in.emplace_back(row, static_cast<int>(t), -1.0);
        ++row;
    };
    for (Eigen::Index e = 0; e < N * cols; ++e) abs_pair(e, off_absG + e);
    for (Eigen::Index i = 0; i < N; ++i) abs_pair(off_gamma + i, off_absg + i);
    const int abs_rows = row;
    for (Eigen::Index r = 0; r < N; ++r)
    {
        for (Eigen::Index k = 0; k < cols; ++k) in.emplace_back(row, static_cast<int>(off_absG + r * cols + k), 1.0);
        in.emplace_back(row, static_cast<int>(off_absg + r), 1.0);
        ++row;
    }
    lp.ineq.resize(row, total);
    lp.ineq.setFromTriplets(in.begin(), in.end());
    lp.ineq_rhs = Vector::Zero(row);
    lp.ineq_rhs.tail(row - abs_rows).setOnes();

    ScaledTemplate out;
    out.templ = Z;
    out.size.variables = off_absG;
    out.size.auxiliary_variables = total - off_absG;
    out.size.equality_rows = lp.eq.rows();
    out.size.inequality_rows = lp.ineq.rows();

    const SolveOutcome sol = solve_lp(lp, options);
    if (sol.status == SolveStatus::kInfeasible)
        throw EmptyUnderApprox("under_approx_sadraddini: EW does not fit in Z for any placement");
    if (!sol.optimal()) throw SolverError("under_approx_sadraddini: solver returned " + to_string(sol.status));
    out.alpha = sol.primal.segment(off_alpha, N);
    clamp_unit(out.alpha);
    out.center = sol.primal.segment(off_c, n);
    return out;
}

ScaledTemplate under_approx_sadraddini(const Zonotope& Z, const Matrix& E, const Zonotope& W, const SolverOptions& options)
{
    if (E.cols() != W.dim() || E.rows() != Z.dim())
        throw DimensionError("under_approx_sadraddini: E must map dim(W) to dim(Z)");
    return under_approx_sadraddini(Z, linear_map(E, W), options);
}

Vector default_b_weights(const Zonotope& Z, const Matrix& E)
{
    const Eigen::Index N = Z.num_generators();
    if (E.rows() != Z.dim()) throw DimensionError("default_b_weights: E rows must match dim(Z)");
    Vector b(N);
    Eigen::JacobiSVD<Matrix> svd(E, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const bool full_rank = E.size() > 0 && svd.rank() == std::min(E.rows(), E.cols());
    if (full_rank)
    {
        // Left inverse (E'E)^{-1}E' for tall E, right inverse E'(EE')^{-1} for wide E.
        const Matrix T = E.rows() >= E.cols() ? Matrix((E.transpose() * E).ldlt().solve(E.transpose()))
                                              : Matrix(E.transpose() * (E * E.transpose()).ldlt().solve(
                                                    Matrix::Identity(E.rows(), E.rows())));
        for (Eigen::Index i = 0; i < N; ++i)
        {
            const Vector t = T * Z.generator(i);
            b(i) = t.lpNorm<1>() - t.lpNorm<Eigen::Infinity>();
        }
    }
    else
    {
        for (Eigen::Index i = 0; i < N; ++i) b(i) = Z.generator(i).norm();
    }
    for (Eigen::Index i = 0; i < N; ++i) b(i) = std::max(b(i), kMinWeight);
    return b;
}

Vector default_d_weights(const Zonotope& Z)
{
    return Z.generators().colwise().norm().transpose();
}

DiffResult sandwich_diff(const Zonotope& Z, const Matrix& E, const ImageSet& image, const DiffWeights& weights,
    const ConcaveLogOptions& options)
{
    if (!image.hrep) throw std::invalid_argument("sandwich_diff: EW needs an H-rep (supply one for non-invertible E)");
    const Vector b = weights.b ? *weights.b : default_b_weights(Z, E);
    const Vector d = weights.d ? *weights.d : default_d_weights(Z);

    ScaledTemplate outer = outer_approx_min_out(Z, image.vrep, b, options.lp);
    ScaledTemplate inner = inner_approx_max_in(Z, *image.hrep, d, options);
    DiffResult res{aligned_diff(Z, outer.alpha, outer.center), aligned_diff(Z, inner.alpha, inner.center),
        std::move(outer), std::move(inner)};
    return res;
}

} // namespace zonoreach
