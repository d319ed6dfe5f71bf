#include "zonoreach/geometry.hpp"
#include "zonoreach/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace zonoreach
{

namespace
{

constexpr double kZeroGenerator = 1e-12;

void require_dim(Eigen::Index expected, Eigen::Index got, const char* what)
{
    if (expected != got)
    {
        std::ostringstream oss;
        oss << what << ": expected dimension " << expected << ", got " << got;
        throw DimensionError(oss.str());
    }
}

} // namespace

Zonotope::Zonotope(Matrix generators, Vector center) : center_(std::move(center))
{
    if (generators.cols() > 0 && generators.rows() != center_.size())
        throw DimensionError("Zonotope: generator rows must match center length");
    if (!center_.allFinite() || !generators.allFinite())
        throw std::invalid_argument("Zonotope: non-finite entries");

    std::vector<Eigen::Index> keep;
    keep.reserve(static_cast<std::size_t>(generators.cols()));
    for (Eigen::Index i = 0; i < generators.cols(); ++i)
        if (generators.col(i).norm() >= kZeroGenerator) keep.push_back(i);

    if (static_cast<Eigen::Index>(keep.size()) == generators.cols())
    {
        generators_ = std::move(generators);
        generators_.resize(center_.size(), generators_.cols());
    }
    else
    {
        generators_.resize(center_.size(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k)
            generators_.col(static_cast<Eigen::Index>(k)) = generators.col(keep[k]);
    }
}

Zonotope Zonotope::point(const Vector& center)
{
    return Zonotope(Matrix(center.size(), 0), center);
}

double Zonotope::order() const
{
    return dim() == 0 ? 0.0 : static_cast<double>(num_generators()) / static_cast<double>(dim());
}

std::pair<Vector, Vector> Zonotope::bounding_box() const
{
    const Vector radius = generators_.cwiseAbs().rowwise().sum();
    return {center_ - radius, center_ + radius};
}

void HPolytope::validate() const
{
    if (H.rows() != h.size()) throw DimensionError("HPolytope: H rows must match h length");
    if (!H.allFinite() || !h.allFinite()) throw std::invalid_argument("HPolytope: non-finite entries");
}

bool HPolytope::contains(const Vector& x, double tol) const
{
    require_dim(dim(), x.size(), "HPolytope::contains");
    return H.rows() == 0 || ((H * x - h).array() <= tol).all();
}

bool HPolytope::is_bounded_nonempty() const
{
    validate();
    const Eigen::Index n = dim();
    if (n == 0) return false;
    LinearProgram lp(n);
    std::vector<Triplet> trips;
    for (Eigen::Index r = 0; r < H.rows(); ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            if (H(r, c) != 0.0) trips.emplace_back(static_cast<int>(r), static_cast<int>(c), H(r, c));
    lp.ineq.resize(H.rows(), n);
    lp.ineq.setFromTriplets(trips.begin(), trips.end());
    lp.ineq_rhs = h;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        for (const Sense sense : {Sense::kMinimize, Sense::kMaximize})
        {
            lp.objective.setZero();
            lp.objective(i) = 1.0;
            lp.sense = sense;
            const SolveOutcome out = solve_lp(lp);
            if (out.status == SolveStatus::kNumericalFailure)
                throw SolverError("HPolytope::is_bounded_nonempty: solver failure");
            if (!out.optimal()) return false;
        }
    }
    return true;
}

void VPolytope::validate() const
{
    if (vertices.cols() < 1) throw std::invalid_argument("VPolytope: at least one vertex required");
    if (!vertices.allFinite()) throw std::invalid_argument("VPolytope: non-finite entries");
}

Box::Box(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi))
{
    require_dim(lower.size(), upper.size(), "Box");
    if (!lower.allFinite() || !upper.allFinite()) throw std::invalid_argument("Box: non-finite bounds");
    if ((lower.array() > upper.array()).any()) throw std::invalid_argument("Box: lower bound exceeds upper bound");
}

Box Box::centered(const Vector& center, const Vector& radius)
{
    return Box(center - radius, center + radius);
}

Zonotope Box::to_zonotope() const
{
    return Zonotope(Matrix(radius().asDiagonal()), center());
}

HPolytope Box::to_hpolytope() const
{
    const Eigen::Index n = dim();
    HPolytope out;
    out.H.resize(2 * n, n);
    out.H << Matrix::Identity(n, n), -Matrix::Identity(n, n);
    out.h.resize(2 * n);
    out.h << upper, -lower;
    return out;
}

VPolytope Box::to_vpolytope() const
{
    const Eigen::Index n = dim();
    if (n >= 30) throw std::invalid_argument("Box::to_vpolytope: too many vertices");
    const Eigen::Index m = Eigen::Index{1} << n;
    VPolytope out;
    out.vertices.resize(n, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            out.vertices(i, j) = ((j >> i) & 1) ? upper(i) : lower(i);
    return out;
}

double support(const Zonotope& Z, const Vector& dir)
{
    require_dim(Z.dim(), dir.size(), "support");
    double value = dir.dot(Z.center());
    if (Z.num_generators() > 0) value += (dir.transpose() * Z.generators()).cwiseAbs().sum();
    return value;
}

Zonotope linear_map(const Matrix& A, const Zonotope& Z)
{
    require_dim(Z.dim(), A.cols(), "linear_map");
    return Zonotope(A * Z.generators(), A * Z.center());
}

Zonotope minkowski_sum(const Zonotope& Z1, const Zonotope& Z2)
{
    require_dim(Z1.dim(), Z2.dim(), "minkowski_sum");
    Matrix G(Z1.dim(), Z1.num_generators() + Z2.num_generators());
    G << Z1.generators(), Z2.generators();
    return Zonotope(std::move(G), Z1.center() + Z2.center());
}

Zonotope translate(const Zonotope& Z, const Vector& v)
{
    require_dim(Z.dim(), v.size(), "translate");
    return Zonotope(Z.generators(), Z.center() + v);
}

Zonotope aligned_diff(const Zonotope& Z, const Vector& alpha, const Vector& c_prime, double tol)
{
    require_dim(Z.num_generators(), alpha.size(), "aligned_diff (alpha)");
    require_dim(Z.dim(), c_prime.size(), "aligned_diff (center)");
    Vector keep(alpha.size());
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
    {
        if (!(alpha(i) >= -tol && alpha(i) <= 1.0 + tol))
            throw std::invalid_argument("aligned_diff: alpha[" + std::to_string(i) + "] outside [0, 1]");
        keep(i) = 1.0 - std::clamp(alpha(i), 0.0, 1.0);
    }
    return Zonotope(Z.generators() * keep.asDiagonal(), Z.center() - c_prime);
}

Zonotope scaled_generators(const Zonotope& Z, const Vector& alpha, const Vector& center)
{
    require_dim(Z.num_generators(), alpha.size(), "scaled_generators (alpha)");
    require_dim(Z.dim(), center.size(), "scaled_generators (center)");
    return Zonotope(Z.generators() * alpha.asDiagonal(), center);
}

bool contains_point(const Zonotope& Z, const Vector& x, double feasibility_tol)
{
    require_dim(Z.dim(), x.size(), "contains_point");
    const Eigen::Index N = Z.num_generators();
    const Vector rhs = x - Z.center();
    if (N == 0)
        return rhs.cwiseAbs().maxCoeff() <= feasibility_tol * (1.0 + x.cwiseAbs().maxCoeff());

    LinearProgram lp(N);
    lp.lower.setConstant(-1.0);
    lp.upper.setConstant(1.0);
    lp.eq = SparseMatrix(Z.generators().sparseView());
    lp.eq_rhs = rhs;
    SolverOptions opts;
    opts.feasibility_tol = feasibility_tol;
    const SolveOutcome out = solve_lp(lp, opts);
    if (out.status == SolveStatus::kOptimal) return true;
    if (out.status == SolveStatus::kInfeasible) return false;
    throw SolverError("contains_point: solver returned " + to_string(out.status));
}

std::vector<Vector> sample_directions(Eigen::Index dim, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Vector> dirs;
    dirs.reserve(count);
    while (dirs.size() < count)
    {
        Vector d(dim);
        for (Eigen::Index i = 0; i < dim; ++i) d(i) = normal(rng);
        const double norm = d.norm();
        if (norm < 1e-12) continue;
        dirs.push_back(d / norm);
    }
    return dirs;
}

DominanceResult support_dominates(const Zonotope& inner, const Zonotope& outer, std::size_t n_dirs, std::uint64_t seed,
    double tol)
{
    require_dim(outer.dim(), inner.dim(), "support_dominates");
    const Eigen::Index n = inner.dim();
    std::vector<Vector> dirs = sample_directions(n, n_dirs, seed);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        dirs.push_back(Vector::Unit(n, i));
        dirs.push_back(-Vector::Unit(n, i));
    }

    DominanceResult result;
    result.worst_gap = -std::numeric_limits<double>::infinity();
    for (const Vector& d : dirs)
    {
        const double h_in = support(inner, d);
        const double h_out = support(outer, d);
        const double gap = h_in - h_out;
        if (gap > result.worst_gap) result.worst_gap = gap;
        if (gap > tol * std::max(1.0, std::abs(h_out)) && result.holds)
        {
            result.holds = false;
            result.witness = d;
        }
    }
    return result;
}

std::size_t volume_subset_count(const Zonotope& Z)
{
    const auto N = static_cast<std::size_t>(Z.num_generators());
    const auto n = static_cast<std::size_t>(Z.dim());
    if (N < n) return 0;
    const std::size_t k = std::min(n, N - n);
    std::size_t count = 1;
    for (std::size_t i = 1; i <= k; ++i)
    {
        // count * (N - k + i) / i stays integral at every step.
        const std::size_t num = N - k + i;
        if (count > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
        count = count * num / i;
    }
    return count;
}

double volume_exact(const Zonotope& Z, std::size_t cap)
{
    const Eigen::Index n = Z.dim();
    const Eigen::Index N = Z.num_generators();
    if (n == 0) return 1.0;
    if (N < n) return 0.0;
    const std::size_t subsets = volume_subset_count(Z);
    if (subsets > cap)
        throw VolumeTooLarge("volume_exact: C(" + std::to_string(N) + ", " + std::to_string(n) + ") exceeds cap " +
                             std::to_string(cap));

    const Matrix& G = Z.generators();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    Matrix sub(n, n);
    double total = 0.0;
    while (true)
    {
        for (Eigen::Index k = 0; k < n; ++k) sub.col(k) = G.col(idx[static_cast<std::size_t>(k)]);
        total += std::abs(sub.partialPivLu().determinant());

        // Next combination in lexicographic order.
        Eigen::Index pos = n - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == N - n + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (Eigen::Index k = pos + 1; k < n; ++k)
            idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
    }
    return std::ldexp(total, static_cast<int>(n));
}

Vector sample_in_zonotope(const Zonotope& Z, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vector theta(Z.num_generators());
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = unif(rng);
    return Z.center() + Z.generators() * theta;
}

Vector sample_zonotope_corner(const Zonotope& Z, std::mt19937_64& rng)
{
    std::bernoulli_distribution coin(0.5);
    Vector theta(Z.num_generators());
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = coin(rng) ? 1.0 : -1.0;
    return Z.center() + Z.generators() * theta;
}

} // namespace zonoreach
