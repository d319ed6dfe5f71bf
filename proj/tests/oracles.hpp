// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls the LP backend.
#ifndef ZONOREACH_TESTS_ORACLES_HPP_
#define ZONOREACH_TESTS_ORACLES_HPP_

#include "zonoreach/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle
{

using zonoreach::Matrix;
using zonoreach::Vector;
using zonoreach::Zonotope;

struct Interval
{
    double lo;
    double hi;
};

/// [a] - [b] in the Minkowski sense: points x with x + [b] inside [a].
inline Interval erode(Interval a, Interval b)
{
    return {a.lo - b.lo, a.hi - b.hi};
}

inline Interval dilate(Interval a, Interval b)
{
    return {a.lo + b.lo, a.hi + b.hi};
}

/// Support by enumerating all 2^N sign patterns.
inline double support_bruteforce(const Zonotope& Z, const Vector& d)
{
    const auto N = static_cast<unsigned>(Z.num_generators());
    double best = -std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << N); ++mask)
    {
        Vector x = Z.center();
        for (unsigned i = 0; i < N; ++i) x += ((mask >> i) & 1u ? 1.0 : -1.0) * Z.generator(i);
        best = std::max(best, d.dot(x));
    }
    return best;
}

/// Grid search over theta in {-1, -1+step, ..., 1}^N.
inline bool contains_grid(const Zonotope& Z, const Vector& x, double step, double tol)
{
    const Eigen::Index N = Z.num_generators();
    const int ticks = static_cast<int>(std::lround(2.0 / step)) + 1;
    std::vector<int> idx(static_cast<std::size_t>(N), 0);
    while (true)
    {
        Vector p = Z.center();
        for (Eigen::Index i = 0; i < N; ++i) p += (-1.0 + step * idx[static_cast<std::size_t>(i)]) * Z.generator(i);
        if ((p - x).cwiseAbs().maxCoeff() <= tol) return true;
        Eigen::Index k = 0;
        while (k < N && ++idx[static_cast<std::size_t>(k)] == ticks) idx[static_cast<std::size_t>(k++)] = 0;
        if (k == N) return false;
    }
}

/// Exact membership for 2D zonotopes: x in Z iff d'x <= h(d) for every edge normal.
inline bool contains_2d(const Zonotope& Z, const Vector& x, double tol)
{
    std::vector<Vector> normals{Vector::Unit(2, 0), Vector::Unit(2, 1)};
    for (Eigen::Index i = 0; i < Z.num_generators(); ++i)
    {
        Vector nrm(2);
        nrm << -Z.generator(i)(1), Z.generator(i)(0);
        if (nrm.norm() > 0) normals.push_back(nrm / nrm.norm());
    }
    for (const auto& nrm : normals)
    {
        double h = nrm.dot(Z.center());
        for (Eigen::Index i = 0; i < Z.num_generators(); ++i) h += std::abs(nrm.dot(Z.generator(i)));
        double hm = -nrm.dot(Z.center());
        for (Eigen::Index i = 0; i < Z.num_generators(); ++i) hm += std::abs(nrm.dot(Z.generator(i)));
        if (nrm.dot(x) > h + tol || -nrm.dot(x) > hm + tol) return false;
    }
    return true;
}

/// Monte Carlo volume with a caller-supplied membership test over the bounding box.
inline double volume_monte_carlo(const Zonotope& Z, std::size_t samples, std::uint64_t seed,
    const std::function<bool(const Vector&)>& member)
{
    auto [lo, hi] = Z.bounding_box();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t hits = 0;
    Vector x(Z.dim());
    for (std::size_t s = 0; s < samples; ++s)
    {
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = lo(i) + (hi(i) - lo(i)) * unit(rng);
        hits += member(x) ? 1 : 0;
    }
    return (hi - lo).prod() * static_cast<double>(hits) / static_cast<double>(samples);
}

/// Exact 3D membership via facet normals g_i x g_j.
inline bool contains_3d(const Zonotope& Z, const Vector& x, double tol)
{
    std::vector<Vector> normals{Vector::Unit(3, 0), Vector::Unit(3, 1), Vector::Unit(3, 2)};
    const Eigen::Index N = Z.num_generators();
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = i + 1; j < N; ++j)
        {
            const Eigen::Vector3d a = Z.generator(i), b = Z.generator(j);
            const Eigen::Vector3d c = a.cross(b);
            if (c.norm() > 1e-12) normals.push_back(c.normalized());
        }
    for (const auto& nrm : normals)
    {
        double spread = 0.0;
        for (Eigen::Index i = 0; i < N; ++i) spread += std::abs(nrm.dot(Z.generator(i)));
        if (std::abs(nrm.dot(x - Z.center())) > spread + tol) return false;
    }
    return true;
}

/// Volume of a zonotope by the determinant formula, written out independently.
inline double volume_formula(const Matrix& G)
{
    const Eigen::Index n = G.rows(), N = G.cols();
    if (N < n) return 0.0;
    std::vector<int> pick(static_cast<std::size_t>(N), 0);
    std::fill(pick.end() - n, pick.end(), 1);
    double sum = 0.0;
    do
    {
        Matrix S(n, n);
        Eigen::Index k = 0;
        for (Eigen::Index i = 0; i < N; ++i)
            if (pick[static_cast<std::size_t>(i)]) S.col(k++) = G.col(i);
        sum += std::abs(S.determinant());
    } while (std::next_permutation(pick.begin(), pick.end()));
    return std::pow(2.0, static_cast<double>(n)) * sum;
}

/// Maximizes a concave 1D function on [lo, hi] by golden-section search.
inline double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters = 200)
{
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    for (int i = 0; i < iters; ++i)
    {
        if (f(c) > f(d)) b = d;
        else a = c;
        c = b - phi * (b - a);
        d = a + phi * (b - a);
    }
    return 0.5 * (a + b);
}

/// Columns sorted lexicographically, for set comparisons of generator matrices.
inline Matrix sorted_columns(const Matrix& G)
{
    std::vector<Vector> cols;
    for (Eigen::Index j = 0; j < G.cols(); ++j) cols.push_back(G.col(j));
    std::sort(cols.begin(), cols.end(), [](const Vector& a, const Vector& b) {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    });
    Matrix out(G.rows(), G.cols());
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = cols[j];
    return out;
}

/// Canonical form of a generator set: each column sign-normalized (first nonzero entry positive), then sorted.
inline Matrix canonical_generators(const Matrix& G)
{
    Matrix H = G;
    for (Eigen::Index j = 0; j < H.cols(); ++j)
    {
        for (Eigen::Index i = 0; i < H.rows(); ++i)
        {
            if (std::abs(H(i, j)) > 1e-15)
            {
                if (H(i, j) < 0) H.col(j) = -H.col(j);
                break;
            }
        }
    }
    return sorted_columns(H);
}

} // namespace oracle

#endif
