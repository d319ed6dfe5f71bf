#include "zonoreach/reduction.hpp"
#include "zonoreach/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace zonoreach
{

double merge_cost(const Vector& gi, const Vector& gj)
{
    const double ni = gi.norm();
    if (ni == 0.0) return 0.0;
    const Vector unit = gi / ni;
    return ni * (gj - unit * gj.dot(unit)).norm();
}

std::pair<Zonotope, MergeRecord> reduce_once(const Zonotope& Z)
{
    const Eigen::Index n = Z.dim();
    const Eigen::Index N = Z.num_generators();
    if (N < 2) throw std::invalid_argument("reduce_once: need at least two generators");

    const Matrix& G = Z.generators();
    MergeRecord rec;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < N; ++i)
    {
        for (Eigen::Index j = i + 1; j < N; ++j)
        {
            const double cost = merge_cost(G.col(i), G.col(j));
            if (cost < best)
            {
                best = cost;
                rec.i = i;
                rec.j = j;
            }
        }
    }

    Matrix rest(n, N - 2);
    for (Eigen::Index k = 0, out = 0; k < N; ++k)
        if (k != rec.i && k != rec.j) rest.col(out++) = G.col(k);

    const Vector plus = G.col(rec.i) + G.col(rec.j);
    const Vector minus = G.col(rec.i) - G.col(rec.j);
    rec.sign = 1;
    if (rest.cols() >= n && n > 0)
    {
        Eigen::JacobiSVD<Matrix> svd(rest, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-10);
        if (svd.rank() == n)
        {
            // Right inverse R^+ = V S^{-1} U' (N-2 x n); G' = (R^+)' = U S^{-1} V' (n x N-2).
            const Vector inv_s = svd.singularValues().cwiseInverse();
            const Matrix g_prime = svd.matrixU() * inv_s.asDiagonal() * svd.matrixV().transpose();
            rec.sign = (plus.transpose() * g_prime).norm() >= (minus.transpose() * g_prime).norm() ? 1 : -1;
        }
    }

    Matrix merged(n, N - 1);
    merged.leftCols(N - 2) = rest;
    merged.col(N - 2) = rec.sign > 0 ? plus : minus;
    return {Zonotope(std::move(merged), Z.center()), rec};
}

std::pair<Zonotope, ReductionReport> reduce_to_order(const Zonotope& Z, double target_order, std::size_t volume_cap)
{
    const Eigen::Index n = Z.dim();
    if (n == 0) throw std::invalid_argument("reduce_to_order: zero-dimensional zonotope");
    const auto target_n = static_cast<Eigen::Index>(std::floor(target_order * static_cast<double>(n) + 1e-9));
    if (target_n < 1) throw std::invalid_argument("reduce_to_order: target order leaves no generator");

    ReductionReport report;
    report.before_order = Z.order();
    Zonotope current = Z;
    while (current.num_generators() > target_n)
    {
        auto [next, rec] = reduce_once(current);
        report.merges.push_back(rec);
        current = std::move(next);
    }
    report.after_order = current.order();

    if (volume_cap > 0 && volume_subset_count(Z) <= volume_cap)
    {
        const double before = volume_exact(Z, volume_cap);
        if (before > 0.0) report.volume_ratio = volume_exact(current, volume_cap) / before;
    }
    return {std::move(current), report};
}

} // namespace zonoreach
