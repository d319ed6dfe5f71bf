#ifndef ZONOREACH_REDUCTION_HPP_
#define ZONOREACH_REDUCTION_HPP_

#include "zonoreach/geometry.hpp"

#include <optional>
#include <vector>

namespace zonoreach
{

/// Generators i < j (indices into the zonotope the merge was applied to)
/// were replaced by g_i + sign * g_j, appended as the last column.
struct MergeRecord
{
    Eigen::Index i = 0;
    Eigen::Index j = 0;
    int sign = 1;
};

struct ReductionReport
{
    std::vector<MergeRecord> merges;
    double before_order = 0.0;
    double after_order = 0.0;
    std::optional<double> volume_ratio;  ///< vol(after) / vol(before), when exact volume is tractable
};

/// ||g_i||_2 * ||g_j - g^_i (g_j' g^_i)||_2 with g^_i = g_i / ||g_i||_2.
double merge_cost(const Vector& gi, const Vector& gj);

/**
 * @brief Replaces the cheapest generator pair by its sum or difference; the
 * result is contained in Z.
 *
 * The pair minimizes merge_cost over i < j (lexicographic tie-break). The sum
 * is chosen iff ||(g_i + g_j)' G'||_2 >= ||(g_i - g_j)' G'||_2, with G' the
 * transposed right inverse of the remaining generators; if those do not span
 * the space, the sum is used.
 */
std::pair<Zonotope, MergeRecord> reduce_once(const Zonotope& Z);

/**
 * @brief Merges until N <= floor(target_order * n). Pairs are re-selected
 * after every merge.
 *
 * @param volume_cap exact volume ratio is reported when C(N, n) <= cap for
 *        the input (0 disables it)
 */
std::pair<Zonotope, ReductionReport> reduce_to_order(const Zonotope& Z, double target_order,
    std::size_t volume_cap = 0);

} // namespace zonoreach

#endif
