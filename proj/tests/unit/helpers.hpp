#ifndef ZONOREACH_TESTS_HELPERS_HPP_
#define ZONOREACH_TESTS_HELPERS_HPP_

#include "zonoreach/geometry.hpp"

#include <doctest.h>

#include <initializer_list>

namespace testing
{

using zonoreach::Matrix;
using zonoreach::Vector;
using zonoreach::Zonotope;

inline Vector vec(std::initializer_list<double> xs)
{
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

/// Matrix from a list of columns.
inline Matrix cols(std::initializer_list<Vector> cs)
{
    const Eigen::Index n = cs.begin()->size();
    Matrix M(n, static_cast<Eigen::Index>(cs.size()));
    Eigen::Index j = 0;
    for (const auto& c : cs) M.col(j++) = c;
    return M;
}

inline Zonotope unit_box(Eigen::Index n)
{
    return Zonotope(Matrix::Identity(n, n), Vector::Zero(n));
}

inline bool near(const Matrix& a, const Matrix& b, double tol)
{
    return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

inline Zonotope random_zonotope(std::mt19937_64& rng, Eigen::Index n, Eigen::Index N)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix G(n, N);
    Vector c(n);
    for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index i = 0; i < n; ++i) G(i, j) = normal(rng);
    for (Eigen::Index i = 0; i < n; ++i) c(i) = 0.3 * normal(rng);
    return Zonotope(G, c);
}

} // namespace testing

#endif
