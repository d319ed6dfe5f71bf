#include "helpers.hpp"
#include "../oracles.hpp"

#include "zonoreach/errors.hpp"
#include "zonoreach/solver.hpp"

#include <limits>

using namespace zonoreach;
using testing::vec;

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

LinearProgram one_var(double lo, double hi)
{
    LinearProgram lp(1);
    lp.objective(0) = 1.0;
    lp.lower(0) = lo;
    lp.upper(0) = hi;
    return lp;
}

/// max sum d_i log x_i s.t. sum x_i <= 1, x >= 0.
ConcaveLogProgram simplex_log(const Vector& d)
{
    ConcaveLogProgram p;
    const auto n = d.size();
    p.constraints = LinearProgram(n);
    p.constraints.lower.setZero();
    p.constraints.upper.setConstant(kInf);
    p.constraints.ineq = Matrix::Ones(1, n).sparseView();
    p.constraints.ineq_rhs = vec({1.0});
    for (Eigen::Index i = 0; i < n; ++i) p.log_vars.push_back(i);
    p.weights = d;
    return p;
}

} // namespace

TEST_SUITE("solver")
{

TEST_CASE("lp examples")
{
    LinearProgram lp = one_var(3.0, kInf);
    SolveOutcome s = solve_lp(lp);
    REQUIRE(s.optimal());
    CHECK(s.primal(0) == doctest::Approx(3.0));
    CHECK(s.objective == doctest::Approx(3.0));

    lp = one_var(3.0, kInf);
    lp.ineq = Matrix::Ones(1, 1).sparseView();
    lp.ineq_rhs = vec({2.0});
    s = solve_lp(lp);
    CHECK(s.status == SolveStatus::kInfeasible);
    CHECK(s.primal.size() == 0);

    LinearProgram box(2);
    box.sense = Sense::kMaximize;
    box.objective.setOnes();
    box.lower.setZero();
    box.upper = vec({0.8, 0.8});
    s = solve_lp(box);
    REQUIRE(s.optimal());
    CHECK(testing::near(s.primal, vec({0.8, 0.8}), 1e-9));
}

TEST_CASE("unbounded lp")
{
    LinearProgram lp = one_var(-kInf, kInf);
    CHECK(solve_lp(lp).status == SolveStatus::kUnbounded);
}

TEST_CASE("equality lp and residual re-check")
{
    // x + y = 1, x - y = 0.2.
    LinearProgram lp(2);
    Matrix A(2, 2);
    A << 1, 1, 1, -1;
    lp.eq = A.sparseView();
    lp.eq_rhs = vec({1.0, 0.2});
    const SolveOutcome s = solve_lp(lp);
    REQUIRE(s.optimal());
    CHECK(testing::near(s.primal, vec({0.6, 0.4}), 1e-9));
    CHECK(lp.max_violation(s.primal) <= 1e-7);
    CHECK(lp.max_violation(vec({1.0, 0.0})) == doctest::Approx(0.8));
}

TEST_CASE("malformed programs are rejected")
{
    LinearProgram lp(2);
    lp.lower(0) = 1.0;
    lp.upper(0) = 0.0;
    CHECK_THROWS(solve_lp(lp));
    LinearProgram bad(2);
    bad.eq = Matrix::Ones(1, 3).sparseView();
    bad.eq_rhs = vec({1.0});
    CHECK_THROWS_AS(bad.validate(), DimensionError);
}

TEST_CASE("concave log examples")
{
    ConcaveLogProgram p;
    p.constraints = one_var(0.0, 0.5);
    p.log_vars = {0};
    p.weights = vec({1.0});
    SolveOutcome s = solve_concave_log(p);
    REQUIRE(s.optimal());
    CHECK(s.primal(0) == doctest::Approx(0.5).epsilon(1e-6));

    s = solve_concave_log(simplex_log(vec({1, 1})));
    REQUIRE(s.optimal());
    CHECK(testing::near(s.primal, vec({0.5, 0.5}), 1e-5));

    s = solve_concave_log(simplex_log(vec({2, 1})));
    REQUIRE(s.optimal());
    CHECK(testing::near(s.primal, vec({2.0 / 3.0, 1.0 / 3.0}), 1e-5));
    CHECK(s.objective == doctest::Approx(2 * std::log(2.0 / 3.0) + std::log(1.0 / 3.0)).epsilon(1e-6));
}

TEST_CASE("concave log matches a golden-section oracle")
{
    // max d1 log x + d2 log(y) with x + 2y <= 3, x <= 2: reduce to 1D over x.
    const double d1 = 1.3, d2 = 0.7;
    ConcaveLogProgram p;
    p.constraints = LinearProgram(2);
    p.constraints.lower.setZero();
    p.constraints.upper = vec({2.0, kInf});
    Matrix A(1, 2);
    A << 1, 2;
    p.constraints.ineq = A.sparseView();
    p.constraints.ineq_rhs = vec({3.0});
    p.log_vars = {0, 1};
    p.weights = vec({d1, d2});
    const SolveOutcome s = solve_concave_log(p);
    REQUIRE(s.optimal());
    const double x = oracle::golden_max([&](double t) { return d1 * std::log(t) + d2 * std::log((3.0 - t) / 2.0); },
        1e-9, 2.0);
    CHECK(s.primal(0) == doctest::Approx(x).epsilon(1e-5));
    CHECK(s.primal(1) == doctest::Approx((3.0 - x) / 2.0).epsilon(1e-5));
}

TEST_CASE("concave log is invariant to weight scaling")
{
    const Vector d = vec({0.5, 1.7, 1.1});
    const SolveOutcome a = solve_concave_log(simplex_log(d));
    for (double kappa : {1e-3, 0.5, 7.0, 1e3})
    {
        const SolveOutcome b = solve_concave_log(simplex_log(kappa * d));
        REQUIRE(b.optimal());
        CHECK(testing::near(a.primal, b.primal, 1e-5));
    }
}

TEST_CASE("forced-zero variables are reported and dropped")
{
    // x2 <= 0 forces it to zero; x1 should still be maximized.
    ConcaveLogProgram p;
    p.constraints = LinearProgram(2);
    p.constraints.lower.setZero();
    p.constraints.upper = vec({0.7, 1.0});
    Matrix A(1, 2);
    A << 0, 1;
    p.constraints.ineq = A.sparseView();
    p.constraints.ineq_rhs = vec({0.0});
    p.log_vars = {0, 1};
    p.weights = vec({1.0, 1.0});
    const SolveOutcome s = solve_concave_log(p);
    REQUIRE(s.optimal());
    CHECK(s.primal(0) == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(s.primal(1) == doctest::Approx(0.0));
    REQUIRE(s.forced_zero.size() == 1);
    CHECK(s.forced_zero[0] == 1);
}

TEST_CASE("zero weights only keep bounds")
{
    ConcaveLogProgram p = simplex_log(vec({1.0, 0.0}));
    const SolveOutcome s = solve_concave_log(p);
    REQUIRE(s.optimal());
    CHECK(s.primal(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("infeasible concave program")
{
    ConcaveLogProgram p = simplex_log(vec({1.0, 1.0}));
    p.constraints.lower = vec({0.6, 0.6});
    CHECK(solve_concave_log(p).status == SolveStatus::kInfeasible);
}

}
