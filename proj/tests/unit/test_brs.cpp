#include "helpers.hpp"
#include "../oracles.hpp"

#include "zonoreach/brs.hpp"
#include "zonoreach/control.hpp"
#include "zonoreach/errors.hpp"

#include <random>

using namespace zonoreach;
using testing::cols;
using testing::vec;

namespace
{

Matrix scalar(double a)
{
    return Matrix::Constant(1, 1, a);
}

Zonotope interval(double lo, double hi)
{
    return Box(vec({lo}), vec({hi})).to_zonotope();
}

SystemModel integrator_1d(double w = 0.1)
{
    return SystemModel(scalar(1), scalar(1), scalar(1), Vector::Zero(1), interval(-1, 1),
        DisturbanceSet::from_box(Box(vec({-w}), vec({w}))));
}

void check_interval(const Zonotope& Z, oracle::Interval expected, double tol = 1e-7)
{
    auto [lo, hi] = Z.bounding_box();
    CHECK(lo(0) == doctest::Approx(expected.lo).epsilon(tol));
    CHECK(hi(0) == doctest::Approx(expected.hi).epsilon(tol));
}

/// 2D system with diagonal A and boxes everywhere.
SystemModel box_system_2d()
{
    Matrix A(2, 2);
    A << 1.2, 0, 0, 0.8;
    return SystemModel(A, Matrix::Identity(2, 2), Matrix::Identity(2, 2), vec({0.1, -0.05}),
        Box(vec({-0.5, -0.3}), vec({0.5, 0.3})).to_zonotope(),
        DisturbanceSet::from_box(Box(vec({-0.1, -0.05}), vec({0.1, 0.05}))));
}

} // namespace

TEST_SUITE("brs")
{

TEST_CASE("system model validation")
{
    CHECK_THROWS_AS(SystemModel(Matrix::Zero(2, 2), Matrix::Identity(2, 1), Matrix::Identity(2, 2), Vector::Zero(2),
                        interval(-1, 1), DisturbanceSet::from_box(Box(vec({-1, -1}), vec({1, 1})))),
        std::invalid_argument);
    CHECK_THROWS_AS(SystemModel(Matrix::Identity(2, 2), Matrix::Identity(3, 1), Matrix::Identity(2, 2), Vector::Zero(2),
                        interval(-1, 1), DisturbanceSet::from_box(Box(vec({-1, -1}), vec({1, 1})))),
        DimensionError);
    const SystemModel sys = integrator_1d();
    CHECK(sys.step(vec({0.5}), vec({0.2}), vec({-0.1}))(0) == doctest::Approx(0.6));
}

TEST_CASE("one step on the scalar integrator")
{
    const SystemModel sys = integrator_1d();
    const Zonotope Z0 = interval(-1, 1);
    const auto [next, diff] = brs_step_under(Z0, sys);
    const oracle::Interval d = oracle::erode({-1, 1}, {-0.1, 0.1});
    check_interval(diff, d);
    check_interval(next, oracle::dilate(d, {-1, 1}));
    check_interval(brs_step_over(Z0, sys), {-1.9, 1.9});
    check_interval(brs_pre_image(diff, sys), {-1.9, 1.9});
}

TEST_CASE("three-step chain matches the interval recursion")
{
    const SystemModel sys = integrator_1d();
    const BrsSequence seq = compute_brs(sys, interval(-1, 1), 3);
    REQUIRE(seq.under.size() == 4);
    REQUIRE(seq.over.size() == 4);
    REQUIRE(seq.diff_under.size() == 3);
    CHECK_FALSE(seq.empty_from.has_value());

    oracle::Interval r{-1, 1};
    for (std::size_t k = 0; k < 4; ++k)
    {
        CAPTURE(k);
        check_interval(seq.under[k], r);
        check_interval(seq.over[k], r);
        if (k < 3) check_interval(seq.diff_under[k], oracle::erode(r, {-0.1, 0.1}));
        r = oracle::dilate(oracle::erode(r, {-0.1, 0.1}), {-1, 1});
    }
    check_interval(seq.under[3], {-3.7, 3.7});
}

TEST_CASE("zero horizon returns the target in both chains")
{
    const Zonotope Z0 = interval(-1, 1);
    const BrsSequence seq = compute_brs(integrator_1d(), Z0, 0);
    REQUIRE(seq.under.size() == 1);
    REQUIRE(seq.over.size() == 1);
    CHECK(seq.diff_under.empty());
    CHECK(seq.horizon() == 0);
    CHECK(testing::near(seq.under[0].generators(), Z0.generators(), 0.0));
    CHECK(testing::near(seq.over[0].generators(), Z0.generators(), 0.0));
}

TEST_CASE("without disturbance the step is a plain pre-image")
{
    Matrix A(2, 2), B(2, 1);
    A << 1, 0.5, 0, 1;
    B << 0.125, 0.5;
    const SystemModel sys(A, B, Matrix::Identity(2, 2), vec({0.2, 0}), interval(-1, 1),
        DisturbanceSet::from_box(Box(Vector::Zero(2), Vector::Zero(2))));
    std::mt19937_64 rng(5);
    const Zonotope Z0 = testing::random_zonotope(rng, 2, 3);

    const auto [next, diff] = brs_step_under(Z0, sys);
    const Zonotope over = brs_step_over(Z0, sys);
    const Matrix Ainv = A.inverse();
    const Zonotope expected = linear_map(Ainv, translate(minkowski_sum(Z0, linear_map(-B, sys.U())), -sys.K()));
    CHECK(testing::near(diff.generators(), Z0.generators(), 1e-9));
    CHECK(testing::near(next.generators(), expected.generators(), 1e-9));
    CHECK(testing::near(next.center(), expected.center(), 1e-9));
    CHECK(testing::near(over.generators(), next.generators(), 1e-9));
    CHECK(testing::near(over.center(), next.center(), 1e-9));
}

TEST_CASE("A = 2I halves every support value")
{
    const SystemModel sys(2.0 * Matrix::Identity(2, 2), Matrix::Identity(2, 1), Matrix::Identity(2, 2),
        Vector::Zero(2), interval(-0.5, 0.5), DisturbanceSet::from_box(Box(vec({-0.1, -0.2}), vec({0.1, 0.2}))));
    const Zonotope Z0 = Zonotope(cols({vec({1, 0.3}), vec({-0.2, 1}), vec({0.5, 0.5})}), vec({0.1, 0}));
    const auto [next, diff] = brs_step_under(Z0, sys);
    const Zonotope pre = minkowski_sum(diff, linear_map(-sys.B(), sys.U()));
    for (const auto& d : sample_directions(2, 64, 9))
        CHECK(support(next, d) == doctest::Approx(0.5 * support(pre, d)).epsilon(1e-9));
}

TEST_CASE("box systems make both chains coincide")
{
    const SystemModel sys = box_system_2d();
    const BrsSequence seq = compute_brs(sys, Box(vec({-1, -1}), vec({1, 1})).to_zonotope(), 6);
    REQUIRE(seq.under.size() == 7);
    for (std::size_t k = 0; k < seq.under.size(); ++k)
    {
        CAPTURE(k);
        auto [ulo, uhi] = seq.under[k].bounding_box();
        auto [olo, ohi] = seq.over[k].bounding_box();
        CHECK(testing::near(ulo, olo, 1e-6));
        CHECK(testing::near(uhi, ohi, 1e-6));
        CHECK(volume_exact(seq.under[k]) == doctest::Approx(volume_exact(seq.over[k])).epsilon(1e-6));
    }
}

TEST_CASE("generator count grows by the input order without reduction")
{
    // Small disturbance keeps every template coefficient below one.
    Matrix A(3, 3), B(3, 2);
    A << 1, 0.1, 0, 0, 1, 0.1, 0.05, 0, 0.95;
    B << 0, 0, 1, 0, 0, 1;
    const SystemModel sys(A, B, Matrix::Identity(3, 3), Vector::Zero(3),
        Box(vec({-1, -1}), vec({1, 1})).to_zonotope(),
        DisturbanceSet::from_box(Box(Vector::Constant(3, -0.01), Vector::Constant(3, 0.01))));
    std::mt19937_64 rng(8);
    const Zonotope Z0 = testing::random_zonotope(rng, 3, 5);
    const BrsSequence seq = compute_brs(sys, Z0, 8);
    REQUIRE_FALSE(seq.empty_from.has_value());
    for (std::size_t k = 0; k < seq.under.size(); ++k)
    {
        CAPTURE(k);
        CHECK(seq.under[k].num_generators() == 5 + 2 * static_cast<Eigen::Index>(k));
        CHECK(seq.over[k].num_generators() == 5 + 2 * static_cast<Eigen::Index>(k));
    }
}

TEST_CASE("reduction policies cap the under chain")
{
    const SystemModel sys = box_system_2d();
    std::mt19937_64 rng(13);
    const Zonotope Z0 = minkowski_sum(testing::random_zonotope(rng, 2, 4), Box(vec({-2, -2}), vec({2, 2})).to_zonotope());

    BrsOptions opts;
    opts.reduce = ReducePolicy::kAlways;
    opts.max_order = 2.0;
    const BrsSequence always = compute_brs(sys, Z0, 5, opts);
    for (std::size_t k = 0; k + 1 < always.under.size(); ++k) CHECK(always.under[k].order() <= 2.0);
    CHECK(always.steps.front().reduced);

    opts.reduce = ReducePolicy::kAtOrderThreshold;
    opts.threshold_order = 4.0;
    const BrsSequence late = compute_brs(sys, Z0, 5, opts);
    CHECK_FALSE(late.steps.front().reduced);
    bool fired = false;
    for (const auto& s : late.steps) fired = fired || s.reduced;
    CHECK(fired);

    CHECK(parse_reduce_policy(to_string(ReducePolicy::kAtOrderThreshold)) == ReducePolicy::kAtOrderThreshold);
    CHECK(parse_under_method("sadraddini") == UnderMethod::kSadraddini);
    CHECK_THROWS(parse_reduce_policy("sometimes"));
}

TEST_CASE("under chain is dominated by the over chain")
{
    Matrix A(3, 3), B(3, 1);
    A << 1.02, 0.1, 0, -0.05, 0.98, 0.1, 0, 0.03, 1.01;
    B << 0, 0.1, 1;
    for (auto method : {UnderMethod::kMinOut, UnderMethod::kSadraddini})
    {
        const SystemModel sys(A, B, Matrix::Identity(3, 3), vec({0.01, 0, 0}), interval(-1, 1),
            DisturbanceSet::from_box(Box(Vector::Constant(3, -0.05), Vector::Constant(3, 0.05))));
        std::mt19937_64 rng(17);
        const Zonotope Z0 = minkowski_sum(testing::random_zonotope(rng, 3, 4), testing::unit_box(3));
        BrsOptions opts;
        opts.method = method;
        opts.reduce = ReducePolicy::kAtOrderThreshold;
        opts.max_order = 3.0;
        opts.threshold_order = 3.0;
        const BrsSequence seq = compute_brs(sys, Z0, 8, opts);
        for (std::size_t k = 0; k < seq.under.size(); ++k)
        {
            CAPTURE(k);
            CHECK(support_dominates(seq.under[k], seq.over[k], 256, k));
        }
    }
}

TEST_CASE("an empty under step truncates the chain but not the over chain")
{
    // W wider than the target: the first difference is already empty.
    const SystemModel sys = integrator_1d(1.5);
    const BrsSequence seq = compute_brs(sys, interval(-1, 1), 3);
    REQUIRE(seq.empty_from.has_value());
    CHECK(*seq.empty_from == 1);
    CHECK(seq.under.size() == 1);
    CHECK_FALSE(seq.empty_reason.empty());
    CHECK_THROWS_AS(brs_step_under(interval(-1, 1), sys), EmptyUnderApprox);
}

TEST_CASE("sampled states in the under chain admit an input")
{
    const SystemModel sys = box_system_2d();
    std::mt19937_64 rng(23);
    const Zonotope Z0 = minkowski_sum(testing::random_zonotope(rng, 2, 3), testing::unit_box(2));
    BrsOptions opts;
    opts.reduce = ReducePolicy::kAtOrderThreshold;
    opts.max_order = 4.0;
    const BrsSequence seq = compute_brs(sys, Z0, 5, opts);
    REQUIRE_FALSE(seq.empty_from.has_value());
    const Controller ctrl(sys, seq);
    std::size_t feasible = 0, total = 0;
    for (Eigen::Index k = 0; k < seq.horizon(); ++k)
    {
        for (int s = 0; s < 100; ++s)
        {
            const Vector x = sample_in_zonotope(seq.under[static_cast<std::size_t>(k) + 1], rng);
            ++total;
            try
            {
                const Vector u = one_step_input(x, k, ctrl);
                feasible += contains_point(seq.diff_under[static_cast<std::size_t>(k)],
                                sys.A() * x + sys.B() * u + sys.K(), 1e-6)
                    ? 1
                    : 0;
            }
            catch (const NotInBrs&)
            {
            }
        }
    }
    CHECK(feasible == total);
}

}
