#include "helpers.hpp"
#include "../oracles.hpp"

#include "zonoreach/errors.hpp"
#include "zonoreach/geometry.hpp"

using namespace zonoreach;
using testing::cols;
using testing::unit_box;
using testing::vec;

TEST_SUITE("geometry")
{

TEST_CASE("zonotope construction drops zero generators")
{
    Zonotope Z(cols({vec({1, 0}), vec({0, 0}), vec({1e-13, 0})}), vec({0, 0}));
    CHECK(Z.num_generators() == 1);
    CHECK(Z.order() == doctest::Approx(0.5));
    CHECK(Zonotope::point(vec({1, 2})).num_generators() == 0);
    CHECK_THROWS_AS(Zonotope(Matrix::Identity(3, 3), vec({0, 0})), DimensionError);
}

TEST_CASE("support examples")
{
    CHECK(support(unit_box(2), vec({1, 0})) == doctest::Approx(1));
    CHECK(support(Zonotope(Matrix::Identity(2, 2), vec({1, 0})), vec({1, 0})) == doctest::Approx(2));
    const Zonotope Z(cols({vec({1, 0}), vec({0, 1}), vec({1, 1})}), vec({0, 0}));
    CHECK(support(Z, vec({1, 1})) == doctest::Approx(4));
    CHECK(oracle::support_bruteforce(Z, vec({1, 1})) == doctest::Approx(4));
    CHECK_THROWS_AS(support(Z, vec({1, 1, 1})), DimensionError);
}

TEST_CASE("support agrees with sign enumeration")
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t)
    {
        const Zonotope Z = testing::random_zonotope(rng, 3, 6);
        for (const auto& d : sample_directions(3, 8, static_cast<std::uint64_t>(t)))
            CHECK(support(Z, d) == doctest::Approx(oracle::support_bruteforce(Z, d)).epsilon(1e-12));
    }
}

TEST_CASE("linear map examples")
{
    const Zonotope S = linear_map(2.0 * Matrix::Identity(2, 2), unit_box(2));
    CHECK(testing::near(S.generators(), 2.0 * Matrix::Identity(2, 2), 0));
    const Zonotope O = linear_map(Matrix::Zero(2, 2), unit_box(2));
    CHECK(O.num_generators() == 0);
    CHECK(O.center().isZero());

    Matrix P(2, 2);
    P << 0, 1, 1, 0;
    const Zonotope Z(cols({vec({1, 0}), vec({1, 1})}), vec({1, 2}));
    const Zonotope PZ = linear_map(P, Z);
    CHECK(testing::near(PZ.generators(), cols({vec({0, 1}), vec({1, 1})}), 0));
    CHECK(testing::near(PZ.center(), vec({2, 1}), 0));
}

TEST_CASE("map adjoint identity")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    for (int t = 0; t < 30; ++t)
    {
        const Zonotope Z = testing::random_zonotope(rng, 3, 5);
        Matrix A(4, 3);
        for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = normal(rng);
        for (const auto& d : sample_directions(4, 10, static_cast<std::uint64_t>(t)))
            CHECK(std::abs(support(linear_map(A, Z), d) - support(Z, A.transpose() * d)) <= 1e-9);
    }
}

TEST_CASE("minkowski sum examples and additivity")
{
    const Zonotope S = minkowski_sum(unit_box(2), unit_box(2));
    CHECK(S.num_generators() == 4);
    CHECK(support(S, vec({1, 0})) == doctest::Approx(2));

    const Zonotope T = minkowski_sum(unit_box(2), Zonotope::point(vec({3, -1})));
    CHECK(testing::near(T.generators(), Matrix::Identity(2, 2), 0));
    CHECK(testing::near(T.center(), vec({3, -1}), 0));

    const Zonotope a(cols({vec({1, 0})}), vec({0, 0}));
    const Zonotope b(cols({vec({0, 1})}), vec({1, 0}));
    const Zonotope ab = minkowski_sum(a, b);
    CHECK(testing::near(ab.generators(), Matrix::Identity(2, 2), 0));
    CHECK(testing::near(ab.center(), vec({1, 0}), 0));
    const Zonotope ref(Matrix::Identity(2, 2), vec({1, 0}));
    for (const auto& d : sample_directions(2, 16, 5)) CHECK(support(ab, d) == doctest::Approx(support(ref, d)));

    std::mt19937_64 rng(8);
    for (int t = 0; t < 30; ++t)
    {
        const Zonotope X = testing::random_zonotope(rng, 4, 3), Y = testing::random_zonotope(rng, 4, 5);
        for (const auto& d : sample_directions(4, 10, static_cast<std::uint64_t>(t)))
            CHECK(std::abs(support(minkowski_sum(X, Y), d) - support(X, d) - support(Y, d)) <= 1e-9);
    }
    CHECK_THROWS_AS(minkowski_sum(unit_box(2), unit_box(3)), DimensionError);
}

TEST_CASE("aligned difference examples")
{
    const Zonotope Z = unit_box(2);
    const Zonotope same = aligned_diff(Z, Vector::Zero(2), Vector::Zero(2));
    CHECK(testing::near(same.generators(), Z.generators(), 0));
    const Zonotope pt = aligned_diff(Z, Vector::Ones(2), Vector::Zero(2));
    CHECK(pt.num_generators() == 0);
    const Zonotope shrunk = aligned_diff(Z, vec({0.2, 0.2}), Vector::Zero(2));
    CHECK(testing::near(shrunk.generators(), 0.8 * Matrix::Identity(2, 2), 1e-15));
    CHECK_THROWS(aligned_diff(Z, vec({1.5, 0}), Vector::Zero(2)));
    CHECK_NOTHROW(aligned_diff(Z, vec({1.0 + 1e-12, -1e-12}), Vector::Zero(2)));
}

TEST_CASE("aligned difference recombines exactly")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    for (int t = 0; t < 50; ++t)
    {
        const Zonotope Z = testing::random_zonotope(rng, 3, 6);
        Vector alpha(6), cp(3);
        for (int i = 0; i < 6; ++i) alpha(i) = unit(rng);
        for (int i = 0; i < 3; ++i) cp(i) = unit(rng) - 0.5;
        const Zonotope D = aligned_diff(Z, alpha, cp);
        const Zonotope sub = scaled_generators(Z, alpha, cp);
        // Column i of D plus column i of sub is g_i.
        CHECK(testing::near(D.generators() + sub.generators(), Z.generators(), 1e-12));
        CHECK(testing::near(D.center() + sub.center(), Z.center(), 1e-12));
        const Zonotope back = minkowski_sum(D, sub);
        CHECK(support_dominates(back, Z, 64, 1, 1e-9));
        CHECK(support_dominates(Z, back, 64, 1, 1e-9));
    }
}

TEST_CASE("contains_point examples")
{
    const Zonotope Z = unit_box(2);
    CHECK(contains_point(Z, Z.center()));
    CHECK_FALSE(contains_point(Z, vec({1.5, 0})));
    const Zonotope Y(cols({vec({1, 0}), vec({1, 1})}), vec({0, 0}));
    CHECK(contains_point(Y, vec({2, 1})));
    CHECK(contains_point(Zonotope::point(vec({1, 1})), vec({1, 1})));
    CHECK_FALSE(contains_point(Zonotope::point(vec({1, 1})), vec({1, 1.1})));
}

TEST_CASE("contains_point agrees with a theta grid and the exact 2D test")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    int checked = 0;
    for (int t = 0; t < 10; ++t)
    {
        const Zonotope Z = testing::random_zonotope(rng, 2, 1 + t % 3);
        for (int q = 0; q < 10; ++q)
        {
            const Vector x = vec({u(rng), u(rng)});
            const bool lp = contains_point(Z, x);
            CHECK(lp == oracle::contains_2d(Z, x, 1e-9));
            // The step-0.1 grid is an inner sample: grid hits imply membership.
            if (oracle::contains_grid(Z, x, 0.1, 0.1 * Z.generators().cwiseAbs().sum())) ++checked;
            if (!lp) CHECK_FALSE(oracle::contains_grid(Z, x, 0.1, 1e-12));
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("support_dominates examples")
{
    CHECK(support_dominates(unit_box(2), unit_box(2), 32, 1));
    const DominanceResult r = support_dominates(Zonotope(2.0 * Matrix::Identity(2, 2), Vector::Zero(2)), unit_box(2), 32, 1);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witness);
    CHECK(support(Zonotope(2.0 * Matrix::Identity(2, 2), Vector::Zero(2)), *r.witness)
        > support(unit_box(2), *r.witness));
    for (std::uint64_t seed : {1u, 7u, 123u})
        CHECK(support_dominates(Zonotope(0.8 * Matrix::Identity(2, 2), Vector::Zero(2)), unit_box(2), 64, seed));
    // Same seed, same verdict and gap.
    const Zonotope A(cols({vec({1, 0.3}), vec({0.1, 1})}), vec({0, 0}));
    const Zonotope B(cols({vec({1, 0}), vec({0, 1.05})}), vec({0, 0}));
    const auto r1 = support_dominates(A, B, 50, 9), r2 = support_dominates(A, B, 50, 9);
    CHECK(r1.holds == r2.holds);
    CHECK(r1.worst_gap == r2.worst_gap);
}

TEST_CASE("volume examples")
{
    CHECK(volume_exact(unit_box(2)) == doctest::Approx(4));
    const Zonotope Z(cols({vec({1, 0}), vec({0, 1}), vec({1, 1})}), vec({0, 0}));
    CHECK(volume_exact(Z) == doctest::Approx(12));
    CHECK(volume_exact(unit_box(3)) == doctest::Approx(8));
    CHECK(volume_exact(Zonotope(cols({vec({1, 0})}), vec({0, 0}))) == 0.0);
    const Zonotope big(Matrix::Ones(3, 200), Vector::Zero(3));
    CHECK_THROWS_AS(volume_exact(big, 1000), VolumeTooLarge);
}

TEST_CASE("volume matches the determinant formula and Monte Carlo")
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 3; ++t)
    {
        const Zonotope Z2 = testing::random_zonotope(rng, 2, 4);
        CHECK(volume_exact(Z2) == doctest::Approx(oracle::volume_formula(Z2.generators())).epsilon(1e-12));
        const double mc2 = oracle::volume_monte_carlo(Z2, 1000000, 17 + t,
            [&](const Vector& x) { return oracle::contains_2d(Z2, x, 0.0); });
        CHECK(std::abs(mc2 / volume_exact(Z2) - 1.0) < 0.02);

        const Zonotope Z3 = testing::random_zonotope(rng, 3, 5);
        CHECK(volume_exact(Z3) == doctest::Approx(oracle::volume_formula(Z3.generators())).epsilon(1e-12));
        const double mc3 = oracle::volume_monte_carlo(Z3, 1000000, 31 + t,
            [&](const Vector& x) { return oracle::contains_3d(Z3, x, 0.0); });
        CHECK(std::abs(mc3 / volume_exact(Z3) - 1.0) < 0.02);
    }
}

TEST_CASE("box conversions")
{
    const Box b(vec({-1, 0}), vec({1, 4}));
    const Zonotope Z = b.to_zonotope();
    CHECK(testing::near(Z.center(), vec({0, 2}), 0));
    CHECK(testing::near(Z.generators(), cols({vec({1, 0}), vec({0, 2})}), 0));
    const HPolytope H = b.to_hpolytope();
    CHECK(H.num_rows() == 4);
    CHECK(H.contains(vec({0.5, 3.9})));
    CHECK_FALSE(H.contains(vec({0.5, 4.1})));
    CHECK(H.is_bounded_nonempty());
    CHECK(b.to_vpolytope().num_vertices() == 4);
    CHECK_THROWS(Box(vec({1}), vec({0})));

    HPolytope half;
    half.H = Matrix::Identity(2, 2);
    half.h = Vector::Ones(2);
    CHECK_FALSE(half.is_bounded_nonempty());
}

TEST_CASE("direction sampling is seeded")
{
    const auto a = sample_directions(4, 10, 42), b = sample_directions(4, 10, 42), c = sample_directions(4, 10, 43);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(a[i] == b[i]);
        CHECK(a[i].norm() == doctest::Approx(1.0));
    }
    CHECK(a[0] != c[0]);
}

TEST_CASE("theta sampling stays inside")
{
    std::mt19937_64 rng(4);
    const Zonotope Z = testing::random_zonotope(rng, 2, 3);
    for (int i = 0; i < 100; ++i) CHECK(oracle::contains_2d(Z, sample_in_zonotope(Z, rng), 1e-12));
    for (int i = 0; i < 20; ++i) CHECK(oracle::contains_2d(Z, sample_zonotope_corner(Z, rng), 1e-12));
}

}
