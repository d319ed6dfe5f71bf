#include "helpers.hpp"
#include "../oracles.hpp"

#include "zonoreach/reduction.hpp"

#include <cmath>
#include <random>

using namespace zonoreach;
using testing::cols;
using testing::vec;

TEST_SUITE("reduction")
{

TEST_CASE("parallel pair is merged first and losslessly")
{
    const Zonotope Z(cols({vec({1, 0}), vec({0, 1}), vec({1, 0})}), Vector::Zero(2));
    auto [R, merge] = reduce_once(Z);
    CHECK(merge.i == 0);
    CHECK(merge.j == 2);
    CHECK(merge.sign == 1);
    CHECK(testing::near(oracle::canonical_generators(R.generators()),
        oracle::canonical_generators(cols({vec({2, 0}), vec({0, 1})})), 1e-12));
    CHECK(volume_exact(Z) == doctest::Approx(8.0));
    CHECK(volume_exact(R) == doctest::Approx(8.0));
}

TEST_CASE("two generators in the plane collapse to a segment")
{
    auto [R, merge] = reduce_once(testing::unit_box(2));
    CHECK(R.num_generators() == 1);
    CHECK(volume_exact(R) == 0.0);
    CHECK(support_dominates(R, testing::unit_box(2), 64, 1));
}

TEST_CASE("small generators are paired before a large one")
{
    const Zonotope Z(cols({vec({1, 0}), vec({0, 1}), vec({10, 10})}), Vector::Zero(2));
    CHECK(merge_cost(Z.generator(0), Z.generator(1)) == doctest::Approx(1.0));
    CHECK(merge_cost(Z.generator(0), Z.generator(2)) > 1.0);
    CHECK(merge_cost(Z.generator(1), Z.generator(2)) > 1.0);
    auto [R, merge] = reduce_once(Z);
    CHECK(merge.i == 0);
    CHECK(merge.j == 1);
    // The merged column goes last; the untouched one keeps its place.
    CHECK(testing::near(R.generators().col(0), vec({10, 10}), 0.0));
}

TEST_CASE("merge cost ignores the sign and scale of the partner direction")
{
    const Vector g = vec({1, 2, -1});
    CHECK(merge_cost(g, 3.0 * g) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(merge_cost(g, -g) == doctest::Approx(0.0).epsilon(1e-12));
    const Vector h = vec({2, -1, 0});  // orthogonal to g
    CHECK(merge_cost(g, h) == doctest::Approx(g.norm() * h.norm()));
}

TEST_CASE("sign rule follows the right-inverse test")
{
    // Remaining generators diag(3, 2): the difference (0, 0.6) points where
    // they are short, so it wins over the sum (0.6, 0).
    const Zonotope Z(cols({vec({0.3, 0.3}), vec({0.3, -0.3}), vec({3, 0}), vec({0, 2})}), Vector::Zero(2));
    auto [R, merge] = reduce_once(Z);
    CHECK(merge.i == 0);
    CHECK(merge.j == 1);
    CHECK(merge.sign == -1);
    CHECK(volume_exact(R) == doctest::Approx(31.2));
    CHECK(volume_exact(R) > oracle::volume_formula(cols({vec({0.6, 0}), vec({3, 0}), vec({0, 2})})));
}

TEST_CASE("rank-deficient remainder falls back to the sum")
{
    const Zonotope Z(cols({vec({1, 1}), vec({1, -1}), vec({0, 3})}), Vector::Zero(2));
    auto [R, merge] = reduce_once(Z);
    CHECK(merge.i == 0);
    CHECK(merge.j == 1);
    CHECK(merge.sign == 1);
}

TEST_CASE("reduce_to_order counts")
{
    std::mt19937_64 rng(3);
    const Zonotope Z = testing::random_zonotope(rng, 2, 6);

    auto [same, none] = reduce_to_order(Z, 3.0);
    CHECK(none.merges.empty());
    CHECK(same.num_generators() == 6);

    auto [R, report] = reduce_to_order(Z, 2.0, 1000);
    CHECK(report.merges.size() == 2);
    CHECK(R.num_generators() == 4);
    CHECK(report.before_order == doctest::Approx(3.0));
    CHECK(report.after_order == doctest::Approx(2.0));
    REQUIRE(report.volume_ratio.has_value());
    CHECK(*report.volume_ratio <= 1.0 + 1e-12);
    CHECK(support_dominates(R, Z, 256, 4));

    CHECK_THROWS(reduce_to_order(Z, 0.25));
    CHECK_THROWS(reduce_once(Zonotope(cols({vec({1, 0})}), Vector::Zero(2))));
}

TEST_CASE("volume ratio of a halving stays in the regression band")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        std::mt19937_64 rng(100 + seed);
        const Zonotope Z = testing::random_zonotope(rng, 2, 8);
        auto [R, report] = reduce_to_order(Z, 2.0);
        const double ratio = volume_exact(R) / volume_exact(Z);
        CAPTURE(seed);
        CHECK(ratio >= 0.6);
        CHECK(ratio <= 1.0 + 1e-12);
    }
}

TEST_CASE("parallel merges preserve volume")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> kappa(0.2, 3.0);
    for (int trial = 0; trial < 30; ++trial)
    {
        Zonotope base = testing::random_zonotope(rng, 3, 4);
        Matrix G(3, 5);
        G.leftCols(4) = base.generators();
        G.col(4) = kappa(rng) * G.col(1);
        const Zonotope Z(G, base.center());
        auto [R, merge] = reduce_once(Z);
        CHECK(merge.i == 1);
        CHECK(merge.j == 4);
        CHECK(merge.sign == 1);
        CHECK(volume_exact(R) == doctest::Approx(volume_exact(Z)).epsilon(1e-9));
    }
}

TEST_CASE("every merge is contained in its input")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(2, 4);
    std::uniform_int_distribution<int> extra(1, 8);
    std::size_t merges = 0;
    std::size_t violations = 0;
    while (merges < 10000)
    {
        const Eigen::Index n = dim(rng);
        Zonotope Z = testing::random_zonotope(rng, n, n + extra(rng));
        while (Z.num_generators() >= 2 && merges < 10000)
        {
            auto [R, merge] = reduce_once(Z);
            violations += support_dominates(R, Z, 256, merges).holds ? 0 : 1;
            Z = std::move(R);
            ++merges;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("higher order loses less volume per merge")
{
    auto mean_ratio = [](double order, std::uint64_t salt) {
        std::mt19937_64 rng(salt);
        double sum = 0.0;
        int count = 0;
        for (Eigen::Index n = 2; n <= 4; ++n)
            for (int t = 0; t < 60; ++t)
            {
                const auto N = static_cast<Eigen::Index>(std::llround(order * static_cast<double>(n)));
                const Zonotope Z = testing::random_zonotope(rng, n, N);
                auto [R, merge] = reduce_once(Z);
                sum += volume_exact(R) / volume_exact(Z);
                ++count;
            }
        return sum / count;
    };
    const double low = mean_ratio(1.5, 21);
    const double high = mean_ratio(4.0, 22);
    MESSAGE("mean ratio at order 1.5: " << low << ", at order 4: " << high);
    CHECK(high > low);
    CHECK(high >= 0.9);
}

}
