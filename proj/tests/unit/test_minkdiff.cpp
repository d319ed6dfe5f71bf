#include "helpers.hpp"
#include "../oracles.hpp"

#include "zonoreach/bench.hpp"
#include "zonoreach/errors.hpp"
#include "zonoreach/minkdiff.hpp"

using namespace zonoreach;
using testing::cols;
using testing::unit_box;
using testing::vec;

namespace
{

DisturbanceSet box_w(double r, Eigen::Index n = 2)
{
    return DisturbanceSet::from_box(Box(Vector::Constant(n, -r), Vector::Constant(n, r)));
}

} // namespace

TEST_SUITE("minkdiff")
{

TEST_CASE("variable count formulas")
{
    CHECK(min_out_variable_count(3, 4, 2) == 3 * 4 + 3 + 2);
    CHECK(sadraddini_variable_count(3, 2, 2) == 3 * 5 + 2 * 3 + 2);
}

TEST_CASE("min-out examples")
{
    const Zonotope Z = unit_box(2);
    const DisturbanceSet W = box_w(0.2);
    const ScaledTemplate t = outer_approx_min_out(Z, Matrix::Identity(2, 2), W.vrep, Vector::Ones(2));
    CHECK(testing::near(t.alpha, vec({0.2, 0.2}), 1e-9));
    CHECK(testing::near(t.center, vec({0, 0}), 1e-9));
    CHECK(t.size.variables == min_out_variable_count(2, 4, 2));
    CHECK(t.size.equality_rows == 2 * 4);
    CHECK(t.size.inequality_rows == 2 * 2 * 4);

    VPolytope origin;
    origin.vertices = Matrix::Zero(2, 1);
    const ScaledTemplate z = outer_approx_min_out(Z, origin, Vector::Ones(2));
    CHECK(testing::near(z.alpha, vec({0, 0}), 1e-9));
    CHECK(testing::near(z.center, vec({0, 0}), 1e-9));

    CHECK_THROWS_AS(outer_approx_min_out(Z, Matrix::Identity(2, 2), box_w(2.0).vrep, Vector::Ones(2)),
        EmptyUnderApprox);
    CHECK_THROWS(outer_approx_min_out(Z, W.vrep, vec({1.0, 0.0})));
}

TEST_CASE("max-in examples")
{
    const Zonotope Z = unit_box(2);
    const ImageSet EW = image_of(Matrix::Identity(2, 2), box_w(0.2));
    REQUIRE(EW.hrep);
    const ScaledTemplate t = inner_approx_max_in(Z, *EW.hrep, Vector::Ones(2));
    CHECK(testing::near(t.alpha, vec({0.2, 0.2}), 1e-6));
    CHECK(testing::near(t.center, vec({0, 0}), 1e-6));
    CHECK(max_in_certificate(t, *EW.hrep));

    // EW a single point p: alpha = 0, center = p.
    const DisturbanceSet P = DisturbanceSet::from_box(Box(vec({0.3, -0.1}), vec({0.3, -0.1})));
    const ImageSet EP = image_of(Matrix::Identity(2, 2), P);
    const ScaledTemplate tp = inner_approx_max_in(Z, *EP.hrep, Vector::Ones(2));
    CHECK(testing::near(tp.alpha, vec({0, 0}), 1e-9));
    CHECK(testing::near(tp.center, vec({0.3, -0.1}), 1e-7));

    // A single-generator template in 2D.
    const Zonotope seg(cols({vec({1, 0})}), vec({0, 0}));
    const ImageSet E3 = image_of(Matrix::Identity(2, 2), box_w(0.3));
    const ScaledTemplate ts = inner_approx_max_in(seg, *E3.hrep, Vector::Ones(1));
    CHECK(ts.alpha(0) == doctest::Approx(0.3).epsilon(1e-6));
    // Only the coordinate along the generator is pinned down.
    CHECK(std::abs(ts.center(0)) <= 1e-6);
    CHECK(max_in_certificate(ts, *E3.hrep));
}

TEST_CASE("sandwich examples")
{
    const ImageSet EW = image_of(Matrix::Identity(2, 2), box_w(0.2));
    const DiffResult r = sandwich_diff(unit_box(2), Matrix::Identity(2, 2), EW);
    CHECK(testing::near(r.under.generators(), 0.8 * Matrix::Identity(2, 2), 1e-6));
    CHECK(testing::near(r.over.generators(), 0.8 * Matrix::Identity(2, 2), 1e-6));

    const ImageSet zero = image_of(Matrix::Identity(2, 2), box_w(0.0));
    const DiffResult rz = sandwich_diff(unit_box(2), Matrix::Identity(2, 2), zero);
    CHECK(testing::near(rz.under.generators(), Matrix::Identity(2, 2), 1e-9));
    CHECK(testing::near(rz.over.generators(), Matrix::Identity(2, 2), 1e-9));

    const Zonotope Z(cols({vec({1, 0}), vec({0, 1}), vec({1, 1})}), vec({0, 0}));
    const ImageSet small = image_of(Matrix::Identity(2, 2), box_w(0.1));
    const DiffResult s = sandwich_diff(Z, Matrix::Identity(2, 2), small);
    CHECK(support_dominates(s.under, s.over, 256, 3));
    const Zonotope EWz = *small.zono;
    for (const auto& l : sample_directions(2, 256, 4))
        CHECK(support(s.under, l) <= support(Z, l) - support(EWz, l) + 1e-7);
}

TEST_CASE("sadraddini examples")
{
    const Zonotope Z = unit_box(2);
    const Zonotope W = Box(Vector::Constant(2, -0.2), Vector::Constant(2, 0.2)).to_zonotope();
    const ScaledTemplate t = under_approx_sadraddini(Z, Matrix::Identity(2, 2), W);
    CHECK(testing::near(t.alpha, vec({0.8, 0.8}), 1e-7));
    CHECK(testing::near(t.center, vec({0, 0}), 1e-7));
    CHECK(t.size.variables == sadraddini_variable_count(2, 2, 2));

    const ScaledTemplate full = under_approx_sadraddini(Z, Zonotope::point(Vector::Zero(2)));
    CHECK(testing::near(full.alpha, vec({1, 1}), 1e-7));
    CHECK(full.size.variables == sadraddini_variable_count(2, 0, 2));

    const Zonotope huge = Box(Vector::Constant(2, -2), Vector::Constant(2, 2)).to_zonotope();
    CHECK_THROWS_AS(under_approx_sadraddini(Z, Matrix::Identity(2, 2), huge), EmptyUnderApprox);
}

TEST_CASE("b weight heuristic")
{
    const Zonotope axis(cols({vec({1, 0})}), vec({0, 0}));
    CHECK(default_b_weights(axis, Matrix::Identity(2, 2))(0) == doctest::Approx(1e-6));
    const Zonotope diag(cols({vec({1, 1})}), vec({0, 0}));
    CHECK(default_b_weights(diag, Matrix::Identity(2, 2))(0) == doctest::Approx(1.0));
    Matrix E(2, 2);
    E << 1, 2, 2, 4;
    const Zonotope g(cols({vec({3, 4})}), vec({0, 0}));
    CHECK(default_b_weights(g, E)(0) == doctest::Approx(5.0));
    // T = E^{-1} = diag(0.5, 1) maps (1, 1) to (0.5, 1).
    const Matrix scaled = cols({vec({2, 0}), vec({0, 1})});
    CHECK(default_b_weights(diag, scaled)(0) == doctest::Approx(0.5));
    CHECK(default_d_weights(g)(0) == doctest::Approx(5.0));
}

TEST_CASE("non-invertible E needs an explicit image H-rep")
{
    Matrix E(2, 1);
    E << 1, 1;
    const DisturbanceSet W = DisturbanceSet::from_box(Box(vec({-0.1}), vec({0.1})));
    const ImageSet EW = image_of(E, W);
    CHECK_FALSE(EW.hrep);
    CHECK_THROWS_AS(sandwich_diff(unit_box(2), E, EW), std::invalid_argument);
    CHECK(EW.vrep.num_vertices() == 2);
}

TEST_CASE("boxes are exact for every method")
{
    for (std::uint64_t id = 0; id < 40; ++id)
    {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(id % 5);
        const DiffInstance inst = random_box_instance(7, id, n);
        const DisturbanceSet W = DisturbanceSet::from_box(inst.W);
        const ImageSet EW = image_of(inst.E, W);
        const Vector r = inst.Z.generators().diagonal();
        const Vector rho = inst.W.radius();
        const Vector expect_c = inst.Z.center() - inst.W.center();
        const DiffResult d = sandwich_diff(inst.Z, inst.E, EW);
        CHECK(testing::near(d.under.generators().diagonal(), r - rho, 1e-6));
        CHECK(testing::near(d.over.generators().diagonal(), r - rho, 1e-6));
        CHECK(testing::near(d.under.center(), expect_c, 1e-6));
        CHECK(testing::near(d.over.center(), expect_c, 1e-6));
        const Zonotope s = under_approx_sadraddini(inst.Z, *EW.zono).zonotope();
        CHECK(testing::near(s.generators().diagonal(), r - rho, 1e-6));
        CHECK(testing::near(s.center(), expect_c, 1e-6));
    }
}

TEST_CASE("certificates on random instances")
{
    for (std::uint64_t id = 0; id < 60; ++id)
    {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(id % 3);
        const DiffInstance inst = random_diff_instance(5, id, n, 2.0 + static_cast<double>(id % 3));
        const DisturbanceSet W = DisturbanceSet::from_box(inst.W);
        const ImageSet EW = image_of(inst.E, W);
        DiffResult d;
        try
        {
            d = sandwich_diff(inst.Z, inst.E, EW);
        }
        catch (const EmptyUnderApprox&)
        {
            continue;
        }
        const Zonotope outer = d.outer_template.zonotope();
        for (Eigen::Index j = 0; j < EW.vrep.num_vertices(); ++j) CHECK(contains_point(outer, EW.vrep.vertices.col(j)));
        CHECK(max_in_certificate(d.inner_template, *EW.hrep));
        CHECK(support_dominates(d.under, d.over, 64 * static_cast<std::size_t>(n), id));
        for (const auto& l : sample_directions(n, 64, id))
            CHECK(support(d.under, l) <= support(inst.Z, l) - support(*EW.zono, l) + 1e-7);

        const ScaledTemplate s = under_approx_sadraddini(inst.Z, *EW.zono);
        CHECK(support_dominates(minkowski_sum(s.zonotope(), *EW.zono), inst.Z, 64 * static_cast<std::size_t>(n), id));
        CHECK(s.size.variables == sadraddini_variable_count(inst.Z.num_generators(), EW.zono->num_generators(), n));
    }
}

TEST_CASE("polytope disturbance sets")
{
    // Triangle W with vertices (0.1, 0), (-0.1, 0.1), (-0.1, -0.1).
    HPolytope H;
    H.H.resize(3, 2);
    H.H << -1, 0, 1, 2, 1, -2;
    H.h = vec({0.1, 0.1, 0.1});
    VPolytope V;
    V.vertices = cols({vec({0.1, 0}), vec({-0.1, 0.1}), vec({-0.1, -0.1})});
    const DisturbanceSet W = DisturbanceSet::from_polytope(H, V);
    const ImageSet EW = image_of(Matrix::Identity(2, 2), W);
    const DiffResult d = sandwich_diff(unit_box(2), Matrix::Identity(2, 2), EW);
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(contains_point(d.outer_template.zonotope(), V.vertices.col(j)));
    CHECK(max_in_certificate(d.inner_template, *EW.hrep));
    CHECK(support_dominates(d.under, d.over, 128, 1));

    HPolytope open;
    open.H = Matrix::Identity(2, 2);
    open.h = vec({1, 1});
    CHECK_THROWS(DisturbanceSet::from_polytope(open, V));
}

}
