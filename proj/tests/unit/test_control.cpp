#include "helpers.hpp"

#include "zonoreach/control.hpp"
#include "zonoreach/errors.hpp"

#include <random>
#include <sstream>

using namespace zonoreach;
using testing::vec;

namespace
{

Zonotope interval(double lo, double hi)
{
    return Box(vec({lo}), vec({hi})).to_zonotope();
}

struct Scalar
{
    SystemModel sys{Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0),
        Vector::Zero(1), interval(-1, 1), DisturbanceSet::from_box(Box(vec({-0.1}), vec({0.1})))};
    BrsSequence seq = compute_brs(sys, interval(-1, 1), 3);
    Controller ctrl{sys, seq};
};

/// Lightly damped oscillator with a single input and a box disturbance.
struct Oscillator
{
    static SystemModel make()
    {
        Matrix A(2, 2), B(2, 1);
        A << 0.98, 0.2, -0.2, 0.98;
        B << 0.02, 0.2;
        return SystemModel(A, B, Matrix::Identity(2, 2), vec({0.01, 0}), interval(-1, 1),
            DisturbanceSet::from_box(Box(vec({-0.03, -0.02}), vec({0.03, 0.02}))));
    }
    SystemModel sys = make();
    BrsSequence seq = [this] {
        BrsOptions opts;
        opts.reduce = ReducePolicy::kAtOrderThreshold;
        opts.max_order = 4.0;
        return compute_brs(sys, Box(vec({-1, -1}), vec({1, 1})).to_zonotope(), 10, opts);
    }();
    Controller ctrl{sys, seq};
};

} // namespace

TEST_SUITE("control")
{

TEST_CASE("scalar input lands in the stored difference")
{
    Scalar s;
    const Vector u = one_step_input(vec({1.5}), 0, s.ctrl);
    CHECK(u(0) >= -1.0 - 1e-9);
    CHECK(u(0) <= -0.6 + 1e-9);
    CHECK(1.5 + u(0) >= -0.9 - 1e-9);
    CHECK(1.5 + u(0) <= 0.9 + 1e-9);
}

TEST_CASE("the center needs no input")
{
    Scalar s;
    InputOptions opts;
    opts.centralize = true;
    for (Eigen::Index k = 0; k < 3; ++k) CHECK(one_step_input(vec({0.0}), k, s.ctrl, opts)(0) == doctest::Approx(0.0));
    CHECK(contains_point(s.seq.diff_under[0], vec({0.0})));
}

TEST_CASE("states outside the set are reported")
{
    Scalar s;
    CHECK_THROWS_AS(one_step_input(vec({2.0}), 0, s.ctrl), NotInBrs);
    CHECK_THROWS_AS(one_step_input(vec({-3.8}), 2, s.ctrl), NotInBrs);
    CHECK_THROWS_AS(one_step_input(vec({0.0}), 3, s.ctrl), std::out_of_range);
    CHECK_THROWS_AS(one_step_input(vec({0.0, 0.0}), 0, s.ctrl), DimensionError);
    CHECK_THROWS_AS(simulate(s.ctrl, vec({3.8}), DisturbancePolicy::kZero, 0), NotInBrs);
}

TEST_CASE("worst-case disturbance still reaches the target")
{
    Scalar s;
    for (double x0 : {3.4, -3.4, 3.7, -3.7, 0.0})
    {
        Vector x = vec({x0});
        for (Eigen::Index t = 0; t < 3; ++t)
        {
            const Vector u = one_step_input(x, 2 - t, s.ctrl);
            const double w = x(0) >= 0 ? 0.1 : -0.1;
            x = s.sys.step(x, u, vec({w}));
        }
        CAPTURE(x0);
        CHECK(std::abs(x(0)) <= 1.0 + 1e-9);
    }
}

TEST_CASE("undisturbed runs succeed")
{
    Matrix A(2, 2), B(2, 1);
    A << 1, 0.5, 0, 1;
    B << 0.125, 0.5;
    const SystemModel sys(A, B, Matrix::Identity(2, 2), Vector::Zero(2), interval(-1, 1),
        DisturbanceSet::from_box(Box(Vector::Zero(2), Vector::Zero(2))));
    const BrsSequence seq = compute_brs(sys, Box(vec({-0.5, -0.5}), vec({0.5, 0.5})).to_zonotope(), 6);
    const Controller ctrl(sys, seq);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial)
    {
        const Vector x0 = sample_in_zonotope(seq.under.back(), rng);
        const Trajectory traj = simulate(ctrl, x0, DisturbancePolicy::kUniform, trial);
        CHECK(traj.success);
        CHECK(traj.length() == 6);
    }
}

TEST_CASE("closed loop is sound, replayable and seeded")
{
    Oscillator o;
    REQUIRE_FALSE(o.seq.empty_from.has_value());
    std::mt19937_64 rng(31);
    for (auto policy : {DisturbancePolicy::kUniform, DisturbancePolicy::kVertex, DisturbancePolicy::kZero})
    {
        int successes = 0;
        for (int trial = 0; trial < 40; ++trial)
        {
            const Vector x0 = sample_in_zonotope(o.seq.under.back(), rng);
            const Trajectory traj = simulate(o.ctrl, x0, policy, trial);
            successes += traj.success ? 1 : 0;
            CHECK(traj.replay_error(o.sys) <= 1e-9);
            REQUIRE(traj.states.size() == 11);
        }
        CAPTURE(to_string(policy));
        CHECK(successes == 40);
    }

    const Vector x0 = o.seq.under.back().center();
    const Trajectory a = simulate(o.ctrl, x0, DisturbancePolicy::kUniform, 99);
    const Trajectory b = simulate(o.ctrl, x0, DisturbancePolicy::kUniform, 99);
    for (std::size_t t = 0; t < a.states.size(); ++t) CHECK(testing::near(a.states[t], b.states[t], 0.0));
}

TEST_CASE("one input works for every disturbance vertex")
{
    Oscillator o;
    const VPolytope& V = o.sys.W().vrep;
    std::mt19937_64 rng(37);
    for (Eigen::Index k = 0; k < o.ctrl.horizon(); ++k)
    {
        for (int s = 0; s < 10; ++s)
        {
            const Vector x = sample_in_zonotope(o.seq.under[static_cast<std::size_t>(k) + 1], rng);
            const Vector u = one_step_input(x, k, o.ctrl);
            for (Eigen::Index j = 0; j < V.num_vertices(); ++j)
                CHECK(contains_point(o.seq.under[static_cast<std::size_t>(k)], o.sys.step(x, u, V.vertices.col(j)), 1e-6));
        }
    }
}

TEST_CASE("disturbance draws respect the set")
{
    const DisturbanceSet W = DisturbanceSet::from_box(Box(vec({-1, 0}), vec({1, 2})));
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i)
    {
        const Vector w = draw_disturbance(W, DisturbancePolicy::kUniform, rng);
        CHECK(W.hrep.contains(w));
        const Vector v = draw_disturbance(W, DisturbancePolicy::kVertex, rng);
        CHECK(std::abs(std::abs(v(0)) - 1.0) < 1e-12);
        CHECK((v(1) == 0.0 || v(1) == 2.0));
    }
    CHECK(draw_disturbance(W, DisturbancePolicy::kZero, rng).isZero());

    // Triangle given only as a polytope: rejection sampling must stay inside.
    Matrix H(3, 2);
    H << -1, 0, 0, -1, 1, 1;
    Matrix Vt(2, 3);
    Vt << 0, 1, 0, 0, 0, 1;
    const DisturbanceSet T = DisturbanceSet::from_polytope(HPolytope{H, vec({0, 0, 1})}, VPolytope{Vt});
    for (int i = 0; i < 200; ++i) CHECK(T.hrep.contains(draw_disturbance(T, DisturbancePolicy::kUniform, rng), 1e-12));

    CHECK(parse_disturbance_policy("vertex") == DisturbancePolicy::kVertex);
    CHECK(parse_disturbance_policy(to_string(DisturbancePolicy::kUniform)) == DisturbancePolicy::kUniform);
    CHECK_THROWS(parse_disturbance_policy("adversary"));
}

TEST_CASE("trajectory csv layout")
{
    Scalar s;
    const Trajectory traj = simulate(s.ctrl, vec({2.0}), DisturbancePolicy::kZero, 0);
    std::ostringstream os;
    traj.write_csv(os, s.seq.under[0]);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,x1,u1,w1,in_target");
    int rows = 0;
    std::string last;
    while (std::getline(is, line))
    {
        ++rows;
        last = line;
    }
    CHECK(rows == 4);
    CHECK(last.rfind("3,", 0) == 0);
    CHECK(last.substr(last.size() - 4) == ",,,1");
}

}
