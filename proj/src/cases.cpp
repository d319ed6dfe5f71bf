#include "zonoreach/cases.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <numbers>
#include <stdexcept>

namespace zonoreach
{

namespace
{

Vector vec(std::initializer_list<double> xs)
{
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

Zonotope box_zonotope(const Vector& lo, const Vector& hi)
{
    return Box(lo, hi).to_zonotope();
}

ProblemOptions aircraft_options()
{
    ProblemOptions o;
    o.method = UnderMethod::kMinOut;
    o.reduce = ReducePolicy::kAtOrderThreshold;
    o.max_order = 6.0;
    o.threshold_order = 6.0;
    return o;
}

Problem lateral()
{
    constexpr double pi = std::numbers::pi;
    Problem p;
    p.name = "lateral";
    p.A.resize(6, 6);
    p.A << 1.004, 0.1408, 0.3095, -0.3112, 0, 0,
        0.03015, 1.177, 0.6016, -0.6029, 0, 0,
        -0.02448, -0.1877, 0.3803, 0.5642, 0, 0,
        -0.01057, -0.09588, -0.3343, 1.277, 0, 0,
        0.0003943, 0.0095901, -0.005341, -0.007447, 1, 0,
        -0.2579, -23.32, -51.03, 61.35, -37.86, 1;
    p.B.resize(6, 2);
    p.B << -0.1189, 0.007812,
        -0.1217, 0.2643,
        0.01773, -0.2219,
        -0.02882, -0.09982,
        -0.0005607, 0.002437,
        0.1120, -0.5785;
    p.E = Matrix::Identity(6, 6);
    p.K = Vector::Zero(6);
    p.U = box_zonotope(vec({-pi, -pi}), vec({pi, pi}));
    const Vector w = vec({0.037, 0.00166, 0.0078, 0.00124, 0.00107, 0.07229});
    p.W.box = Box(-w, w);
    p.target = box_zonotope(vec({-1, -1, -1, -pi / 5, -pi / 5, -2}), vec({1, 1, 1, pi / 5, pi / 5, 2}));
    p.horizon = 50;
    p.options = aircraft_options();
    return p;
}

Problem longitudinal()
{
    constexpr double pi = std::numbers::pi;
    Problem p;
    p.name = "longitudinal";
    p.A.resize(6, 6);
    p.A << 0.9911, -0.04858, -0.01709, -0.4883, 0, 0,
        0.0005870, 0.9968, 0.5168, -0.0001398, 0, 0,
        0.0002070, -0.001123, 0.9936, -5.092e-5, 0, 0,
        1.907, -1.032, 0.01832, 1, 0, 0,
        -0.04601, 0.001125, 0.0002638, 0.01130, 1, 0,
        -5.095e-5, -0.1874, -0.01185, 4.004, 0, 1;
    p.B.resize(6, 2);
    p.B << 1.504, 7.349e-5,
        -0.04645, -3.421e-6,
        -0.009812, -1.488e-6,
        -9.080e-5, -1.371e-8,
        -0.03479, -1.700e-6,
        0.004171, 2.913e-7;
    p.E = Matrix::Identity(6, 6);
    p.K = Vector::Zero(6);
    p.U = box_zonotope(vec({-0.262, 0}), vec({0.524, 1e4}));
    const Vector w = vec({0.3025, 0.4025, 0.01213, 0.006750, 1.373, 1.331});
    p.W.box = Box(-w, w);
    p.target = box_zonotope(vec({40, 0, -0.1, -pi, 0, 260}), vec({60, 10, 0.1, pi, 800, 390}));
    p.horizon = 50;
    p.options = aircraft_options();
    return p;
}

Problem integrator10d()
{
    // States x1..x10 (0-based below); inputs drive x2, x4, x6.
    Matrix Ac = Matrix::Zero(10, 10);
    Ac(0, 1) = 1;
    Ac(0, 6) = 1;
    Ac(0, 9) = 1;
    Ac(2, 3) = 1;
    Ac(2, 7) = -1;
    Ac(4, 5) = 1;
    Ac(4, 8) = 1;
    Ac(6, 6) = -0.01;
    Ac(6, 7) = 1;
    Ac(7, 7) = -1;
    Ac(7, 6) = -0.01;
    Ac(8, 6) = -1e-4;
    Ac(8, 9) = 2;
    Ac(9, 8) = -2;
    Ac(9, 9) = -1e-4;

    Matrix Bc = Matrix::Zero(10, 3);
    Bc(1, 0) = 1;
    Bc(3, 1) = 1;
    Bc(5, 2) = 1;

    // Inputs and disturbances share one hold so E is discretized like B.
    Matrix BEc(10, 13);
    BEc << Bc, Matrix::Identity(10, 10);
    auto [Ad, BEd] = zero_order_hold(Ac, BEc, 0.5);

    Problem p;
    p.name = "integrator10d";
    p.A = Ad;
    p.B = BEd.leftCols(3);
    p.E = BEd.rightCols(10);
    p.K = Vector::Zero(10);
    p.U = box_zonotope(Vector::Constant(3, -0.5), Vector::Constant(3, 0.5));
    const Vector w = vec({0.12, 0.2, 0.12, 0.2, 0.12, 0.2, 0.1, 0.1, 0.1, 0.1});
    p.W.box = Box(-w, w);
    Vector lo = Vector::Constant(10, -0.5), hi = Vector::Constant(10, 0.5);
    for (int i : {0, 2, 4})
    {
        lo(i) = 9.5;
        hi(i) = 10.5;
    }
    p.target = box_zonotope(lo, hi);
    p.horizon = 50;
    p.options.method = UnderMethod::kMinOut;
    p.options.reduce = ReducePolicy::kAtOrderThreshold;
    p.options.max_order = 4.0;
    p.options.threshold_order = 4.0;
    return p;
}

} // namespace

std::vector<std::string> builtin_case_names()
{
    return {"lateral", "longitudinal", "integrator10d"};
}

std::pair<Matrix, Matrix> zero_order_hold(const Matrix& Ac, const Matrix& Bc, double dt)
{
    const Eigen::Index n = Ac.rows();
    const Eigen::Index m = Bc.cols();
    Matrix M = Matrix::Zero(n + m, n + m);
    M.topLeftCorner(n, n) = Ac * dt;
    M.topRightCorner(n, m) = Bc * dt;
    const Matrix Phi = M.exp();
    return {Phi.topLeftCorner(n, n), Phi.topRightCorner(n, m)};
}

Problem builtin_case(const std::string& name)
{
    if (name == "lateral") return lateral();
    if (name == "longitudinal") return longitudinal();
    if (name == "integrator10d") return integrator10d();
    throw std::invalid_argument("unknown case '" + name + "' (expected lateral, longitudinal or integrator10d)");
}

} // namespace zonoreach
