#include "helpers.hpp"

#include "zonoreach/bench.hpp"
#include "zonoreach/cases.hpp"
#include "zonoreach/errors.hpp"
#include "zonoreach/problem.hpp"
#include "zonoreach/reduction.hpp"

#include <cmath>
#include <limits>
#include <sstream>

using namespace zonoreach;
using testing::vec;
using nlohmann::json;

namespace
{

const char* kScalarProblem = R"({
  "schema": "zonoreach/1",
  "name": "scalar",
  "system": {"A": [[1]], "B": [[1]], "E": [[1]], "K": [0]},
  "U": {"center": [0], "generators": [[1]]},
  "W": {"box": {"lo": [-0.1], "hi": [0.1]}},
  "target": {"center": [0], "generators": [[1]]},
  "horizon": 3,
  "options": {"method": "min-out", "reduce": "never", "max_order": 6, "seed": 4,
              "tolerances": {"feasibility": "1e-7"}}
})";

std::string schema_path(const std::string& text)
{
    try
    {
        parse_problem(text);
    }
    catch (const SchemaError& e)
    {
        return e.path();
    }
    return "<accepted>";
}

std::string with(const std::string& from, const std::string& to)
{
    std::string s = kScalarProblem;
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

} // namespace

TEST_SUITE("problem")
{

TEST_CASE("decimal formatting round-trips exactly")
{
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 1e308, 0.0, 123456789.125, std::nextafter(1.0, 2.0)})
    {
        const std::string s = format_double(x);
        CHECK(parse_double(json(s), "x") == x);
        CHECK(parse_double(json(x), "x") == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK_THROWS_AS(parse_double(json("abc"), "x"), SchemaError);
    CHECK_THROWS_AS(parse_double(json(true), "x"), SchemaError);
}

TEST_CASE("problem files round-trip bit for bit")
{
    const Problem p = parse_problem(kScalarProblem);
    CHECK(p.name == "scalar");
    CHECK(p.horizon == 3);
    CHECK(p.options.seed == 4);
    CHECK(p.options.reduce == ReducePolicy::kNever);
    const std::string once = problem_to_json(p).dump(2);
    const Problem q = parse_problem(once);
    CHECK(problem_to_json(q).dump(2) == once);

    for (const auto& name : builtin_case_names())
    {
        CAPTURE(name);
        const Problem c = builtin_case(name);
        const std::string text = problem_to_json(c).dump();
        const Problem back = parse_problem(text);
        CHECK(back.A == c.A);
        CHECK(back.B == c.B);
        CHECK(back.E == c.E);
        CHECK(back.target.generators() == c.target.generators());
        CHECK(problem_to_json(back).dump() == text);
    }
}

TEST_CASE("schema errors name the offending field")
{
    CHECK(schema_path(with("\"zonoreach/1\"", "\"zonoreach/9\"")) == "schema");
    CHECK(schema_path(with("\"A\": [[1]]", "\"A\": [[1, 2]]")) == "system.A");
    CHECK(schema_path(with("\"A\": [[1]]", "\"A\": [[0]]")) == "system.A");
    CHECK(schema_path(with("\"B\": [[1]]", "\"B\": [[\"x\"]]")).rfind("system.B", 0) == 0);
    CHECK(schema_path(with("\"U\": {\"center\": [0], \"generators\": [[1]]}", "\"U\": {\"center\": [0, 0], \"generators\": [[1], [1]]}")) == "U");
    CHECK(schema_path(with("\"box\": {\"lo\": [-0.1], \"hi\": [0.1]}", "\"ball\": 1")) == "W");
    CHECK(schema_path(with("\"horizon\": 3", "\"horizon\": -1")) == "horizon");
    CHECK(schema_path(with("\"never\"", "\"sometimes\"")) == "options.reduce");
    CHECK(schema_path(with("\"min-out\"", "\"best\"")) == "options.method");

    // Unbounded polytope W is caught at load time.
    CHECK(schema_path(with("\"box\": {\"lo\": [-0.1], \"hi\": [0.1]}",
              "\"hrep\": {\"H\": [[1]], \"h\": [1]}, \"vrep\": [[0], [1]]"))
        == "W");

    try
    {
        parse_problem("{\n  \"schema\": \"zonoreach/1\",\n  \"system\": [1,\n}");
        FAIL("accepted malformed JSON");
    }
    catch (const SchemaError& e)
    {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("singular A is rejected with an explanation")
{
    try
    {
        parse_problem(with("\"A\": [[1]]", "\"A\": [[1e-12]]"));
        FAIL("accepted singular A");
    }
    catch (const SchemaError& e)
    {
        CHECK(e.path() == "system.A");
        CHECK(std::string(e.what()).find("invertible") != std::string::npos);
    }
}

TEST_CASE("built-in cases")
{
    const Problem lat = builtin_case("lateral");
    CHECK(lat.A(0, 0) == 1.004);
    CHECK(lat.A(5, 4) == -37.86);
    CHECK(lat.A.rows() == 6);
    CHECK(lat.B.cols() == 2);
    CHECK(lat.E == Matrix::Identity(6, 6));
    CHECK(lat.W.box->upper(5) == 0.07229);

    const Problem lon = builtin_case("longitudinal");
    CHECK(lon.B(0, 0) == 1.504);
    CHECK(lon.B(0, 1) == 7.349e-5);
    CHECK(lon.W.box->upper(4) == 1.373);

    const Problem integ = builtin_case("integrator10d");
    CHECK(integ.horizon == 50);
    CHECK(integ.A.rows() == 10);
    CHECK(integ.B.cols() == 3);
    CHECK(integ.E.cols() == 10);
    CHECK(integ.model().state_dim() == 10);

    CHECK_THROWS_AS(builtin_case("glider"), std::invalid_argument);
}

TEST_CASE("zero-order hold of a double integrator")
{
    Matrix Ac(2, 2), Bc(2, 1);
    Ac << 0, 1, 0, 0;
    Bc << 0, 1;
    const auto [A, B] = zero_order_hold(Ac, Bc, 0.5);
    CHECK(A(0, 0) == doctest::Approx(1.0));
    CHECK(A(0, 1) == doctest::Approx(0.5));
    CHECK(A(1, 0) == doctest::Approx(0.0));
    CHECK(B(0, 0) == doctest::Approx(0.125));
    CHECK(B(1, 0) == doctest::Approx(0.5));
}

TEST_CASE("benchmarks are deterministic and independent of threads")
{
    BenchSpec spec;
    spec.count = 12;
    spec.seed = 42;
    spec.threads = 1;
    std::ostringstream serial, parallel, again;
    write_minkdiff_csv(serial, run_minkdiff_bench(spec));
    spec.threads = 4;
    write_minkdiff_csv(parallel, run_minkdiff_bench(spec));
    write_minkdiff_csv(again, run_minkdiff_bench(spec));
    CHECK(serial.str() == parallel.str());
    CHECK(serial.str() == again.str());
    CHECK(serial.str().rfind("instance,n,N,M,N_W,method,status,variables,aux_variables,constraints,volume,r2\n", 0) == 0);

    std::ostringstream r1, r2;
    write_reduce_csv(r1, run_reduce_bench(spec));
    spec.threads = 1;
    write_reduce_csv(r2, run_reduce_bench(spec));
    CHECK(r1.str() == r2.str());
}

TEST_CASE("bench variable counts follow the closed forms")
{
    BenchSpec spec;
    spec.count = 10;
    spec.seed = 5;
    int solved = 0;
    for (const auto& r : run_minkdiff_bench(spec))
    {
        CAPTURE(r.instance);
        if (r.status != "ok") continue;
        ++solved;
        if (r.method == "min-out")
            CHECK(r.variables == r.N * r.M + r.N + r.n);
        else
            CHECK(r.variables == r.N * (r.N + r.N_W) + 2 * r.N + r.n);
    }
    CHECK(solved >= 10);
}

TEST_CASE("two methods agree exactly on planar boxes")
{
    for (std::uint64_t id = 0; id < 10; ++id)
    {
        const DiffInstance inst = random_box_instance(7, id, 2);
        const ImageSet EW = image_of(inst.E, DisturbanceSet::from_box(inst.W));
        const ScaledTemplate mo = outer_approx_min_out(inst.Z, EW.vrep, default_b_weights(inst.Z, inst.E));
        const ScaledTemplate sa = under_approx_sadraddini(inst.Z, *EW.zono);
        const double v_mo = volume_exact(aligned_diff(inst.Z, mo.alpha, mo.center));
        const double v_sa = volume_exact(sa.zonotope());
        CHECK(std::sqrt(v_sa / v_mo) == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("parallel generator pairs reduce with ratio one")
{
    std::mt19937_64 rng(19);
    for (int t = 0; t < 20; ++t)
    {
        const Zonotope base = testing::random_zonotope(rng, 2, 3);
        Matrix G(2, 4);
        G.leftCols(3) = base.generators();
        G.col(3) = -0.5 * G.col(0);
        const Zonotope Z(G, base.center());
        auto [R, merge] = reduce_once(Z);
        CHECK(merge.sign == -1);
        CHECK(volume_exact(R) / volume_exact(Z) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

}
