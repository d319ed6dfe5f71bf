#include "zonoreach/bench.hpp"
#include "zonoreach/brs.hpp"
#include "zonoreach/cases.hpp"
#include "zonoreach/control.hpp"
#include "zonoreach/errors.hpp"
#include "zonoreach/minkdiff.hpp"
#include "zonoreach/problem.hpp"
#include "zonoreach/reduction.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

namespace py = pybind11;
using namespace zonoreach;

namespace
{

/// Controller plus the model and chain it points into.
struct OwnedController
{
    SystemModel sys;
    BrsSequence seq;
    std::unique_ptr<Controller> ctrl;

    OwnedController(SystemModel s, BrsSequence q) : sys(std::move(s)), seq(std::move(q))
    {
        ctrl = std::make_unique<Controller>(sys, seq);
    }
};

DisturbanceSet box_set(const Vector& lo, const Vector& hi)
{
    return DisturbanceSet::from_box(Box(lo, hi));
}

} // namespace

PYBIND11_MODULE(_zonoreach, m)
{
    m.doc() = "Zonotopic backward reachable sets and one-step controllers";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<EmptyUnderApprox>(m, "EmptyUnderApprox", PyExc_RuntimeError);
    py::register_exception<VolumeTooLarge>(m, "VolumeTooLarge", PyExc_RuntimeError);
    py::register_exception<NotInBrs>(m, "NotInBrs", PyExc_RuntimeError);

    py::class_<Zonotope>(m, "Zonotope")
        .def(py::init<Matrix, Vector>(), py::arg("generators"), py::arg("center"))
        .def_static("box", [](const Vector& lo, const Vector& hi) { return Box(lo, hi).to_zonotope(); },
            py::arg("lower"), py::arg("upper"))
        .def_property_readonly("generators", &Zonotope::generators)
        .def_property_readonly("center", &Zonotope::center)
        .def_property_readonly("dim", &Zonotope::dim)
        .def_property_readonly("num_generators", &Zonotope::num_generators)
        .def_property_readonly("order", &Zonotope::order)
        .def("bounding_box", &Zonotope::bounding_box)
        .def("support", [](const Zonotope& Z, const Vector& d) { return support(Z, d); }, py::arg("direction"))
        .def("contains", [](const Zonotope& Z, const Vector& x, double tol) { return contains_point(Z, x, tol); },
            py::arg("x"), py::arg("tol") = 1e-7)
        .def("volume", [](const Zonotope& Z) { return volume_exact(Z); })
        .def("__repr__", [](const Zonotope& Z) {
            std::ostringstream os;
            os << "Zonotope(dim=" << Z.dim() << ", generators=" << Z.num_generators() << ")";
            return os.str();
        });

    m.def("linear_map", &linear_map, py::arg("A"), py::arg("Z"));
    m.def("minkowski_sum", &minkowski_sum);
    m.def("aligned_diff", &aligned_diff, py::arg("Z"), py::arg("alpha"), py::arg("center"), py::arg("tol") = 1e-9);
    m.def("volume", [](const Zonotope& Z) { return volume_exact(Z); });
    m.def("support_dominates", [](const Zonotope& inner, const Zonotope& outer, std::size_t n_dirs, std::uint64_t seed,
                                   double tol) { return support_dominates(inner, outer, n_dirs, seed, tol).holds; },
        py::arg("inner"), py::arg("outer"), py::arg("n_dirs") = 256, py::arg("seed") = 0, py::arg("tol") = 1e-7);

    py::class_<DiffResult>(m, "DiffResult")
        .def_readonly("under", &DiffResult::under)
        .def_readonly("over", &DiffResult::over)
        .def_property_readonly("outer_alpha", [](const DiffResult& r) { return r.outer_template.alpha; })
        .def_property_readonly("inner_alpha", [](const DiffResult& r) { return r.inner_template.alpha; });

    m.def(
        "minkowski_difference",
        [](const Zonotope& Z, const Matrix& E, const Vector& w_lo, const Vector& w_hi) {
            return sandwich_diff(Z, E, image_of(E, box_set(w_lo, w_hi)));
        },
        py::arg("Z"), py::arg("E"), py::arg("w_lower"), py::arg("w_upper"),
        "Under and over approximations of Z - E W for a box W.");
    m.def(
        "sadraddini_under",
        [](const Zonotope& Z, const Matrix& E, const Vector& w_lo, const Vector& w_hi) {
            return under_approx_sadraddini(Z, E, Box(w_lo, w_hi).to_zonotope()).zonotope();
        },
        py::arg("Z"), py::arg("E"), py::arg("w_lower"), py::arg("w_upper"));

    py::class_<MergeRecord>(m, "MergeRecord")
        .def_readonly("i", &MergeRecord::i)
        .def_readonly("j", &MergeRecord::j)
        .def_readonly("sign", &MergeRecord::sign);
    m.def("reduce_once", &reduce_once, py::arg("Z"));
    m.def(
        "reduce_to_order",
        [](const Zonotope& Z, double order) { return reduce_to_order(Z, order).first; },
        py::arg("Z"), py::arg("order"));

    py::class_<SystemModel>(m, "SystemModel")
        .def(py::init([](Matrix A, Matrix B, Matrix E, Vector K, Zonotope U, const Vector& w_lo, const Vector& w_hi) {
            return SystemModel(std::move(A), std::move(B), std::move(E), std::move(K), std::move(U),
                box_set(w_lo, w_hi));
        }),
            py::arg("A"), py::arg("B"), py::arg("E"), py::arg("K"), py::arg("U"), py::arg("w_lower"),
            py::arg("w_upper"))
        .def("step", &SystemModel::step, py::arg("x"), py::arg("u"), py::arg("w"))
        .def_property_readonly("state_dim", &SystemModel::state_dim);

    py::class_<BrsSequence>(m, "BrsSequence")
        .def_readonly("under", &BrsSequence::under)
        .def_readonly("over", &BrsSequence::over)
        .def_readonly("diff_under", &BrsSequence::diff_under)
        .def_readonly("empty_from", &BrsSequence::empty_from)
        .def_property_readonly("horizon", &BrsSequence::horizon);

    m.def(
        "compute_brs",
        [](const SystemModel& sys, const Zonotope& Z0, Eigen::Index k, const std::string& method,
            const std::string& reduce, double max_order, bool compute_over) {
            BrsOptions opts;
            opts.method = parse_under_method(method);
            opts.reduce = parse_reduce_policy(reduce);
            opts.max_order = max_order;
            opts.threshold_order = max_order;
            opts.compute_over = compute_over;
            return compute_brs(sys, Z0, k, opts);
        },
        py::arg("system"), py::arg("target"), py::arg("horizon"), py::arg("method") = "min-out",
        py::arg("reduce") = "never", py::arg("max_order") = 6.0, py::arg("compute_over") = true);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("states", &Trajectory::states)
        .def_readonly("inputs", &Trajectory::inputs)
        .def_readonly("disturbances", &Trajectory::disturbances)
        .def_readonly("success", &Trajectory::success);

    py::class_<OwnedController>(m, "Controller")
        .def(py::init<SystemModel, BrsSequence>(), py::arg("system"), py::arg("sequence"))
        .def_property_readonly("horizon", [](const OwnedController& c) { return c.ctrl->horizon(); })
        .def(
            "input",
            [](const OwnedController& c, const Vector& x, Eigen::Index k, bool centralize) {
                InputOptions opts;
                opts.centralize = centralize;
                return one_step_input(x, k, *c.ctrl, opts);
            },
            py::arg("x"), py::arg("k"), py::arg("centralize") = false)
        .def(
            "simulate",
            [](const OwnedController& c, const Vector& x0, const std::string& policy, std::uint64_t seed) {
                return simulate(*c.ctrl, x0, parse_disturbance_policy(policy), seed);
            },
            py::arg("x0"), py::arg("policy") = "uniform", py::arg("seed") = 0);

    py::class_<Problem>(m, "Problem")
        .def_readonly("name", &Problem::name)
        .def_readonly("horizon", &Problem::horizon)
        .def_readonly("target", &Problem::target)
        .def("model", &Problem::model)
        .def("to_json", [](const Problem& p) { return problem_to_json(p).dump(2); });
    m.def("parse_problem", &parse_problem, py::arg("text"));
    m.def("load_problem", &load_problem, py::arg("path"));
    m.def("builtin_case", &builtin_case, py::arg("name"));
    m.def("builtin_case_names", &builtin_case_names);

    m.def(
        "minkdiff_bench_csv",
        [](std::size_t count, std::uint64_t seed, unsigned threads) {
            BenchSpec spec;
            spec.count = count;
            spec.seed = seed;
            spec.threads = threads;
            std::ostringstream os;
            write_minkdiff_csv(os, run_minkdiff_bench(spec));
            return os.str();
        },
        py::arg("count"), py::arg("seed") = 0, py::arg("threads") = 1);
}
