#include "zonoreach/problem.hpp"
#include "zonoreach/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace zonoreach
{

using nlohmann::json;

namespace
{

const json& field(const json& j, const char* key, const std::string& path)
{
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing field");
    return *it;
}

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

std::string text_field(const json& j, const char* key, const std::string& path)
{
    const json& v = field(j, key, path);
    if (!v.is_string()) throw SchemaError(join(path, key), "expected a string");
    return v.get<std::string>();
}

template <typename Fn>
auto wrap(const std::string& path, Fn&& fn) -> decltype(fn())
{
    try
    {
        return fn();
    }
    catch (const SchemaError&)
    {
        throw;
    }
    catch (const std::invalid_argument& e)
    {
        throw SchemaError(path, e.what());
    }
}

json hrep_to_json(const HPolytope& P)
{
    return json{{"H", matrix_to_json(P.H)}, {"h", vector_to_json(P.h)}};
}

HPolytope hrep_from_json(const json& j, const std::string& path)
{
    HPolytope P;
    P.H = matrix_from_json(field(j, "H", path), join(path, "H"));
    P.h = vector_from_json(field(j, "h", path), join(path, "h"));
    wrap(path, [&] { P.validate(); });
    return P;
}

} // namespace

BrsOptions ProblemOptions::brs_options() const
{
    BrsOptions o;
    o.method = method;
    o.reduce = reduce;
    o.max_order = max_order;
    o.threshold_order = threshold_order;
    o.solver.lp.feasibility_tol = feasibility_tol;
    return o;
}

DisturbanceSet DisturbanceSpec::to_set() const
{
    if (box) return DisturbanceSet::from_box(*box);
    if (!hrep || !vrep) throw std::invalid_argument("disturbance needs a box or both an H-rep and a V-rep");
    return DisturbanceSet::from_polytope(*hrep, *vrep);
}

SystemModel Problem::model() const
{
    return SystemModel(A, B, E, K, U, W.to_set(), W.image_hrep);
}

std::string format_double(double x)
{
    if (!std::isfinite(x)) throw std::invalid_argument("format_double: non-finite value");
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), end);
}

double parse_double(const json& j, const std::string& path)
{
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) throw SchemaError(path, "expected a number or decimal string");
    const std::string s = j.get<std::string>();
    double x = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(x))
        throw SchemaError(path, "'" + s + "' is not a finite decimal number");
    return x;
}

json vector_to_json(const Vector& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(format_double(v(i)));
    return out;
}

json matrix_to_json(const Matrix& M)
{
    json out = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) out.push_back(vector_to_json(M.row(r).transpose()));
    return out;
}

Vector vector_from_json(const json& j, const std::string& path)
{
    if (!j.is_array()) throw SchemaError(path, "expected an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_double(j[i], index(path, i));
    return v;
}

Matrix matrix_from_json(const json& j, const std::string& path)
{
    if (!j.is_array()) throw SchemaError(path, "expected an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = 0;
    for (std::size_t r = 0; r < j.size(); ++r)
    {
        if (!j[r].is_array()) throw SchemaError(index(path, r), "expected a row array");
        if (r == 0) cols = static_cast<Eigen::Index>(j[r].size());
        else if (static_cast<Eigen::Index>(j[r].size()) != cols)
            throw SchemaError(index(path, r), "row length " + std::to_string(j[r].size()) + " differs from "
                + std::to_string(cols));
    }
    Matrix M(rows, cols);
    for (std::size_t r = 0; r < j.size(); ++r)
        M.row(static_cast<Eigen::Index>(r)) = vector_from_json(j[r], index(path, r)).transpose();
    return M;
}

json zonotope_to_json(const Zonotope& Z)
{
    json g = json::array();
    for (Eigen::Index r = 0; r < Z.dim(); ++r) g.push_back(vector_to_json(Z.generators().row(r).transpose()));
    return json{{"center", vector_to_json(Z.center())}, {"generators", g}};
}

Zonotope zonotope_from_json(const json& j, const std::string& path)
{
    Vector c = vector_from_json(field(j, "center", path), join(path, "center"));
    Matrix G = matrix_from_json(field(j, "generators", path), join(path, "generators"));
    if (G.rows() == 0) G.resize(c.size(), 0);
    if (G.rows() != c.size())
        throw SchemaError(join(path, "generators"), "needs one row per center entry (" + std::to_string(c.size()) + ")");
    return Zonotope(std::move(G), std::move(c));
}

json problem_to_json(const Problem& p)
{
    json W = json::object();
    if (p.W.box) W["box"] = json{{"lo", vector_to_json(p.W.box->lower)}, {"hi", vector_to_json(p.W.box->upper)}};
    if (p.W.hrep) W["hrep"] = hrep_to_json(*p.W.hrep);
    if (p.W.vrep) W["vrep"] = matrix_to_json(p.W.vrep->vertices.transpose());
    if (p.W.image_hrep) W["image_hrep"] = hrep_to_json(*p.W.image_hrep);

    const ProblemOptions& o = p.options;
    return json{
        {"schema", kSchemaVersion},
        {"name", p.name},
        {"system", {{"A", matrix_to_json(p.A)}, {"B", matrix_to_json(p.B)}, {"E", matrix_to_json(p.E)},
                       {"K", vector_to_json(p.K)}}},
        {"U", zonotope_to_json(p.U)},
        {"W", W},
        {"target", zonotope_to_json(p.target)},
        {"horizon", p.horizon},
        {"options", {{"method", to_string(o.method)}, {"reduce", to_string(o.reduce)},
                        {"max_order", format_double(o.max_order)}, {"threshold_order", format_double(o.threshold_order)},
                        {"seed", o.seed}, {"tolerances", {{"feasibility", format_double(o.feasibility_tol)}}}}},
    };
}

Problem problem_from_json(const json& j)
{
    if (!j.is_object()) throw SchemaError("", "problem file must be a JSON object");
    const std::string schema = text_field(j, "schema", "");
    if (schema != kSchemaVersion)
        throw SchemaError("schema", "unsupported version '" + schema + "' (expected " + kSchemaVersion + ")");

    Problem p;
    if (j.contains("name")) p.name = text_field(j, "name", "");

    const json& sys = field(j, "system", "");
    p.A = matrix_from_json(field(sys, "A", "system"), "system.A");
    p.B = matrix_from_json(field(sys, "B", "system"), "system.B");
    p.E = matrix_from_json(field(sys, "E", "system"), "system.E");
    const Eigen::Index n = p.A.rows();
    if (n == 0 || p.A.cols() != n) throw SchemaError("system.A", "must be a non-empty square matrix");
    if (p.B.rows() != n) throw SchemaError("system.B", "must have " + std::to_string(n) + " rows");
    if (p.E.rows() != n) throw SchemaError("system.E", "must have " + std::to_string(n) + " rows");
    p.K = sys.contains("K") ? vector_from_json(sys["K"], "system.K") : Vector(Vector::Zero(n));
    if (p.K.size() != n) throw SchemaError("system.K", "must have " + std::to_string(n) + " entries");

    p.U = zonotope_from_json(field(j, "U", ""), "U");
    if (p.U.dim() != p.B.cols())
        throw SchemaError("U", "dimension " + std::to_string(p.U.dim()) + " does not match the "
            + std::to_string(p.B.cols()) + " columns of B");

    const json& W = field(j, "W", "");
    if (!W.is_object()) throw SchemaError("W", "expected an object");
    if (W.contains("box"))
    {
        Vector lo = vector_from_json(field(W["box"], "lo", "W.box"), "W.box.lo");
        Vector hi = vector_from_json(field(W["box"], "hi", "W.box.hi"), "W.box.hi");
        p.W.box = wrap("W.box", [&] { return Box(lo, hi); });
    }
    else if (W.contains("hrep") && W.contains("vrep"))
    {
        p.W.hrep = hrep_from_json(W["hrep"], "W.hrep");
        VPolytope V;
        V.vertices = matrix_from_json(W["vrep"], "W.vrep").transpose();
        wrap("W.vrep", [&] { V.validate(); });
        p.W.vrep = std::move(V);
    }
    else
    {
        throw SchemaError("W", "needs either 'box' or both 'hrep' and 'vrep'");
    }
    if (W.contains("image_hrep")) p.W.image_hrep = hrep_from_json(W["image_hrep"], "W.image_hrep");

    DisturbanceSet Wset = wrap("W", [&] { return p.W.to_set(); });
    if (Wset.dim() != p.E.cols())
        throw SchemaError("W", "dimension " + std::to_string(Wset.dim()) + " does not match the "
            + std::to_string(p.E.cols()) + " columns of E");

    p.target = zonotope_from_json(field(j, "target", ""), "target");
    if (p.target.dim() != n) throw SchemaError("target", "dimension must be " + std::to_string(n));

    const json& horizon = field(j, "horizon", "");
    if (!horizon.is_number_integer() || horizon.get<long long>() < 0)
        throw SchemaError("horizon", "expected a non-negative integer");
    p.horizon = horizon.get<Eigen::Index>();

    if (j.contains("options"))
    {
        const json& o = j["options"];
        if (!o.is_object()) throw SchemaError("options", "expected an object");
        if (o.contains("method"))
            p.options.method = wrap("options.method", [&] { return parse_under_method(text_field(o, "method", "options")); });
        if (o.contains("reduce"))
            p.options.reduce = wrap("options.reduce", [&] { return parse_reduce_policy(text_field(o, "reduce", "options")); });
        if (o.contains("max_order")) p.options.max_order = parse_double(o["max_order"], "options.max_order");
        if (o.contains("threshold_order"))
            p.options.threshold_order = parse_double(o["threshold_order"], "options.threshold_order");
        else
            p.options.threshold_order = p.options.max_order;
        if (p.options.max_order < 1.0) throw SchemaError("options.max_order", "must be at least 1");
        if (o.contains("seed"))
        {
            if (!o["seed"].is_number_unsigned()) throw SchemaError("options.seed", "expected a non-negative integer");
            p.options.seed = o["seed"].get<std::uint64_t>();
        }
        if (o.contains("tolerances") && o["tolerances"].contains("feasibility"))
        {
            p.options.feasibility_tol = parse_double(o["tolerances"]["feasibility"], "options.tolerances.feasibility");
            if (p.options.feasibility_tol <= 0.0)
                throw SchemaError("options.tolerances.feasibility", "must be positive");
        }
    }

    // Builds the model once to surface invertibility and EW problems at load time.
    try
    {
        (void)p.model();
    }
    catch (const std::invalid_argument& e)
    {
        const std::string what = e.what();
        throw SchemaError(what.find("A is singular") != std::string::npos ? "system.A" : "system", what);
    }
    return p;
}

Problem parse_problem(const std::string& text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        // Translate the byte offset into line:column.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
        {
            if (text[i] == '\n')
            {
                ++line;
                col = 1;
            }
            else
            {
                ++col;
            }
        }
        throw SchemaError("", "JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(col)
            + ": " + e.what());
    }
    return problem_from_json(j);
}

Problem load_problem(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw SchemaError("", "cannot open problem file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

void save_problem(const Problem& p, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << problem_to_json(p).dump(2) << '\n';
}

} // namespace zonoreach
