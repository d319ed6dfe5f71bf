#ifndef ZONOREACH_PROBLEM_HPP_
#define ZONOREACH_PROBLEM_HPP_

#include "zonoreach/brs.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace zonoreach
{

inline constexpr const char* kSchemaVersion = "zonoreach/1";

struct ProblemOptions
{
    UnderMethod method = UnderMethod::kMinOut;
    ReducePolicy reduce = ReducePolicy::kAtOrderThreshold;
    double max_order = 6.0;
    double threshold_order = 6.0;
    std::uint64_t seed = 0;
    double feasibility_tol = 1e-7;

    BrsOptions brs_options() const;
};

/// W as given in the file: either a box or an explicit H-rep with matching V-rep.
struct DisturbanceSpec
{
    std::optional<Box> box;
    std::optional<HPolytope> hrep;
    std::optional<VPolytope> vrep;
    std::optional<HPolytope> image_hrep;  ///< H-rep of EW, required when E is not invertible

    DisturbanceSet to_set() const;
};

struct Problem
{
    std::string name;
    Matrix A, B, E;
    Vector K;
    Zonotope U;
    DisturbanceSpec W;
    Zonotope target;
    Eigen::Index horizon = 0;
    ProblemOptions options;

    SystemModel model() const;
};

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

/// Accepts a JSON number or a decimal string. Throws SchemaError(path).
double parse_double(const nlohmann::json& j, const std::string& path);

nlohmann::json matrix_to_json(const Matrix& M);
nlohmann::json vector_to_json(const Vector& v);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& path);
Vector vector_from_json(const nlohmann::json& j, const std::string& path);

/// {"center": [...], "generators": [[row 0], ..., [row n-1]]}.
nlohmann::json zonotope_to_json(const Zonotope& Z);
Zonotope zonotope_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json problem_to_json(const Problem& p);

/// Validates the schema, dimensions, invertibility of A, and boundedness of W.
Problem problem_from_json(const nlohmann::json& j);

/// Parses text; JSON syntax errors are reported with line and column.
Problem parse_problem(const std::string& text);
Problem load_problem(const std::string& path);
void save_problem(const Problem& p, const std::string& path);

} // namespace zonoreach

#endif
