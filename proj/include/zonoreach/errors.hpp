#ifndef ZONOREACH_ERRORS_HPP_
#define ZONOREACH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace zonoreach
{

/// Operand shapes do not agree (e.g. a direction of the wrong length).
class DimensionError : public std::invalid_argument
{
    public:
        using std::invalid_argument::invalid_argument;
};

/// The backend could not certify any status for a program. Never reported as
/// "infeasible" or "false".
class SolverError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

/// The outer approximation of EW by an aligned sub-zonotope does not exist, so
/// the under-approximated Minkowski difference is empty.
class EmptyUnderApprox : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

/// Exact volume was requested for a zonotope whose determinant enumeration
/// exceeds the configured cap.
class VolumeTooLarge : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

/// A state handed to the controller is not in the corresponding BRS.
class NotInBrs : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent problem data; `path()` names the offending field.
class SchemaError : public std::runtime_error
{
    public:
        SchemaError(std::string path, const std::string& what)
            : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path))
        {
        }

        const std::string& path() const noexcept { return path_; }

    private:
        std::string path_;
};

} // namespace zonoreach

#endif
