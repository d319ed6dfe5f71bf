#ifndef ZONOREACH_CASES_HPP_
#define ZONOREACH_CASES_HPP_

#include "zonoreach/problem.hpp"

#include <string>
#include <vector>

namespace zonoreach
{

/// Names accepted by builtin_case.
std::vector<std::string> builtin_case_names();

/**
 * @brief Ready-made problems:
 *  - lateral, longitudinal: 6D linearized aircraft dynamics, E = I, box
 *    disturbances, input and target boxes from the variable ranges;
 *  - integrator10d: 3D double integrator driven by a 4D uncontrollable
 *    oscillator, zero-order hold at dt = 0.5 s.
 *
 * Throws std::invalid_argument for an unknown name.
 */
Problem builtin_case(const std::string& name);

/// Exact zero-order hold of x' = Ac x + Bc u: exp([[Ac, Bc], [0, 0]] dt).
std::pair<Matrix, Matrix> zero_order_hold(const Matrix& Ac, const Matrix& Bc, double dt);

} // namespace zonoreach

#endif
