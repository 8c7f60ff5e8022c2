#ifndef SLICEOP_TOOLS_RHS_LIBRARY_HPP
#define SLICEOP_TOOLS_RHS_LIBRARY_HPP

#include <string>

#include "sliceop/transform.hpp"

namespace sliceop_cli {

/// Resolves "builtin:NAME" or "expr:STRING" to a callable right-hand side.
/// Built-ins:
///   zero, one          constants
///   erf_bump           1 + erf(5(1 - 10((x-0.5)^2 + y^2)))
///   arc_line_exp       x (1 - x^2 - y^2) exp(x)
///   weighted_exp       W(x,y) exp(x) with one power of each boundary factor
///   weighted_ycos      W(x,y) y cos(x)
///   manufactured       Laplacian of W(x,y) y^3 exp(x), whose exact Poisson
///                      solution is known in closed form (disk slice only)
sliceop::ScalarField make_field(const sliceop::Domain& dom, const std::string& spec);

/// Exact solution paired with the "manufactured" right-hand side.
sliceop::ScalarField manufactured_solution(const sliceop::Domain& dom);
bool has_exact_solution(const std::string& spec);

}  // namespace sliceop_cli

#endif
