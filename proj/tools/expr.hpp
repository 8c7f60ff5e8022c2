#ifndef SLICEOP_TOOLS_EXPR_HPP
#define SLICEOP_TOOLS_EXPR_HPP

#include <functional>
#include <string>

namespace sliceop_cli {

/// Compiles a small arithmetic expression in the variables x and y into a
/// callable.  Grammar: + - * / ^ (right associative), parentheses, unary
/// minus, numeric literals, and the functions exp, erf, sin, cos.
/// Throws std::invalid_argument on malformed input.
std::function<double(double, double)> compile_expression(const std::string& text);

}  // namespace sliceop_cli

#endif
