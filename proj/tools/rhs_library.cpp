#include "rhs_library.hpp"

#include <cmath>
#include <stdexcept>

#include "expr.hpp"

namespace sliceop_cli {

using sliceop::BasisParams;
using sliceop::Domain;
using sliceop::ScalarField;

namespace {

BasisParams dirichlet_params_of(const Domain& dom) {
  return sliceop::line_mask(dom.kind()) + sliceop::arc_mask(dom.kind());
}

}  // namespace

ScalarField manufactured_solution(const Domain& dom) {
  if (dom.kind() != sliceop::DomainKind::DiskSlice)
    throw std::invalid_argument("manufactured problem is defined on the disk slice only");
  const double alpha = dom.alpha(), beta = dom.beta();
  return [alpha, beta](double x, double y) {
    const double q = (beta - x) * (x - alpha);
    return q * (1 - x * x - y * y) * y * y * y * std::exp(x);
  };
}

bool has_exact_solution(const std::string& spec) { return spec == "builtin:manufactured"; }

ScalarField make_field(const Domain& dom, const std::string& spec) {
  if (spec.rfind("expr:", 0) == 0) return compile_expression(spec.substr(5));
  if (spec.rfind("builtin:", 0) != 0)
    throw std::invalid_argument("field spec must start with 'builtin:' or 'expr:'");
  const std::string name = spec.substr(8);
  if (name == "zero") return [](double, double) { return 0.0; };
  if (name == "one") return [](double, double) { return 1.0; };
  if (name == "erf_bump")
    return [](double x, double y) {
      return 1.0 + std::erf(5.0 * (1.0 - 10.0 * ((x - 0.5) * (x - 0.5) + y * y)));
    };
  if (name == "arc_line_exp")
    return [](double x, double y) { return x * (1 - x * x - y * y) * std::exp(x); };
  if (name == "weighted_exp") {
    const BasisParams p = dirichlet_params_of(dom);
    const Domain d = dom;
    return [d, p](double x, double y) { return sliceop::weight_2d(d, p, x, y) * std::exp(x); };
  }
  if (name == "weighted_ycos") {
    const BasisParams p = dirichlet_params_of(dom);
    const Domain d = dom;
    return
        [d, p](double x, double y) { return sliceop::weight_2d(d, p, x, y) * y * std::cos(x); };
  }
  if (name == "manufactured") {
    if (dom.kind() != sliceop::DomainKind::DiskSlice)
      throw std::invalid_argument("builtin:manufactured requires the disk slice");
    const double alpha = dom.alpha(), beta = dom.beta();
    return [alpha, beta](double x, double y) {
      const double q = (beta - x) * (x - alpha);
      const double qp = -2 * x + alpha + beta;
      const double arc = 1 - x * x - y * y, ex = std::exp(x), y3 = y * y * y;
      const double lapW = -2 * arc - 4 * x * qp - 4 * q;
      const double Wx = qp * arc - 2 * x * q;
      const double Wy = -2 * y * q;
      return lapW * y3 * ex + 2 * (Wx * y3 * ex + Wy * 3 * y * y * ex) +
             q * arc * (y3 + 6 * y) * ex;
    };
  }
  throw std::invalid_argument("unknown builtin field '" + name + "'");
}

}  // namespace sliceop_cli
