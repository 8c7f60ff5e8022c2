#ifndef SLICEOP_TRANSFORM_HPP
#define SLICEOP_TRANSFORM_HPP

#include <functional>
#include <vector>

#include "sliceop/basis2d.hpp"
#include "sliceop/block_vector.hpp"

namespace sliceop {

using ScalarField = std::function<double(double, double)>;

/// 2D quadrature for integrals against the weight of a basis.  Disk-like
/// domains use the reflection convention: the integral is
///   1/2 * sum_j w_j [ f(x_j, y_j) + f(x_j, -y_j) ],
/// exact for polynomials of degree <= exact_degree; the trapezium rule is a
/// plain tensor rule with the x-direction order raised to absorb the
/// substitution y = rho(x) t.
struct QuadRule2D {
  std::vector<double> x, y, w;
  bool reflect = false;
  int exact_degree = 0;
  int size() const { return static_cast<int>(x.size()); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0;
    if (reflect) {
      for (int i = 0; i < size(); ++i) s += w[i] * (f(x[i], y[i]) + f(x[i], -y[i]));
      return 0.5 * s;
    }
    for (int i = 0; i < size(); ++i) s += w[i] * f(x[i], y[i]);
    return s;
  }
};

QuadRule2D quad_rule_2d(Workspace& ws, const BasisParams& p, int N);

/// Expansion coefficients of f in the (unweighted) basis with parameters p,
/// through the 2D rule at degree 2N (so that polynomial f of degree <= N is
/// reproduced exactly up to rounding).
BlockVector analyze(Workspace& ws, const BasisParams& p, const ScalarField& f, int N);

/// Pointwise evaluation of an expansion (weighted bases include the weight
/// factor).  Throws std::domain_error for points outside the closure.
double synthesize_at(Workspace& ws, const BlockVector& coeffs, double x, double y);
std::vector<double> synthesize(Workspace& ws, const BlockVector& coeffs,
                               const std::vector<double>& xs, const std::vector<double>& ys);

/// Value and gradient of an expansion at one point (differentiated
/// recurrence; weighted bases apply the product rule with the weight).
std::array<double, 3> synthesize_gradient_at(Workspace& ws, const BlockVector& coeffs, double x,
                                             double y);

}  // namespace sliceop

#endif
