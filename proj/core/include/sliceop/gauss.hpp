#ifndef SLICEOP_GAUSS_HPP
#define SLICEOP_GAUSS_HPP

#include <vector>

#include "sliceop/recurrence.hpp"
#include "sliceop/settings.hpp"

namespace sliceop {

/// Gauss rule for a univariate weight.  Weights are in units of the
/// unnormalized measure: sum(weights) equals the total mass omega.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double omega = 0;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// M-point Gauss rule from a recurrence table (symmetric tridiagonal
/// eigenvalues for the nodes, Christoffel sums for the weights).
/// Exact for polynomials of degree <= 2M-1 against the table's measure.
/// Requires M <= table.size() - 1.
GaussRule gauss_rule(const RecurrenceTable& table, int M, const Settings& settings = {});

/// Discrete inner product sum_i w_i f(x_i) g(x_i) (unnormalized).
template <class F, class G>
double inner_product(const GaussRule& rule, F&& f, G&& g) {
  double s = 0;
  for (int i = 0; i < rule.size(); ++i)
    s += rule.weights[i] * f(rule.nodes[i]) * g(rule.nodes[i]);
  return s;
}

}  // namespace sliceop

#endif
