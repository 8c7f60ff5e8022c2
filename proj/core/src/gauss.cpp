#include "sliceop/gauss.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "sliceop/errors.hpp"

namespace sliceop {

GaussRule gauss_rule(const RecurrenceTable& table, int M, const Settings& settings) {
  if (M < 1) throw std::invalid_argument("gauss_rule: need at least one point");
  if (M > table.size() - 1)
    throw std::invalid_argument("gauss_rule: table holds too few coefficients for M=" +
                                std::to_string(M));
  GaussRule rule;
  rule.omega = table.omega;
  rule.nodes.resize(M);
  rule.weights.resize(M);

  if (M == 1) {
    rule.nodes[0] = table.alpha[0];
    rule.weights[0] = table.omega;
    return rule;
  }

  Eigen::VectorXd diag(M), sub(M - 1);
  for (int i = 0; i < M; ++i) diag[i] = table.alpha[i];
  for (int i = 0; i + 1 < M; ++i) sub[i] = table.beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("gauss_rule: eigen solve failed");

  std::vector<double> p(M);
  double wsum = 0, comp = 0;  // Kahan-compensated total
  for (int i = 0; i < M; ++i) {
    const double x = es.eigenvalues()[i];
    rule.nodes[i] = x;
    table.eval_all(M - 1, x, p);
    double s = 0;
    for (int j = 0; j < M; ++j) s += p[j] * p[j];
    rule.weights[i] = table.omega / s;
    const double yk = rule.weights[i] - comp;
    const double tk = wsum + yk;
    comp = (tk - wsum) - yk;
    wsum = tk;
  }

  for (int i = 0; i < M; ++i) {
    if (!(rule.nodes[i] > table.weight.lo && rule.nodes[i] < table.weight.hi))
      throw NumericalError("gauss_rule: node escaped the support interval");
    if (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1]))
      throw NumericalError("gauss_rule: nodes not strictly increasing");
    if (!(rule.weights[i] > 0)) throw NumericalError("gauss_rule: nonpositive weight");
  }
  if (std::abs(wsum - table.omega) > settings.quad_weight_sum_tol * table.omega * 8)
    throw NumericalError("gauss_rule: weights do not sum to the measure mass");
  return rule;
}

}  // namespace sliceop
