#ifndef SLICEOP_RECURRENCE_HPP
#define SLICEOP_RECURRENCE_HPP

#include <span>
#include <string>
#include <vector>

#include "sliceop/domain.hpp"
#include "sliceop/settings.hpp"

namespace sliceop {

/// Univariate weight on (lo, hi), stored as a product of factors
///
///   (hi - x)^exp_hi (x - lo)^exp_lo (1 - x)^exp_omx (1 + x)^exp_opx
///   (1 - aff_slope * x)^exp_aff
///
/// The endpoint factors may be singular (any exponent > -1); the remaining
/// factors must be smooth on [lo, hi], which the named constructors enforce
/// by merging (1 - x) powers into the endpoint factor whenever hi == 1.
struct WeightSpec {
  double lo = -1, hi = 1;
  double exp_hi = 0, exp_lo = 0;
  double exp_omx = 0, exp_opx = 0;
  double exp_aff = 0, aff_slope = 0;

  /// x-direction weight (beta-x)^a (x-alpha)^b rho(x)^e on (alpha, beta).
  static WeightSpec r_weight(const Domain& dom, double a, double b, double e);
  /// t-direction weight (delta-t)^d (t-gamma)^c on (gamma, delta).
  static WeightSpec p_weight(const Domain& dom, double d, double c);
  /// Interim four-parameter weight (beta-x)^a (x-alpha)^b (1-x)^c (1+x)^d.
  static WeightSpec interim(const Domain& dom, double a, double b, double c, double d);

  double eval(double x) const;
  bool integrable() const { return exp_hi > -1 && exp_lo > -1; }
  std::string describe() const;

  friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

/// Three-term recurrence data for the orthonormal family of a weight,
///
///   x p_n(x) = beta[n] p_{n+1}(x) + alpha[n] p_n(x) + beta[n-1] p_{n-1}(x)
///
/// normalized so that p_0 == 1 under the mass-normalized inner product
/// <f,g> = (1/omega) * integral(f g w).  omega is the total mass of w.
struct RecurrenceTable {
  WeightSpec weight;
  std::vector<double> alpha;
  std::vector<double> beta;
  double omega = 0;

  int size() const { return static_cast<int>(alpha.size()); }

  /// Value of p_n at x (forward recurrence); requires n <= size().
  double eval(int n, double x) const;
  /// p_n(x) together with p_n'(x).
  void eval_with_derivative(int n, double x, double& value, double& derivative) const;
  /// Fills out[0..n] with p_0(x) .. p_n(x); requires n <= size().
  void eval_all(int n, double x, std::span<double> out) const;
  /// Values and first derivatives in one forward pass.
  void eval_all_with_derivative(int n, double x, std::span<double> values,
                                std::span<double> derivatives) const;
};

/// Orthonormal Jacobi recurrence for (hi-x)^A (x-lo)^B on (lo, hi),
/// by classical closed form.  Valid for any A, B > -1.
RecurrenceTable jacobi_recurrence(double lo, double hi, double A, double B, int count);

/// Recurrence coefficients for an arbitrary weight by the discretized
/// Stieltjes procedure.  The discretization is a Gauss-Jacobi rule matched
/// to the endpoint factors with the smooth factors folded into the
/// integrand, refined geometrically until the coefficients stabilize.
/// Throws NumericalError if the refinement does not converge or the
/// resulting family fails its orthonormality audit.
RecurrenceTable bootstrap_recurrence(const WeightSpec& w, int count,
                                     const Settings& settings = {});

enum class Endpoint { PlusOne = +1, MinusOne = -1 };

/// Recurrence of the weight multiplied by (1 -+ x), obtained from the
/// Christoffel-Darboux kernel identities through the ratio recurrence
/// chi_n(y) = (y - alpha[n] - beta[n-1]/chi_{n-1}(y)) / beta[n].
/// The output has one coefficient pair fewer than the input.
RecurrenceTable lift_endpoint(const RecurrenceTable& table, Endpoint endpoint,
                              const Settings& settings = {});

}  // namespace sliceop

#endif
