#ifndef SLICEOP_DOMAIN_HPP
#define SLICEOP_DOMAIN_HPP

#include <array>
#include <string>

namespace sliceop {

enum class DomainKind { DiskSlice, EndDiskSlice, Trapezium };

/// One of the three supported geometries
///
///   Omega = { (x,y) : alpha < x < beta,  gamma*rho(x) < y < delta*rho(x) }
///
/// with rho(x) = sqrt(1-x^2) for the disk slice (0 < alpha < beta < 1),
/// the end disk slice / half disk (beta = 1), and rho(x) = 1 - xi*x for the
/// canonical trapezium on (0,1) x (0, 1-xi*x).
class Domain {
 public:
  static Domain disk_slice(double alpha, double beta);
  static Domain end_disk_slice(double alpha);
  static Domain trapezium(double xi);

  DomainKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double delta() const { return delta_; }
  double xi() const { return xi_; }

  bool is_disk_like() const { return kind_ != DomainKind::Trapezium; }

  /// Boundary profile rho(x). Throws std::domain_error for x outside
  /// [alpha, beta] (beyond a rounding allowance).
  double rho(double x) const;
  /// rho(x)^2 as a polynomial in x; safe everywhere.
  double rho_squared(double x) const;
  /// d(rho)/dx; for disk-like domains this blows up as rho -> 0.
  double drho(double x) const;
  /// rho(x)*rho'(x), which is polynomial for every supported geometry.
  double rho_drho(double x) const;

  /// Strict interior membership.
  bool contains(double x, double y) const;
  /// Membership in the closure with absolute tolerance tol.
  bool contains_closure(double x, double y, double tol) const;

  std::string name() const;

  friend bool operator==(const Domain&, const Domain&) = default;

  /// Placeholder value; use the named constructors for a usable domain.
  Domain() = default;

 private:
  DomainKind kind_ = DomainKind::DiskSlice;
  double alpha_ = 0, beta_ = 1;
  double gamma_ = -1, delta_ = 1;
  double xi_ = 0;
};

/// Exponent tuple (a,b,c,d) labelling a basis on a domain.  Stored in the
/// four-parameter form used internally by every geometry:
///   weight part on x:      (beta - x)^a (x - alpha)^b
///   weight part on y/rho:  (delta - t)^d (t - gamma)^c
/// Disk-like domains require c == d (the t-weight must be even), and the
/// end disk slice pins a == 0 since x = beta degenerates to a point.
struct BasisParams {
  double a = 0, b = 0, c = 0, d = 0;
  friend bool operator==(const BasisParams&, const BasisParams&) = default;

  BasisParams operator+(const BasisParams& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  BasisParams operator-(const BasisParams& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  bool nonnegative() const { return a >= 0 && b >= 0 && c >= 0 && d >= 0; }
};

/// Disk-slice parameters (a,b,c): weight (beta-x)^a (x-alpha)^b (1-x^2-y^2)^c.
BasisParams disk_slice_params(double a, double b, double c);
/// End-disk-slice parameters (a,b): weight (x-alpha)^a (1-x^2-y^2)^b.
BasisParams end_disk_slice_params(double a, double b);
/// Trapezium parameters (a,b,c,d): weight (1-x)^a x^b y^c (1-xi*x-y)^d.
BasisParams trapezium_params(double a, double b, double c, double d);

/// Number of user-facing parameters for a geometry (3 / 2 / 4).
int param_arity(DomainKind kind);
/// Validates that p is an admissible parameter tuple for the geometry.
void validate_params(DomainKind kind, const BasisParams& p);

/// Unit increment touching the straight-line weight factors.
BasisParams line_mask(DomainKind kind);
/// Unit increment touching the rho-boundary weight factors.
BasisParams arc_mask(DomainKind kind);

/// rho-exponent of the level-k x-direction weight: c + d + 2k + 1.
inline double rho_exponent(const BasisParams& p, int k) { return p.c + p.d + 2 * k + 1; }

/// 2D weight W^{(a,b,c,d)}(x,y) on the closure of Omega.
double weight_2d(const Domain& dom, const BasisParams& p, double x, double y);
/// Gradient of the 2D weight (for trace diagnostics and oracles).
std::array<double, 2> weight_2d_gradient(const Domain& dom, const BasisParams& p, double x, double y);

/// Identifies the basis a coefficient vector lives in.
struct BasisId {
  Domain domain;
  BasisParams params;
  bool weighted = false;
  friend bool operator==(const BasisId&, const BasisId&) = default;
};

}  // namespace sliceop

#endif
