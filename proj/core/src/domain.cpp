#include "sliceop/domain.hpp"

#include <cmath>
#include <stdexcept>

namespace sliceop {

Domain Domain::disk_slice(double alpha, double beta) {
  if (!(0 < alpha && alpha < beta && beta < 1))
    throw std::invalid_argument("disk slice requires 0 < alpha < beta < 1");
  Domain d;
  d.kind_ = DomainKind::DiskSlice;
  d.alpha_ = alpha;
  d.beta_ = beta;
  d.gamma_ = -1;
  d.delta_ = 1;
  return d;
}

Domain Domain::end_disk_slice(double alpha) {
  if (!(0 < alpha && alpha < 1))
    throw std::invalid_argument("end disk slice requires 0 < alpha < 1");
  Domain d;
  d.kind_ = DomainKind::EndDiskSlice;
  d.alpha_ = alpha;
  d.beta_ = 1;
  d.gamma_ = -1;
  d.delta_ = 1;
  return d;
}

Domain Domain::trapezium(double xi) {
  if (!(0 < xi && xi < 1))
    throw std::invalid_argument("trapezium requires 0 < xi < 1");
  Domain d;
  d.kind_ = DomainKind::Trapezium;
  d.alpha_ = 0;
  d.beta_ = 1;
  d.gamma_ = 0;
  d.delta_ = 1;
  d.xi_ = xi;
  return d;
}

double Domain::rho(double x) const {
  const double slack = 1e-12 * (beta_ - alpha_);
  if (x < alpha_ - slack || x > beta_ + slack)
    throw std::domain_error("rho: x outside [alpha, beta]");
  if (kind_ == DomainKind::Trapezium) return 1.0 - xi_ * x;
  const double r2 = 1.0 - x * x;
  return r2 > 0 ? std::sqrt(r2) : 0.0;
}

double Domain::rho_squared(double x) const {
  if (kind_ == DomainKind::Trapezium) {
    const double r = 1.0 - xi_ * x;
    return r * r;
  }
  return 1.0 - x * x;
}

double Domain::drho(double x) const {
  if (kind_ == DomainKind::Trapezium) return -xi_;
  return -x / rho(x);
}

double Domain::rho_drho(double x) const {
  if (kind_ == DomainKind::Trapezium) return -xi_ * (1.0 - xi_ * x);
  return -x;
}

bool Domain::contains(double x, double y) const {
  if (!(x > alpha_ && x < beta_)) return false;
  const double r = kind_ == DomainKind::Trapezium ? 1.0 - xi_ * x : std::sqrt(1.0 - x * x);
  return y > gamma_ * r && y < delta_ * r;
}

bool Domain::contains_closure(double x, double y, double tol) const {
  if (x < alpha_ - tol || x > beta_ + tol) return false;
  const double xc = std::min(std::max(x, alpha_), beta_);
  const double r = kind_ == DomainKind::Trapezium
                       ? 1.0 - xi_ * xc
                       : std::sqrt(std::max(0.0, 1.0 - xc * xc));
  return y >= gamma_ * r - tol && y <= delta_ * r + tol;
}

std::string Domain::name() const {
  switch (kind_) {
    case DomainKind::DiskSlice: return "diskslice";
    case DomainKind::EndDiskSlice: return "halfdisk";
    case DomainKind::Trapezium: return "trapezium";
  }
  return "?";
}

BasisParams disk_slice_params(double a, double b, double c) { return {a, b, c, c}; }
BasisParams end_disk_slice_params(double a, double b) { return {0, a, b, b}; }
BasisParams trapezium_params(double a, double b, double c, double d) { return {a, b, c, d}; }

int param_arity(DomainKind kind) {
  switch (kind) {
    case DomainKind::DiskSlice: return 3;
    case DomainKind::EndDiskSlice: return 2;
    case DomainKind::Trapezium: return 4;
  }
  return 0;
}

void validate_params(DomainKind kind, const BasisParams& p) {
  if (!p.nonnegative()) throw std::invalid_argument("basis parameters must be nonnegative");
  if (kind != DomainKind::Trapezium && p.c != p.d)
    throw std::invalid_argument("disk-like domains require c == d");
  if (kind == DomainKind::EndDiskSlice && p.a != 0)
    throw std::invalid_argument("end disk slice has no (beta-x) factor; a must be 0");
}

BasisParams line_mask(DomainKind kind) {
  if (kind == DomainKind::EndDiskSlice) return {0, 1, 0, 0};
  return {1, 1, 0, 0};
}

BasisParams arc_mask(DomainKind) { return {0, 0, 1, 1}; }

namespace {
double pow_factor(double base, double expo) {
  if (expo == 0) return 1.0;
  if (base < 0) {
    // tolerate rounding just outside the closure
    if (base > -1e-14) base = 0.0;
  }
  return std::pow(base, expo);
}
}  // namespace

double weight_2d(const Domain& dom, const BasisParams& p, double x, double y) {
  if (!dom.contains_closure(x, y, 1e-12))
    throw std::domain_error("weight_2d: point outside the closure of Omega");
  double w = pow_factor(dom.beta() - x, p.a) * pow_factor(x - dom.alpha(), p.b);
  if (dom.is_disk_like()) {
    // c == d: (rho^2 - y^2)^c = (1 - x^2 - y^2)^c
    w *= pow_factor(1.0 - x * x - y * y, p.c);
  } else {
    const double r = 1.0 - dom.xi() * x;
    w *= pow_factor(y, p.c) * pow_factor(r - y, p.d);
  }
  return w;
}

std::array<double, 2> weight_2d_gradient(const Domain& dom, const BasisParams& p,
                                         double x, double y) {
  // Product rule over the boundary factors; a factor with zero exponent
  // contributes nothing, a factor with exponent >= 1 stays finite at its zero.
  const double f1 = dom.beta() - x;
  const double f2 = x - dom.alpha();
  double gx = 0, gy = 0;
  auto term = [&](double expo, double fac, double dfx, double dfy, double rest) {
    if (expo == 0) return;
    const double common = expo * pow_factor(fac, expo - 1) * rest;
    gx += common * dfx;
    gy += common * dfy;
  };
  if (dom.is_disk_like()) {
    const double f3 = 1.0 - x * x - y * y;
    term(p.a, f1, -1, 0, pow_factor(f2, p.b) * pow_factor(f3, p.c));
    term(p.b, f2, 1, 0, pow_factor(f1, p.a) * pow_factor(f3, p.c));
    term(p.c, f3, -2 * x, -2 * y, pow_factor(f1, p.a) * pow_factor(f2, p.b));
  } else {
    const double f3 = y;
    const double f4 = 1.0 - dom.xi() * x - y;
    term(p.a, f1, -1, 0, pow_factor(f2, p.b) * pow_factor(f3, p.c) * pow_factor(f4, p.d));
    term(p.b, f2, 1, 0, pow_factor(f1, p.a) * pow_factor(f3, p.c) * pow_factor(f4, p.d));
    term(p.c, f3, 0, 1, pow_factor(f1, p.a) * pow_factor(f2, p.b) * pow_factor(f4, p.d));
    term(p.d, f4, -dom.xi(), -1, pow_factor(f1, p.a) * pow_factor(f2, p.b) * pow_factor(f3, p.c));
  }
  return {gx, gy};
}

}  // namespace sliceop
