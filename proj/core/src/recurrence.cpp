#include "sliceop/recurrence.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sliceop/errors.hpp"
#include "sliceop/gauss.hpp"

namespace sliceop {

// ---------------------------------------------------------------------------
// WeightSpec

WeightSpec WeightSpec::r_weight(const Domain& dom, double a, double b, double e) {
  if (dom.kind() == DomainKind::Trapezium) {
    WeightSpec w;
    w.lo = dom.alpha();
    w.hi = dom.beta();
    w.exp_hi = a;
    w.exp_lo = b;
    w.exp_aff = e;
    w.aff_slope = dom.xi();
    return w;
  }
  // rho(x)^e = (1-x)^(e/2) (1+x)^(e/2)
  return interim(dom, a, b, e / 2, e / 2);
}

WeightSpec WeightSpec::p_weight(const Domain& dom, double d, double c) {
  WeightSpec w;
  w.lo = dom.gamma();
  w.hi = dom.delta();
  w.exp_hi = d;
  w.exp_lo = c;
  return w;
}

WeightSpec WeightSpec::interim(const Domain& dom, double a, double b, double c, double d) {
  WeightSpec w;
  w.lo = dom.alpha();
  w.hi = dom.beta();
  w.exp_lo = b;
  w.exp_opx = d;
  if (w.hi == 1.0) {
    w.exp_hi = a + c;  // (beta - x) and (1 - x) coincide
  } else {
    w.exp_hi = a;
    w.exp_omx = c;
  }
  return w;
}

double WeightSpec::eval(double x) const {
  auto p = [](double base, double expo) {
    if (expo == 0) return 1.0;
    if (base < 0 && base > -1e-14) base = 0.0;
    return std::pow(base, expo);
  };
  double v = p(hi - x, exp_hi) * p(x - lo, exp_lo);
  if (exp_omx != 0) v *= p(1.0 - x, exp_omx);
  if (exp_opx != 0) v *= p(1.0 + x, exp_opx);
  if (exp_aff != 0) v *= p(1.0 - aff_slope * x, exp_aff);
  return v;
}

std::string WeightSpec::describe() const {
  std::ostringstream os;
  os << "(" << lo << "," << hi << ")";
  os << " hi^" << exp_hi << " lo^" << exp_lo;
  if (exp_omx != 0) os << " (1-x)^" << exp_omx;
  if (exp_opx != 0) os << " (1+x)^" << exp_opx;
  if (exp_aff != 0) os << " (1-" << aff_slope << "x)^" << exp_aff;
  return os.str();
}

// ---------------------------------------------------------------------------
// RecurrenceTable evaluation

double RecurrenceTable::eval(int n, double x) const {
  if (n < 0) return 0.0;
  if (n > size()) throw std::out_of_range("RecurrenceTable::eval: index beyond table");
  double pm1 = 0.0, p = 1.0;
  for (int j = 0; j < n; ++j) {
    const double pn = ((x - alpha[j]) * p - (j > 0 ? beta[j - 1] * pm1 : 0.0)) / beta[j];
    pm1 = p;
    p = pn;
  }
  return p;
}

void RecurrenceTable::eval_with_derivative(int n, double x, double& value,
                                           double& derivative) const {
  if (n < 0) {
    value = derivative = 0.0;
    return;
  }
  if (n > size()) throw std::out_of_range("RecurrenceTable::eval: index beyond table");
  double pm1 = 0.0, p = 1.0, dm1 = 0.0, d = 0.0;
  for (int j = 0; j < n; ++j) {
    const double bm1 = j > 0 ? beta[j - 1] : 0.0;
    const double pn = ((x - alpha[j]) * p - bm1 * pm1) / beta[j];
    const double dn = ((x - alpha[j]) * d + p - bm1 * dm1) / beta[j];
    pm1 = p;
    p = pn;
    dm1 = d;
    d = dn;
  }
  value = p;
  derivative = d;
}

void RecurrenceTable::eval_all(int n, double x, std::span<double> out) const {
  if (n > size()) throw std::out_of_range("RecurrenceTable::eval_all: index beyond table");
  if (n < 0) return;
  out[0] = 1.0;
  if (n == 0) return;
  out[1] = (x - alpha[0]) / beta[0];
  for (int j = 1; j < n; ++j)
    out[j + 1] = ((x - alpha[j]) * out[j] - beta[j - 1] * out[j - 1]) / beta[j];
}

void RecurrenceTable::eval_all_with_derivative(int n, double x, std::span<double> values,
                                               std::span<double> derivatives) const {
  if (n > size()) throw std::out_of_range("RecurrenceTable::eval_all: index beyond table");
  if (n < 0) return;
  values[0] = 1.0;
  derivatives[0] = 0.0;
  if (n == 0) return;
  values[1] = (x - alpha[0]) / beta[0];
  derivatives[1] = 1.0 / beta[0];
  for (int j = 1; j < n; ++j) {
    values[j + 1] = ((x - alpha[j]) * values[j] - beta[j - 1] * values[j - 1]) / beta[j];
    derivatives[j + 1] =
        ((x - alpha[j]) * derivatives[j] + values[j] - beta[j - 1] * derivatives[j - 1]) / beta[j];
  }
}

// ---------------------------------------------------------------------------
// Classical Jacobi recurrence

RecurrenceTable jacobi_recurrence(double lo, double hi, double A, double B, int count) {
  if (!(A > -1 && B > -1)) throw std::invalid_argument("jacobi_recurrence: exponents <= -1");
  if (!(hi > lo)) throw std::invalid_argument("jacobi_recurrence: empty interval");
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  RecurrenceTable t;
  t.weight.lo = lo;
  t.weight.hi = hi;
  t.weight.exp_hi = A;
  t.weight.exp_lo = B;
  t.omega = std::pow(2.0, A + B + 1) *
            std::exp(std::lgamma(A + 1) + std::lgamma(B + 1) - std::lgamma(A + B + 2)) *
            std::pow(half, A + B + 1);
  t.alpha.resize(count);
  t.beta.resize(count);
  for (int n = 0; n < count; ++n) {
    double a, b;
    if (n == 0) {
      a = (B - A) / (A + B + 2);
      b = (2.0 / (A + B + 2)) * std::sqrt((A + 1) * (B + 1) / (A + B + 3));
    } else {
      const double s = 2.0 * n + A + B;
      a = (B * B - A * A) / (s * (s + 2));
      b = (2.0 / (s + 2)) * std::sqrt((n + 1) * (n + A + 1) * (n + B + 1) * (n + A + B + 1) /
                                      ((s + 1) * (s + 3)));
    }
    t.alpha[n] = mid + half * a;
    t.beta[n] = half * b;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Discretized Stieltjes bootstrap

namespace {

struct DiscreteMeasure {
  std::vector<double> x, w;
  double omega = 0;
};

// Gauss-Jacobi rule matched to the endpoint factors of the weight, with the
// smooth residual factors folded into the point weights.
DiscreteMeasure discretize(const WeightSpec& w, int npts, const Settings& settings) {
  const double mid = 0.5 * (w.lo + w.hi), half = 0.5 * (w.hi - w.lo);
  RecurrenceTable base = jacobi_recurrence(-1, 1, w.exp_hi, w.exp_lo, npts + 1);
  GaussRule rule = gauss_rule(base, npts, settings);
  DiscreteMeasure m;
  m.x.resize(npts);
  m.w.resize(npts);
  const double scale = std::pow(half, w.exp_hi + w.exp_lo + 1);
  for (int i = 0; i < npts; ++i) {
    const double x = mid + half * rule.nodes[i];
    double g = 1.0;
    if (w.exp_omx != 0) g *= std::pow(1.0 - x, w.exp_omx);
    if (w.exp_opx != 0) g *= std::pow(1.0 + x, w.exp_opx);
    if (w.exp_aff != 0) g *= std::pow(1.0 - w.aff_slope * x, w.exp_aff);
    m.x[i] = x;
    m.w[i] = scale * rule.weights[i] * g;
    m.omega += m.w[i];
  }
  return m;
}

// One Stieltjes pass over a fixed discrete measure, with reorthogonalization.
void stieltjes(const DiscreteMeasure& m, int count, std::vector<double>& alpha,
               std::vector<double>& beta, std::vector<std::vector<double>>* qs_out) {
  const int M = static_cast<int>(m.x.size());
  alpha.assign(count, 0.0);
  beta.assign(count, 0.0);
  std::vector<std::vector<double>> q;
  q.reserve(count + 1);
  q.emplace_back(M, 1.0);
  auto dot = [&](const std::vector<double>& f, const std::vector<double>& g) {
    double s = 0;
    for (int i = 0; i < M; ++i) s += m.w[i] * f[i] * g[i];
    return s / m.omega;
  };
  std::vector<double> r(M);
  for (int n = 0; n < count; ++n) {
    const auto& qn = q[n];
    double an = 0;
    for (int i = 0; i < M; ++i) an += m.w[i] * m.x[i] * qn[i] * qn[i];
    an /= m.omega;
    alpha[n] = an;
    for (int i = 0; i < M; ++i)
      r[i] = (m.x[i] - an) * qn[i] - (n > 0 ? beta[n - 1] * q[n - 1][i] : 0.0);
    // project out accumulated rounding against all previous polynomials
    for (int j = 0; j <= n; ++j) {
      const double c = dot(r, q[j]);
      for (int i = 0; i < M; ++i) r[i] -= c * q[j][i];
    }
    const double bn = std::sqrt(dot(r, r));
    if (!(bn > 0) || !std::isfinite(bn))
      throw NumericalError("bootstrap: recurrence broke down at n=" + std::to_string(n));
    beta[n] = bn;
    auto& qn1 = q.emplace_back(M);
    for (int i = 0; i < M; ++i) qn1[i] = r[i] / bn;
  }
  if (qs_out) *qs_out = std::move(q);
}

}  // namespace

RecurrenceTable bootstrap_recurrence(const WeightSpec& w, int count, const Settings& settings) {
  if (!w.integrable()) throw std::invalid_argument("bootstrap: weight not integrable");
  if (count < 0) throw std::invalid_argument("bootstrap: negative count");

  const double scale = w.hi - w.lo;
  int npts = 2 * count + 16;
  std::vector<double> alpha, beta, alpha_prev, beta_prev;
  DiscreteMeasure m = discretize(w, npts, settings);
  stieltjes(m, count, alpha, beta, nullptr);
  bool converged = count == 0;
  double worst = 0;
  for (int pass = 0; pass < settings.bootstrap_max_refine && !converged; ++pass) {
    alpha_prev = alpha;
    beta_prev = beta;
    npts *= 2;
    m = discretize(w, npts, settings);
    stieltjes(m, count, alpha, beta, nullptr);
    worst = 0;
    for (int n = 0; n < count; ++n) {
      worst = std::max(worst, std::abs(alpha[n] - alpha_prev[n]));
      worst = std::max(worst, std::abs(beta[n] - beta_prev[n]));
    }
    converged = worst <= settings.bootstrap_tol * scale;
  }
  if (!converged) {
    std::ostringstream os;
    os << "bootstrap: coefficients for " << w.describe() << " did not stabilize; last change "
       << worst << " after " << settings.bootstrap_max_refine << " refinements (" << npts
       << " points)";
    throw NumericalError(os.str());
  }

  RecurrenceTable t;
  t.weight = w;
  t.alpha = std::move(alpha);
  t.beta = std::move(beta);
  t.omega = m.omega;

  for (int n = 0; n < count; ++n) {
    if (!(t.beta[n] > 0)) throw NumericalError("bootstrap: nonpositive beta");
    if (!(t.alpha[n] > w.lo && t.alpha[n] < w.hi))
      throw NumericalError("bootstrap: alpha escaped the support interval");
  }

  // Orthonormality audit: evaluate the family through the three-term
  // recurrence and test the Gram matrix on the final discretization.
  if (count > 0) {
    const int naudit = std::min(count, 48);
    const int M = static_cast<int>(m.x.size());
    std::vector<double> vals((naudit + 1));
    std::vector<std::vector<double>> p(naudit + 1, std::vector<double>(M));
    for (int i = 0; i < M; ++i) {
      t.eval_all(naudit, m.x[i], vals);
      for (int n = 0; n <= naudit; ++n) p[n][i] = vals[n];
    }
    double worst_gram = 0;
    for (int a = 0; a <= naudit; ++a)
      for (int b = a; b <= naudit; ++b) {
        double s = 0;
        for (int i = 0; i < M; ++i) s += m.w[i] * p[a][i] * p[b][i];
        s /= m.omega;
        worst_gram = std::max(worst_gram, std::abs(s - (a == b ? 1.0 : 0.0)));
      }
    if (worst_gram > settings.bootstrap_gram_tol) {
      std::ostringstream os;
      os << "bootstrap: Gram audit failed for " << w.describe() << " (deviation " << worst_gram
         << ")";
      throw NumericalError(os.str());
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Christoffel-Darboux endpoint lift

RecurrenceTable lift_endpoint(const RecurrenceTable& table, Endpoint endpoint,
                              const Settings& settings) {
  const int L = table.size();
  if (L < 2) throw std::invalid_argument("lift_endpoint: table too short");
  const double y = endpoint == Endpoint::PlusOne ? 1.0 : -1.0;

  RecurrenceTable out;
  out.weight = table.weight;
  if (endpoint == Endpoint::PlusOne) {
    if (out.weight.hi == 1.0)
      out.weight.exp_hi += 1;
    else
      out.weight.exp_omx += 1;
  } else {
    out.weight.exp_opx += 1;
  }
  out.alpha.resize(L - 1);
  out.beta.resize(L - 1);

  // psi_n = y - alpha_n - beta_{n-1}/chi_{n-1},  chi_n = psi_n / beta_n.
  double chi_prev = 0;  // chi_{-1}, unused at n = 0
  double psi_n = y - table.alpha[0];
  double chi_n = psi_n / table.beta[0];
  out.omega = table.omega * y * psi_n;
  for (int n = 0; n < L - 1; ++n) {
    if (std::abs(chi_n) < settings.lift_chi_guard)
      throw NumericalError("lift_endpoint: ratio recurrence broke down at n=" + std::to_string(n));
    const double psi_next = y - table.alpha[n + 1] - table.beta[n] / chi_n;
    out.alpha[n] = table.alpha[n] + (n > 0 ? table.beta[n - 1] / chi_prev : 0.0) -
                   table.beta[n] / chi_n;
    const double ratio = psi_next / psi_n;
    if (!(ratio > 0) || !std::isfinite(ratio))
      throw NumericalError("lift_endpoint: negative norm ratio at n=" + std::to_string(n));
    out.beta[n] = table.beta[n] * std::sqrt(ratio);
    chi_prev = chi_n;
    psi_n = psi_next;
    chi_n = n + 1 < L ? psi_next / table.beta[n + 1] : 0.0;
  }
  return out;
}

}  // namespace sliceop
