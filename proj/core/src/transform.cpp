#include "sliceop/transform.hpp"

#include <cmath>
#include <stdexcept>

namespace sliceop {

QuadRule2D quad_rule_2d(Workspace& ws, const BasisParams& p, int N) {
  const Domain& dom = ws.domain();
  validate_params(dom.kind(), p);
  auto& pool = ws.pool();
  QuadRule2D rule;
  rule.exact_degree = N;
  const int half = (N + 2) / 2;  // ceil((N+1)/2)
  const int m1 = dom.is_disk_like() ? half : N + 1;
  const int m2 = half;
  // exact-size rules: the node count is part of the contract
  TableRef st = pool.r_table(p.a, p.b, p.c + p.d + 1, m1 + 1);
  TableRef tt = pool.p_table(p.d, p.c, m2 + 1);
  const GaussRule sr = gauss_rule(*st, m1, ws.settings());
  const GaussRule tr = gauss_rule(*tt, m2, ws.settings());
  rule.reflect = dom.is_disk_like();
  rule.x.reserve(static_cast<std::size_t>(m1) * m2);
  rule.y.reserve(rule.x.capacity());
  rule.w.reserve(rule.x.capacity());
  for (int j = 0; j < m1; ++j) {
    const double s = sr.nodes[j];
    const double r = dom.rho(s);
    for (int i = 0; i < m2; ++i) {
      rule.x.push_back(s);
      rule.y.push_back(r * tr.nodes[i]);
      rule.w.push_back(sr.weights[j] * tr.weights[i]);
    }
  }
  return rule;
}

BlockVector analyze(Workspace& ws, const BasisParams& p, const ScalarField& f, int N) {
  const Domain& dom = ws.domain();
  BasisContext& ctx = ws.basis(p);
  ctx.ensure_degree(N);
  QuadRule2D rule = quad_rule_2d(ws, p, 2 * N);

  BlockVector out(BasisId{dom, p, false}, N);
  const int len = out.size();
  std::vector<double> basis(len);
  for (int q = 0; q < rule.size(); ++q) {
    const double xq = rule.x[q], yq = rule.y[q], wq = rule.w[q];
    ctx.eval_all(N, xq, yq, basis);
    const double fv = wq * f(xq, yq);
    for (int i = 0; i < len; ++i) out[i] += fv * basis[i];
    if (rule.reflect) {
      ctx.eval_all(N, xq, -yq, basis);
      const double fm = wq * f(xq, -yq);
      for (int i = 0; i < len; ++i) out[i] += fm * basis[i];
    }
  }
  const double half = rule.reflect ? 0.5 : 1.0;
  for (int n = 0; n <= N; ++n)
    for (int k = 0; k <= n; ++k) out(n, k) *= half / ctx.norm2(n, k);
  return out;
}

namespace {

void check_point(const Workspace& ws, double x, double y) {
  if (!ws.domain().contains_closure(x, y, ws.settings().boundary_clamp))
    throw std::domain_error("synthesize: point outside the closure of Omega");
}

}  // namespace

double synthesize_at(Workspace& ws, const BlockVector& coeffs, double x, double y) {
  check_point(ws, x, y);
  BasisContext& ctx = ws.basis(coeffs.basis().params);
  ctx.ensure_degree(coeffs.degree());
  double v = ctx.clenshaw(coeffs.data(), coeffs.degree(), x, y);
  if (coeffs.basis().weighted) v *= weight_2d(ws.domain(), coeffs.basis().params, x, y);
  return v;
}

std::vector<double> synthesize(Workspace& ws, const BlockVector& coeffs,
                               const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("synthesize: point list mismatch");
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = synthesize_at(ws, coeffs, xs[i], ys[i]);
  return out;
}

std::array<double, 3> synthesize_gradient_at(Workspace& ws, const BlockVector& coeffs, double x,
                                             double y) {
  check_point(ws, x, y);
  BasisContext& ctx = ws.basis(coeffs.basis().params);
  const int N = coeffs.degree();
  ctx.ensure_degree(N);
  const int len = coeffs.size();
  std::vector<double> v(len), gx(len), gy(len);
  ctx.eval_all_grad(N, x, y, v, gx, gy);
  double s = 0, sx = 0, sy = 0;
  for (int i = 0; i < len; ++i) {
    s += coeffs[i] * v[i];
    sx += coeffs[i] * gx[i];
    sy += coeffs[i] * gy[i];
  }
  if (!coeffs.basis().weighted) return {s, sx, sy};
  const double w = weight_2d(ws.domain(), coeffs.basis().params, x, y);
  const auto wg = weight_2d_gradient(ws.domain(), coeffs.basis().params, x, y);
  return {w * s, wg[0] * s + w * sx, wg[1] * s + w * sy};
}

}  // namespace sliceop
