#include "sliceop/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "sliceop/errors.hpp"

namespace sliceop {

namespace {

// values[i*M + m] = p_i(nodes[m]); derivs likewise when requested
struct EvalMat {
  std::vector<double> v, dv;
  int M = 0;
  double val(int i, int m) const { return v[static_cast<std::size_t>(i) * M + m]; }
  double der(int i, int m) const { return dv[static_cast<std::size_t>(i) * M + m]; }
};

EvalMat eval_matrix(const RecurrenceTable& t, const GaussRule& rule, int maxdeg,
                    bool with_deriv = false) {
  EvalMat em;
  em.M = rule.size();
  em.v.resize(static_cast<std::size_t>(maxdeg + 1) * em.M);
  if (with_deriv) em.dv.resize(em.v.size());
  std::vector<double> col(maxdeg + 1), dcol(maxdeg + 1);
  for (int m = 0; m < em.M; ++m) {
    const double x = rule.nodes[m];
    if (!with_deriv) {
      t.eval_all(maxdeg, x, col);
    } else {
      t.eval_all_with_derivative(maxdeg, x, col, dcol);
      for (int i = 0; i <= maxdeg; ++i) em.dv[static_cast<std::size_t>(i) * em.M + m] = dcol[i];
    }
    for (int i = 0; i <= maxdeg; ++i) em.v[static_cast<std::size_t>(i) * em.M + m] = col[i];
  }
  return em;
}

// Reserve the x-family ladder of a parameter set so level requests lift
// instead of re-bootstrapping.
void reserve_ladder(Workspace& ws, const BasisParams& p, int N) {
  auto& pool = ws.pool();
  pool.r_table(p.a, p.b, rho_exponent(p, 0), (N + 8) + 2 * (N + 2) + 2);
}

// The sparsity proofs integrate by parts with polynomial weight ratios, so
// operator assembly is defined for nonnegative integer parameters only.
void require_integer_params(const BasisParams& p, const char* who) {
  auto integral = [](double v) { return v == std::floor(v); };
  if (!p.nonnegative() || !integral(p.a) || !integral(p.b) || !integral(p.c) || !integral(p.d))
    throw std::invalid_argument(std::string(who) +
                                ": operator assembly requires nonnegative integer parameters");
}

int mask_degree(const BasisParams& delta) {
  return static_cast<int>(delta.a + delta.b + delta.c + delta.d);
}

bool skip_by_parity(const Domain& dom, int k, int j) {
  return dom.is_disk_like() && ((k - j) & 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// d/dy

BBBMatrix build_dy(Workspace& ws, const BasisParams& src, int block_rows, int block_cols) {
  const Domain& dom = ws.domain();
  validate_params(dom.kind(), src);
  require_integer_params(src, "build_dy");
  auto& pool = ws.pool();
  const BasisParams dst = src + arc_mask(dom.kind());

  const int kmax = block_cols - 1;
  RuleRef prule = pool.p_rule(dst.d, dst.c, kmax + 4);
  TableRef psrc = pool.p_table(src.d, src.c, kmax + 4);
  TableRef pdst = pool.p_table(dst.d, dst.c, kmax + 4);
  const EvalMat srcm = eval_matrix(*psrc, *prule, kmax, true);
  const EvalMat dstm = eval_matrix(*pdst, *prule, kmax);

  BBBMatrix D(block_rows, block_cols, -1, 1, -1, 1);
  for (int n = 1; n < block_cols; ++n) {
    const int m = n - 1;
    if (m >= block_rows) continue;
    for (int k = 1; k <= n; ++k) {
      double s = 0;
      for (int q = 0; q < prule->size(); ++q)
        s += prule->weights[q] * srcm.der(k, q) * dstm.val(k - 1, q);
      D.at(m, n, k - 1, k) = s / pdst->omega;
    }
  }
  return D;
}

// ---------------------------------------------------------------------------
// d/dx

BBBMatrix build_dx(Workspace& ws, const BasisParams& src, int block_rows, int block_cols) {
  const Domain& dom = ws.domain();
  validate_params(dom.kind(), src);
  require_integer_params(src, "build_dx");
  auto& pool = ws.pool();
  const BasisParams dst = src + line_mask(dom.kind()) + arc_mask(dom.kind());
  const int N = std::max(block_rows, block_cols);
  reserve_ladder(ws, src, N);
  reserve_ladder(ws, dst, N);

  const int kmax = block_cols - 1;
  // t-direction integrals, by (k, j-offset)
  RuleRef prule = pool.p_rule(dst.d, dst.c, kmax + 4);
  TableRef psrc = pool.p_table(src.d, src.c, kmax + 4);
  TableRef pdst = pool.p_table(dst.d, dst.c, kmax + 4);
  const EvalMat pm_src = eval_matrix(*psrc, *prule, kmax, true);
  const EvalMat pm_dst = eval_matrix(*pdst, *prule, kmax);
  auto t_plain = [&](int k, int j) {
    double s = 0;
    for (int q = 0; q < prule->size(); ++q)
      s += prule->weights[q] * pm_src.val(k, q) * pm_dst.val(j, q);
    return s;
  };
  auto t_slope = [&](int k, int j) {
    double s = 0;
    for (int q = 0; q < prule->size(); ++q)
      s += prule->weights[q] * prule->nodes[q] * pm_src.der(k, q) * pm_dst.val(j, q);
    return s;
  };

  BBBMatrix D(block_rows, block_cols, -1, 3, 0, 2);
  const double pomega = pdst->omega;
  const bool trap = dom.kind() == DomainKind::Trapezium;

  for (int k = 0; k <= kmax; ++k) {
    const double e_src = rho_exponent(src, k);
    const int maxdeg = block_cols - 1 - k;
    for (int j = std::max(0, k - 2); j <= k; ++j) {
      if (skip_by_parity(dom, k, j)) continue;
      const double e_dst = rho_exponent(dst, j);
      const double tp = t_plain(k, j);
      const double tsl = t_slope(k, j);
      // measure exponents for the two x-integral families
      const double E1 = src.c + src.d + k + j + 3;
      const double E2 = trap ? src.c + src.d + k + j + 2 : src.c + src.d + k + j + 1;
      const int bdeg = maxdeg + 2;
      RuleRef rule1 = pool.r_rule(dst.a, dst.b, E1, maxdeg + 6);
      RuleRef rule2 = pool.r_rule(dst.a, dst.b, E2, maxdeg + 6);
      TableRef tsrc = pool.r_table(src.a, src.b, e_src, maxdeg + 8);
      TableRef tdst = pool.r_table(dst.a, dst.b, e_dst, bdeg + 8);
      const EvalMat a1 = eval_matrix(*tsrc, *rule1, maxdeg, true);
      const EvalMat b1 = eval_matrix(*tdst, *rule1, bdeg);
      const EvalMat a2 = eval_matrix(*tsrc, *rule2, maxdeg);
      const EvalMat b2 = eval_matrix(*tdst, *rule2, bdeg);
      const double womega = pool.r_table(dst.a, dst.b, e_dst, 8)->omega;
      for (int n = k; n < block_cols; ++n) {
        for (int m = std::max(j, n - 3); m <= n - 1; ++m) {
          if (m < 0 || m >= block_rows) continue;
          const int ia = n - k, ib = m - j;
          if (ib > bdeg) continue;
          double t1x = 0, t2x = 0;
          for (int q = 0; q < rule1->size(); ++q)
            t1x += rule1->weights[q] * a1.der(ia, q) * b1.val(ib, q);
          if (trap) {
            for (int q = 0; q < rule2->size(); ++q)
              t2x += rule2->weights[q] * a2.val(ia, q) * b2.val(ib, q);
            t2x *= -dom.xi();
          } else {
            for (int q = 0; q < rule2->size(); ++q)
              t2x += rule2->weights[q] * rule2->nodes[q] * a2.val(ia, q) * b2.val(ib, q);
            t2x = -t2x;
          }
          const double entry = (t1x * tp + k * t2x * tp - t2x * tsl) / (womega * pomega);
          if (entry != 0.0) D.at(m, n, j, k) = entry;
        }
      }
    }
  }
  return D;
}

// ---------------------------------------------------------------------------
// conversions

BBBMatrix build_conversion(Workspace& ws, const BasisParams& src, const BasisParams& delta,
                           int block_rows, int block_cols) {
  const Domain& dom = ws.domain();
  validate_params(dom.kind(), src);
  require_integer_params(src, "build_conversion");
  const BasisParams dst = src + delta;
  validate_params(dom.kind(), dst);
  auto& pool = ws.pool();
  const int N = std::max(block_rows, block_cols);
  reserve_ladder(ws, src, N);
  reserve_ladder(ws, dst, N);

  const int blockU = mask_degree(delta);
  const int subU = static_cast<int>(delta.c + delta.d);
  const int kmax = block_cols - 1;

  RuleRef prule = pool.p_rule(dst.d, dst.c, kmax + 4);
  TableRef psrc = pool.p_table(src.d, src.c, kmax + 4);
  TableRef pdst = pool.p_table(dst.d, dst.c, kmax + 4);
  const EvalMat pm_src = eval_matrix(*psrc, *prule, kmax);
  const EvalMat pm_dst = eval_matrix(*pdst, *prule, kmax);

  BBBMatrix T(block_rows, block_cols, 0, blockU, 0, subU);
  const double pomega = pdst->omega;
  for (int k = 0; k <= kmax; ++k) {
    const double e_src = rho_exponent(src, k);
    const int maxdeg = block_cols - 1 - k + blockU;
    for (int j = std::max(0, k - subU); j <= k; ++j) {
      if (skip_by_parity(dom, k, j)) continue;
      double tint = 0;
      for (int q = 0; q < prule->size(); ++q)
        tint += prule->weights[q] * pm_src.val(k, q) * pm_dst.val(j, q);
      const double e_dst = rho_exponent(dst, j);
      const double E = dst.c + dst.d + k + j + 1;
      RuleRef rule = pool.r_rule(dst.a, dst.b, E, maxdeg + 6);
      TableRef tsrc = pool.r_table(src.a, src.b, e_src, maxdeg + 8);
      TableRef tdst = pool.r_table(dst.a, dst.b, e_dst, maxdeg + 8);
      const EvalMat am = eval_matrix(*tsrc, *rule, maxdeg);
      const EvalMat bm = eval_matrix(*tdst, *rule, maxdeg);
      const double womega = pool.r_table(dst.a, dst.b, e_dst, 8)->omega;
      for (int n = k; n < block_cols; ++n) {
        for (int m = std::max(j, n - blockU); m <= n; ++m) {
          if (m >= block_rows) continue;
          const int ia = n - k, ib = m - j;
          if (ia > maxdeg || ib > maxdeg) continue;
          double xint = 0;
          for (int q = 0; q < rule->size(); ++q)
            xint += rule->weights[q] * am.val(ia, q) * bm.val(ib, q);
          const double entry = xint * tint / (womega * pomega);
          if (entry != 0.0) T.at(m, n, j, k) = entry;
        }
      }
    }
  }
  return T;
}

// ---------------------------------------------------------------------------
// weighted operators through the integration-by-parts adjoints

namespace {

// diag of ||H||^2 per (block, inner) for params p, as reusable vectors
struct NormDiag {
  std::vector<double> w;  // omega_R at level k
  double pomega = 0;
  double operator()(int, int k) const { return w[k] * pomega; }
};

NormDiag norm_diag(Workspace& ws, const BasisParams& p, int blocks) {
  NormDiag nd;
  auto& pool = ws.pool();
  nd.pomega = pool.p_table(p.d, p.c, 8)->omega;
  nd.w.resize(blocks + 1);
  for (int k = 0; k <= blocks; ++k) nd.w[k] = pool.r_table(p.a, p.b, rho_exponent(p, k), 8)->omega;
  return nd;
}

BBBMatrix adjoint_scaled(Workspace& ws, BBBMatrix unweighted, const BasisParams& src,
                         const BasisParams& dst, double sign) {
  // weighted-op[(m,j),(n,k)] = sign * ||H^src_{n,k}||^2 / ||H^dst_{m,j}||^2
  //                                 * unweighted-op[(n,k),(m,j)]
  BBBMatrix W = unweighted.transpose();
  const NormDiag num = norm_diag(ws, src, W.block_cols());
  const NormDiag den = norm_diag(ws, dst, W.block_rows());
  W.scale_cols([&](int n, int k) { return num(n, k); });
  W.scale_rows([&](int m, int j) { return 1.0 / den(m, j); });
  W *= sign;
  return W;
}

}  // namespace

BBBMatrix build_wx(Workspace& ws, const BasisParams& src, int block_rows, int block_cols) {
  const BasisParams delta = line_mask(ws.domain().kind()) + arc_mask(ws.domain().kind());
  const BasisParams dst = src - delta;
  if (!dst.nonnegative())
    throw std::invalid_argument("build_wx: decremented parameters would go negative");
  BBBMatrix Dx = build_dx(ws, dst, block_cols, block_rows);
  return adjoint_scaled(ws, std::move(Dx), src, dst, -1.0);
}

BBBMatrix build_wy(Workspace& ws, const BasisParams& src, int block_rows, int block_cols) {
  const BasisParams delta = arc_mask(ws.domain().kind());
  const BasisParams dst = src - delta;
  if (!dst.nonnegative())
    throw std::invalid_argument("build_wy: decremented parameters would go negative");
  BBBMatrix Dy = build_dy(ws, dst, block_cols, block_rows);
  return adjoint_scaled(ws, std::move(Dy), src, dst, -1.0);
}

BBBMatrix build_conversion_weighted(Workspace& ws, const BasisParams& src,
                                    const BasisParams& delta, int block_rows, int block_cols) {
  const BasisParams dst = src - delta;
  if (!dst.nonnegative())
    throw std::invalid_argument("build_conversion_weighted: parameters would go negative");
  BBBMatrix T = build_conversion(ws, dst, delta, block_cols, block_rows);
  return adjoint_scaled(ws, std::move(T), src, dst, +1.0);
}

BBBMatrix build_norm_diagonal(Workspace& ws, const BasisParams& p, int blocks) {
  const NormDiag nd = norm_diag(ws, p, blocks);
  return BBBMatrix::diagonal(blocks, [&](int n, int k) { return nd(n, k); });
}

// ---------------------------------------------------------------------------
// compositions

BBBMatrix laplacian_dirichlet(Workspace& ws, int N) {
  const DomainKind kind = ws.domain().kind();
  const BasisParams line = line_mask(kind), arc = arc_mask(kind);
  const BasisParams p1 = line + arc, p0{};

  BBBMatrix wx = build_wx(ws, p1, N + 4, N + 1);
  BBBMatrix dx = build_dx(ws, p0, N + 1, N + 4);
  BBBMatrix term = dx * wx;

  BBBMatrix wy = build_wy(ws, p1, N + 2, N + 1);
  BBBMatrix twab = build_conversion_weighted(ws, p1 - arc, line, N + 4, N + 2);
  BBBMatrix dy = build_dy(ws, p0, N + 3, N + 4);
  BBBMatrix tab = build_conversion(ws, p0 + arc, line, N + 1, N + 3);
  BBBMatrix out = term + tab * (dy * (twab * wy));
  out.trim(ws.settings().structural_trim);
  return out;
}

BBBMatrix laplacian_plain_to_bi(Workspace& ws, int block_rows, int block_cols) {
  const DomainKind kind = ws.domain().kind();
  const BasisParams line = line_mask(kind), arc = arc_mask(kind);
  const BasisParams p0{}, p1 = line + arc;

  BBBMatrix dx0 = build_dx(ws, p0, block_cols, block_cols);
  BBBMatrix dx1 = build_dx(ws, p1, block_rows, block_cols);
  BBBMatrix term = dx1 * dx0;

  BBBMatrix dy0 = build_dy(ws, p0, block_cols, block_cols);
  BBBMatrix t1 = build_conversion(ws, p0 + arc, line, block_cols, block_cols);
  BBBMatrix dy1 = build_dy(ws, p1, block_cols, block_cols);
  BBBMatrix t2 = build_conversion(ws, p1 + arc, line, block_rows, block_cols);
  BBBMatrix out = term + t2 * (dy1 * (t1 * dy0));
  out.trim(ws.settings().structural_trim);
  return out;
}

BBBMatrix laplacian_bi_to_plain(Workspace& ws, int block_rows, int block_cols) {
  const DomainKind kind = ws.domain().kind();
  const BasisParams line = line_mask(kind), arc = arc_mask(kind);
  const BasisParams p1 = line + arc, p2 = p1 + p1;

  BBBMatrix wx2 = build_wx(ws, p2, block_cols + 3, block_cols);
  BBBMatrix wx1 = build_wx(ws, p1, block_rows, block_cols + 3);
  BBBMatrix term = wx1 * wx2;

  BBBMatrix wy2 = build_wy(ws, p2, block_cols + 1, block_cols);
  BBBMatrix tw2 = build_conversion_weighted(ws, p2 - arc, line, block_cols + 3, block_cols + 1);
  BBBMatrix wy1 = build_wy(ws, p1, block_cols + 4, block_cols + 3);
  BBBMatrix tw1 = build_conversion_weighted(ws, p1 - arc, line, block_rows, block_cols + 4);
  BBBMatrix out = term + tw1 * (wy1 * (tw2 * wy2));
  out.trim(ws.settings().structural_trim);
  return out;
}

BBBMatrix biharmonic_operator(Workspace& ws, int N) {
  BBBMatrix lower = laplacian_bi_to_plain(ws, N + 7, N + 1);
  BBBMatrix upper = laplacian_plain_to_bi(ws, N + 1, N + 7);
  BBBMatrix out = upper * lower;
  out.trim(ws.settings().structural_trim);
  return out;
}

// ---------------------------------------------------------------------------
// multiplication operator via the Clenshaw recurrence with matrix arguments

BBBMatrix multiplication_operator(Workspace& ws, const BlockVector& v, int nblocks) {
  if (v.basis().weighted)
    throw std::invalid_argument("multiplication_operator: v must be in an unweighted basis");
  BasisContext& ctx = ws.basis(v.basis().params);
  int M = v.degree();
  while (M > 0) {  // ignore trailing zero blocks
    bool zero = true;
    for (int k = 0; k <= M; ++k)
      if (v(M, k) != 0.0) zero = false;
    if (!zero) break;
    --M;
  }
  ctx.ensure_degree(std::max(M + 1, nblocks));
  if (M == 0) {
    BBBMatrix I = BBBMatrix::identity(nblocks);
    I *= v(0, 0);
    return I;
  }
  const BBBMatrix X = ctx.jacobi_x(nblocks, nblocks).transpose();
  const BBBMatrix Y = ctx.jacobi_y(nblocks, nblocks).transpose();
  auto scaled_id = [&](double s) {
    BBBMatrix I = BBBMatrix::identity(nblocks);
    I *= s;
    return I;
  };
  auto lin = [](const BBBMatrix& m, double s) {
    BBBMatrix t = m;
    t *= s;
    return t;
  };

  std::vector<BBBMatrix> g1(M + 1), g2;
  for (int k = 0; k <= M; ++k) g1[k] = scaled_id(v(M, k));
  for (int n = M - 1; n >= 0; --n) {
    const auto& d = ctx.left_inverse_row(n);
    std::vector<BBBMatrix> psi_x(n + 1), psi_y(n + 1);
    for (int r = 0; r <= n; ++r) {
      psi_x[r] = lin(g1[r], 1.0 / ctx.x_up(n, r));
      if (d[r] != 0.0) psi_x[r] = psi_x[r] + lin(g1[n + 1], d[r]);
      psi_y[r] = lin(g1[n + 1], d[n + 1 + r]);
    }
    std::vector<BBBMatrix> next(n + 1);
    for (int c = 0; c <= n; ++c) {
      // next = v(n,c) I - psi (B_n - G_n(X,Y)) - chi C_{n+1}
      BBBMatrix acc = scaled_id(v(n, c));
      acc = acc + lin(psi_x[c], -ctx.x_diag(n, c)) + psi_x[c] * X;
      acc = acc + lin(psi_y[c], -ctx.y_mid(n, c, c)) + psi_y[c] * Y;
      if (c + 1 <= n) acc = acc + lin(psi_y[c + 1], -ctx.y_mid(n, c + 1, c));
      if (c - 1 >= 0) acc = acc + lin(psi_y[c - 1], -ctx.y_mid(n, c - 1, c));
      if (!g2.empty()) {
        const auto& d1 = ctx.left_inverse_row(n + 1);
        BBBMatrix chix = lin(g2[c], 1.0 / ctx.x_up(n + 1, c));
        if (d1[c] != 0.0) chix = chix + lin(g2[n + 2], d1[c]);
        acc = acc + lin(chix, -ctx.x_up(n, c));
        for (int r = std::max(0, c - 1); r <= std::min(n + 1, c + 1); ++r) {
          const double cv = ctx.y_down(n + 1, r, c);
          if (cv != 0.0) acc = acc + lin(g2[n + 2], -d1[n + 2 + r] * cv);
        }
      }
      next[c] = std::move(acc);
    }
    g2 = std::move(g1);
    g1 = std::move(next);
  }
  return g1[0];
}

BBBMatrix build_operator(Workspace& ws, const OperatorRequest& req) {
  const int N = req.degree;
  const DomainKind kind = ws.domain().kind();
  const BasisParams line = line_mask(kind), arc = arc_mask(kind);
  switch (req.kind) {
    case OperatorKind::Identity: return BBBMatrix::identity(N + 1);
    case OperatorKind::Dx: return build_dx(ws, req.source, N + 1, N + 1);
    case OperatorKind::Dy: return build_dy(ws, req.source, N + 1, N + 1);
    case OperatorKind::Wx: return build_wx(ws, req.source, N + 1, N + 1);
    case OperatorKind::Wy: return build_wy(ws, req.source, N + 1, N + 1);
    case OperatorKind::Tab: return build_conversion(ws, req.source, line, N + 1, N + 1);
    case OperatorKind::Tc: return build_conversion(ws, req.source, arc, N + 1, N + 1);
    case OperatorKind::Tabc: return build_conversion(ws, req.source, line + arc, N + 1, N + 1);
    case OperatorKind::TWab:
      return build_conversion_weighted(ws, req.source, line, N + 1, N + 1);
    case OperatorKind::TWc: return build_conversion_weighted(ws, req.source, arc, N + 1, N + 1);
    case OperatorKind::TWabc:
      return build_conversion_weighted(ws, req.source, line + arc, N + 1, N + 1);
    case OperatorKind::Jx: return ws.basis(req.source).jacobi_x(N + 1, N + 1);
    case OperatorKind::Jy: return ws.basis(req.source).jacobi_y(N + 1, N + 1);
    case OperatorKind::LaplacianDirichlet: return laplacian_dirichlet(ws, N);
    case OperatorKind::LaplacianPlainToBi: return laplacian_plain_to_bi(ws, N + 1, N + 1);
    case OperatorKind::LaplacianBiToPlain: return laplacian_bi_to_plain(ws, N + 1, N + 1);
    case OperatorKind::Biharmonic: return biharmonic_operator(ws, N);
    case OperatorKind::VariableCoeff: return multiplication_operator(ws, req.coeff, N + 1);
  }
  throw std::invalid_argument("build_operator: unknown kind");
}

}  // namespace sliceop
