#include "sliceop/pde.hpp"

#include <cmath>

namespace sliceop {

namespace {

double relative_residual(const BBBMatrix& A, std::span<const double> u,
                         std::span<const double> f) {
  std::vector<double> r(f.size());
  A.matvec(u, r);
  double worst = 0, fmax = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    worst = std::max(worst, std::abs(r[i] - f[i]));
    fmax = std::max(fmax, std::abs(f[i]));
  }
  return fmax > 0 ? worst / fmax : worst;
}

Solution finish(Workspace& ws, const BBBMatrix& A, BlockVector f, const BasisParams& space,
                double shift) {
  const std::vector<double> u = bbb_solve(A, f.data(), ws.settings());
  Solution sol;
  sol.coeffs = BlockVector(BasisId{ws.domain(), space, true}, f.degree());
  std::copy(u.begin(), u.end(), sol.coeffs.data().begin());
  sol.constant_shift = shift;
  sol.residual = relative_residual(A, u, f.data());
  return sol;
}

}  // namespace

Solution solve_poisson(Workspace& ws, const ScalarField& f, int N) {
  const BasisParams p1 = ws.dirichlet_params();
  BlockVector fc = analyze(ws, p1, f, N);
  BBBMatrix L = laplacian_dirichlet(ws, N);
  return finish(ws, L, std::move(fc), p1, 0.0);
}

Solution solve_helmholtz(Workspace& ws, const ScalarField& f, double k, const ScalarField& v,
                         int N, double bc, int v_degree) {
  const BasisParams p1 = ws.dirichlet_params();
  const BasisParams p0{};
  const double k2 = k * k;
  ScalarField g = f;
  if (bc != 0.0 && k2 != 0.0)
    g = [&f, &v, bc, k2](double x, double y) { return f(x, y) - bc * k2 * v(x, y); };
  BlockVector gc = analyze(ws, p1, g, N);
  BBBMatrix A = laplacian_dirichlet(ws, N);
  if (k2 != 0.0) {
    BlockVector vc = analyze(ws, p0, v, v_degree);
    // drop trailing blocks that are pure rounding noise
    const double vmax = vc.max_norm();
    int m = vc.degree();
    auto block_small = [&](int n) {
      for (int j = 0; j <= n; ++j)
        if (std::abs(vc(n, j)) > 1e-14 * vmax) return false;
      return true;
    };
    while (m > 0 && block_small(m)) --m;
    vc = vc.resized(m);
    const int wide = N + 1 + m + 1;
    BBBMatrix V = multiplication_operator(ws, vc, wide);
    BBBMatrix T = build_conversion(ws, p0, ws.dirichlet_params(), N + 1, wide);
    BBBMatrix TW = build_conversion_weighted(ws, p1, ws.dirichlet_params(), wide, N + 1);
    BBBMatrix VW = T * (V * TW);
    VW *= k2;
    A = A + VW;
  }
  return finish(ws, A, std::move(gc), p1, bc);
}

Solution solve_biharmonic(Workspace& ws, const ScalarField& f, int N) {
  const BasisParams p2 = ws.biharmonic_params();
  BlockVector fc = analyze(ws, p2, f, N);
  BBBMatrix B = biharmonic_operator(ws, N);
  return finish(ws, B, std::move(fc), p2, 0.0);
}

double solution_value(Workspace& ws, const Solution& sol, double x, double y) {
  return synthesize_at(ws, sol.coeffs, x, y) + sol.constant_shift;
}

std::array<double, 3> solution_gradient(Workspace& ws, const Solution& sol, double x, double y) {
  auto g = synthesize_gradient_at(ws, sol.coeffs, x, y);
  g[0] += sol.constant_shift;
  return g;
}

PfemSystem pfem_assemble(Workspace& ws, int N) {
  const DomainKind kind = ws.domain().kind();
  const BasisParams line = line_mask(kind), arc = arc_mask(kind);
  const BasisParams p1 = line + arc, p0{};

  BBBMatrix wx = build_wx(ws, p1, N + 4, N + 1);
  BBBMatrix lam0 = build_norm_diagonal(ws, p0, N + 4);
  BBBMatrix termx = wx.transpose() * (lam0 * wx);

  BBBMatrix wy = build_wy(ws, p1, N + 2, N + 1);
  BBBMatrix tw = build_conversion_weighted(ws, p1 - arc, line, N + 4, N + 2);
  BBBMatrix grad_y = tw * wy;
  BBBMatrix termy = grad_y.transpose() * (lam0 * grad_y);

  PfemSystem sys;
  sys.degree = N;
  sys.stiffness = termx + termy;
  sys.stiffness.trim(ws.settings().structural_trim);
  sys.load_scale = build_norm_diagonal(ws, p1, N + 1);
  return sys;
}

BlockVector pfem_load(Workspace& ws, const PfemSystem& sys, const ScalarField& f) {
  const BasisParams p1 = ws.dirichlet_params();
  BlockVector fc = analyze(ws, p1, f, sys.degree);
  BlockVector out = fc;
  sys.load_scale.matvec(fc.data(), out.data());
  return out;
}

Solution pfem_solve(Workspace& ws, const PfemSystem& sys, const ScalarField& f) {
  BlockVector load = pfem_load(ws, sys, f);
  const std::vector<double> u = bbb_solve(sys.stiffness, load.data(), ws.settings());
  Solution sol;
  sol.coeffs = BlockVector(BasisId{ws.domain(), ws.dirichlet_params(), true}, sys.degree);
  std::copy(u.begin(), u.end(), sol.coeffs.data().begin());
  sol.residual = relative_residual(sys.stiffness, u, load.data());
  return sol;
}

std::vector<std::array<double, 2>> boundary_points(const Domain& dom, int count) {
  std::vector<std::array<double, 2>> pts;
  pts.reserve(count);
  const double alpha = dom.alpha(), beta = dom.beta();
  if (dom.is_disk_like()) {
    const bool has_right_line = dom.kind() == DomainKind::DiskSlice;
    const int pieces = has_right_line ? 4 : 3;
    const int per = std::max(1, count / pieces);
    const double ra = dom.rho(alpha);
    for (int i = 0; i < per; ++i) {  // left chord
      const double t = (i + 0.5) / per;
      pts.push_back({alpha, ra * (2 * t - 1)});
    }
    if (has_right_line) {
      const double rb = dom.rho(beta);
      for (int i = 0; i < per; ++i) {
        const double t = (i + 0.5) / per;
        pts.push_back({beta, rb * (2 * t - 1)});
      }
    }
    while (static_cast<int>(pts.size()) < count) {  // the two arcs
      const double t = (pts.size() % 2 == 0 ? 1.0 : -1.0);
      const double u = (pts.size() + 0.5) / count;
      const double x = alpha + (beta - alpha) * u;
      pts.push_back({x, t * dom.rho(x)});
    }
  } else {
    const double xi = dom.xi();
    const int per = std::max(1, count / 4);
    for (int i = 0; i < per; ++i) {
      const double t = (i + 0.5) / per;
      pts.push_back({0.0, t});                     // left edge, y in (0,1)
      pts.push_back({1.0, t * (1.0 - xi)});        // right edge
      pts.push_back({t, 0.0});                     // bottom
      pts.push_back({t, 1.0 - xi * t});            // slanted top
    }
  }
  pts.resize(count);
  return pts;
}

}  // namespace sliceop
