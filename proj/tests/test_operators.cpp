#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sliceop/operators.hpp"
#include "sliceop/transform.hpp"

using namespace sliceop;

namespace {

const Domain kDisk = Domain::disk_slice(0.25, 0.75);

Workspace& disk_ws() {
  static Workspace ws(kDisk);
  return ws;
}

struct Bounds {
  int L, U, lam, mu;
};

// max |entry| outside the given bounds over the dense form, plus a check
// that the stored structure never exceeds them
double outside_bounds(const BBBMatrix& A, const Bounds& b) {
  CHECK(A.lower_block_bandwidth() <= b.L);
  CHECK(A.upper_block_bandwidth() <= b.U);
  CHECK(A.lower_sub_bandwidth() <= b.lam);
  CHECK(A.upper_sub_bandwidth() <= b.mu);
  double worst = 0;
  for (int i = 0; i < A.block_rows(); ++i)
    for (int j = 0; j < A.block_cols(); ++j)
      for (int r = 0; r <= i; ++r)
        for (int c = 0; c <= j; ++c) {
          const bool inside = (j - i >= -b.L && j - i <= b.U && c - r >= -b.lam && c - r <= b.mu);
          if (!inside) worst = std::max(worst, std::abs(A.get(i, j, r, c)));
        }
  return worst;
}

// dense operator entries through the 2D quadrature route (the expensive
// path the assembly deliberately avoids; used here as the oracle)
Eigen::MatrixXd dense_by_quadrature(Workspace& ws, const BasisParams& src, const BasisParams& dst,
                                    int N, int what /*0: d/dx, 1: d/dy, 2: identity*/) {
  auto& sctx = ws.basis(src);
  auto& dctx = ws.basis(dst);
  const int deg = N + 4;
  sctx.ensure_degree(deg);
  dctx.ensure_degree(deg);
  QuadRule2D rule = quad_rule_2d(ws, dst, 2 * deg + 2);
  const int len = BlockVector::length(N);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(len, len);
  const int slen = BlockVector::length(deg);
  std::vector<double> sv(slen), sx(slen), sy(slen), dv(slen);
  auto accumulate = [&](double w, double x, double y) {
    sctx.eval_all_grad(deg, x, y, sv, sx, sy);
    dctx.eval_all(deg, x, y, dv);
    const std::vector<double>& s = what == 0 ? sx : (what == 1 ? sy : sv);
    for (int col = 0; col < len; ++col)
      for (int row = 0; row < len; ++row) out(row, col) += w * s[col] * dv[row];
  };
  for (int q = 0; q < rule.size(); ++q) {
    accumulate(rule.reflect ? 0.5 * rule.w[q] : rule.w[q], rule.x[q], rule.y[q]);
    if (rule.reflect) accumulate(0.5 * rule.w[q], rule.x[q], -rule.y[q]);
  }
  for (int m = 0; m <= N; ++m)
    for (int j = 0; j <= m; ++j) out.row(BlockVector::index(m, j)) /= dctx.norm2(m, j);
  return out;
}

}  // namespace

TEST_CASE("stated bandwidths hold exactly on the disk slice") {
  Workspace& ws = disk_ws();
  const int N = 10;
  const BasisParams p1 = disk_slice_params(1, 1, 1);
  struct Row {
    BBBMatrix op;
    Bounds b;
  };
  const BasisParams line = line_mask(DomainKind::DiskSlice), arc = arc_mask(DomainKind::DiskSlice);
  Row rows[] = {
      {build_dx(ws, {}, N + 1, N + 1), {-1, 3, 0, 2}},
      {build_dy(ws, {}, N + 1, N + 1), {-1, 1, -1, 1}},
      {build_wx(ws, p1, N + 1, N + 1), {3, -1, 2, 0}},
      {build_wy(ws, p1, N + 1, N + 1), {1, -1, 1, -1}},
      {build_conversion(ws, {}, line, N + 1, N + 1), {0, 2, 0, 0}},
      {build_conversion(ws, {}, arc, N + 1, N + 1), {0, 2, 0, 2}},
      {build_conversion(ws, {}, line + arc, N + 1, N + 1), {0, 4, 0, 2}},
      {build_conversion_weighted(ws, p1, line, N + 1, N + 1), {2, 0, 0, 0}},
      {build_conversion_weighted(ws, p1, arc, N + 1, N + 1), {2, 0, 2, 0}},
      {build_conversion_weighted(ws, p1, line + arc, N + 1, N + 1), {4, 0, 2, 0}},
  };
  for (auto& row : rows) {
    const double spill = outside_bounds(row.op, row.b);
    CHECK(spill <= 1e-12 * row.op.max_abs());
  }
}

TEST_CASE("derivative of a constant vanishes") {
  Workspace& ws = disk_ws();
  const int N = 8;
  BlockVector one(BasisId{kDisk, {}, false}, N);
  one(0, 0) = 1.0;
  BBBMatrix Dx = build_dx(ws, {}, N + 1, N + 1);
  BBBMatrix Dy = build_dy(ws, {}, N + 1, N + 1);
  std::vector<double> out(one.size());
  Dx.matvec(one.data(), out);
  for (double v : out) CHECK(std::abs(v) <= 1e-14);
  Dy.matvec(one.data(), out);
  for (double v : out) CHECK(std::abs(v) <= 1e-14);
}

TEST_CASE("derivative operators against analytic derivatives") {
  for (const Domain& dom : {kDisk, Domain::end_disk_slice(0.2), Domain::trapezium(0.5)}) {
    Workspace ws(dom);
    const int N = 30;
    auto f = [](double x, double y) { return std::exp(x) * y * y; };
    BlockVector fc = analyze(ws, {}, f, N);
    const BasisParams dx_dst = line_mask(dom.kind()) + arc_mask(dom.kind());
    const BasisParams dy_dst = arc_mask(dom.kind());
    BBBMatrix Dx = build_dx(ws, {}, N + 1, N + 1);
    BBBMatrix Dy = build_dy(ws, {}, N + 1, N + 1);
    BlockVector dxc(BasisId{dom, dx_dst, false}, N), dyc(BasisId{dom, dy_dst, false}, N);
    Dx.matvec(fc.data(), dxc.data());
    Dy.matvec(fc.data(), dyc.data());
    double wx = 0, wy = 0;
    for (auto [x, y] : oracles::interior_points(dom, 100, 77)) {
      wx = std::max(wx, std::abs(synthesize_at(ws, dxc, x, y) - std::exp(x) * y * y));
      wy = std::max(wy, std::abs(synthesize_at(ws, dyc, x, y) - 2 * std::exp(x) * y));
    }
    CHECK(wx <= 1e-8);
    CHECK(wy <= 1e-8);
  }
}

TEST_CASE("dense entries match the 2D-quadrature oracle") {
  Workspace& ws = disk_ws();
  const int N = 6;
  const BasisParams line = line_mask(DomainKind::DiskSlice), arc = arc_mask(DomainKind::DiskSlice);
  SUBCASE("d/dx") {
    Eigen::MatrixXd want = dense_by_quadrature(ws, {}, line + arc, N, 0);
    Eigen::MatrixXd got = build_dx(ws, {}, N + 1, N + 1).to_dense();
    CHECK((want - got).cwiseAbs().maxCoeff() <= 1e-11 * want.cwiseAbs().maxCoeff());
  }
  SUBCASE("d/dy") {
    Eigen::MatrixXd want = dense_by_quadrature(ws, {}, arc, N, 1);
    Eigen::MatrixXd got = build_dy(ws, {}, N + 1, N + 1).to_dense();
    CHECK((want - got).cwiseAbs().maxCoeff() <= 1e-11 * want.cwiseAbs().maxCoeff());
  }
  SUBCASE("full conversion") {
    Eigen::MatrixXd want = dense_by_quadrature(ws, {}, line + arc, N, 2);
    Eigen::MatrixXd got = build_conversion(ws, {}, line + arc, N + 1, N + 1).to_dense();
    CHECK((want - got).cwiseAbs().maxCoeff() <= 1e-11 * want.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("conversions preserve function values") {
  Workspace& ws = disk_ws();
  const int N = 10;
  const BasisParams line = line_mask(DomainKind::DiskSlice), arc = arc_mask(DomainKind::DiskSlice);
  SUBCASE("the constant function survives a parameter raise") {
    BlockVector one(BasisId{kDisk, {}, false}, N);
    one(0, 0) = 1.0;
    BBBMatrix T = build_conversion(ws, {}, line + arc, N + 1, N + 1);
    BlockVector conv(BasisId{kDisk, disk_slice_params(1, 1, 1), false}, N);
    T.matvec(one.data(), conv.data());
    for (auto [x, y] : oracles::interior_points(kDisk, 25, 5))
      CHECK(synthesize_at(ws, conv, x, y) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("random degree-10 expansions survive pointwise") {
    auto f = [](double x, double y) {
      return 1.0 + x - 2 * y + 0.5 * x * x * y - std::pow(y, 3) * x + std::pow(x + y, 5) * 0.01;
    };
    BlockVector fc = analyze(ws, {}, f, N);
    BBBMatrix T = build_conversion(ws, {}, arc, N + 1, N + 1);
    BlockVector conv(BasisId{kDisk, disk_slice_params(0, 0, 1), false}, N);
    T.matvec(fc.data(), conv.data());
    for (auto [x, y] : oracles::interior_points(kDisk, 40, 7))
      CHECK(std::abs(synthesize_at(ws, conv, x, y) - f(x, y)) <= 1e-11);
  }
}

TEST_CASE("conversion commutes with coordinate multiplication") {
  Workspace& ws = disk_ws();
  const int N = 10;
  const BasisParams p0{}, p1 = disk_slice_params(1, 1, 1);
  BBBMatrix T = build_conversion(ws, p0, p1, N + 1, N + 1);
  BBBMatrix X0 = ws.basis(p0).jacobi_x(N + 1, N + 1).transpose();
  BBBMatrix X1 = ws.basis(p1).jacobi_x(N + 1, N + 1).transpose();
  Eigen::MatrixXd lhs = (T * X0).to_dense();
  Eigen::MatrixXd rhs = (X1 * T).to_dense();
  // compare away from the truncation boundary
  const int keep = BlockVector::length(N - 1);
  Eigen::MatrixXd diff = (lhs - rhs).topLeftCorner(keep, keep);
  CHECK(diff.cwiseAbs().maxCoeff() <= 1e-11 * rhs.cwiseAbs().maxCoeff());
}

TEST_CASE("Laplacian on the Dirichlet space") {
  Workspace& ws = disk_ws();
  const int N = 24;
  BBBMatrix L = laplacian_dirichlet(ws, N);
  SUBCASE("zero maps to zero") {
    std::vector<double> z(L.cols(), 0.0), out(L.rows());
    L.matvec(z, out);
    for (double v : out) CHECK(v == 0.0);
  }
  SUBCASE("matches the hand-derived Laplacian of W * y^3 exp(x)") {
    const double alpha = kDisk.alpha(), beta = kDisk.beta();
    auto q = [&](double x) { return (beta - x) * (x - alpha); };
    auto qp = [&](double x) { return -2 * x + alpha + beta; };
    auto lap = [&](double x, double y) {
      const double arc = 1 - x * x - y * y, ex = std::exp(x), y3 = y * y * y;
      const double lapW = -2 * arc - 4 * x * qp(x) - 4 * q(x);
      const double Wx = qp(x) * arc - 2 * x * q(x);
      const double Wy = -2 * y * q(x);
      return lapW * y3 * ex + 2 * (Wx * y3 * ex + Wy * 3 * y * y * ex) +
             q(x) * arc * (y3 + 6 * y) * ex;
    };
    const BasisParams p1 = disk_slice_params(1, 1, 1);
    BlockVector u = analyze(ws, p1, [](double x, double y) { return y * y * y * std::exp(x); }, N);
    BlockVector want = analyze(ws, p1, lap, N);
    std::vector<double> got(u.size());
    L.matvec(u.data(), got);
    double worst = 0, scale = 0;
    for (int i = 0; i < u.size(); ++i) {
      worst = std::max(worst, std::abs(got[i] - want[i]));
      scale = std::max(scale, std::abs(want[i]));
    }
    CHECK(worst <= 1e-9 * scale);
  }
  SUBCASE("structure stays within the composed bound") {
    CHECK(L.lower_block_bandwidth() <= 2);
    CHECK(L.upper_block_bandwidth() <= 2);
    CHECK(L.lower_sub_bandwidth() <= 2);
    CHECK(L.upper_sub_bandwidth() <= 2);
  }
}

TEST_CASE("biharmonic operator") {
  Workspace& ws = disk_ws();
  const int N = 14;
  BBBMatrix B = biharmonic_operator(ws, N);
  SUBCASE("zero in, zero out; bandwidth within the factor sum") {
    std::vector<double> z(B.cols(), 0.0), out(B.rows());
    B.matvec(z, out);
    for (double v : out) CHECK(v == 0.0);
    CHECK(B.lower_block_bandwidth() <= 4);
    CHECK(B.upper_block_bandwidth() <= 4);
  }
  SUBCASE("matches a finite-difference bilaplacian of W^2") {
    // u = W^{(2,2,2)} in closed polynomial form; the oracle nests
    // Richardson-extrapolated 5-point Laplacian stencils on the formula,
    // in long double so the h^4 division does not hit the rounding floor
    const long double alpha = kDisk.alpha(), beta = kDisk.beta();
    auto u = [&](long double x, long double y) {
      const long double q = (beta - x) * (x - alpha), arc = 1 - x * x - y * y;
      return q * q * arc * arc;
    };
    auto lap_fd = [&](auto&& g, long double x, long double y, long double h) {
      return (g(x + h, y) + g(x - h, y) + g(x, y + h) + g(x, y - h) - 4 * g(x, y)) / (h * h);
    };
    auto bilap = [&](double x, double y) {
      auto lap_h = [&](long double h) {
        auto inner = [&](long double xx, long double yy) { return lap_fd(u, xx, yy, h); };
        return lap_fd(inner, (long double)x, (long double)y, h);
      };
      // two Richardson levels remove the h^2 and h^4 truncation terms
      const long double c1 = lap_h(8e-3L), c2 = lap_h(4e-3L), c3 = lap_h(2e-3L);
      const long double r1 = (4 * c2 - c1) / 3.0L, r2 = (4 * c3 - c2) / 3.0L;
      return (double)((16 * r2 - r1) / 15.0L);
    };
    const BasisParams p2 = disk_ws().biharmonic_params();
    BlockVector uc(BasisId{kDisk, p2, true}, N);
    uc(0, 0) = 1.0;
    BlockVector fc(BasisId{kDisk, p2, false}, N);
    B.matvec(uc.data(), fc.data());
    double worst = 0;
    for (auto [x, y] : oracles::interior_points(kDisk, 20, 99)) {
      const double got = synthesize_at(ws, fc, x, y);
      worst = std::max(worst, std::abs(got - bilap(x, y)) / std::max(1.0, std::abs(bilap(x, y))));
    }
    CHECK(worst <= 1e-7);
  }
}

TEST_CASE("multiplication operator") {
  Workspace& ws = disk_ws();
  const int nb = 12;
  SUBCASE("constant gives the identity") {
    BlockVector vc(BasisId{kDisk, {}, false}, 0);
    vc(0, 0) = 3.5;
    BBBMatrix V = multiplication_operator(ws, vc, nb);
    Eigen::MatrixXd D = V.to_dense() - 3.5 * Eigen::MatrixXd::Identity(V.rows(), V.cols());
    CHECK(D.cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("v(x,y) = x gives the transposed x-Jacobi matrix") {
    BlockVector vc = analyze(ws, {}, [](double x, double) { return x; }, 1);
    BBBMatrix V = multiplication_operator(ws, vc, nb);
    Eigen::MatrixXd D = V.to_dense() - ws.basis(BasisParams{}).jacobi_x(nb, nb).transpose().to_dense();
    CHECK(D.cwiseAbs().maxCoeff() <= 1e-13);
  }
  SUBCASE("synthesized products match pointwise for degree-8 factors") {
    // exact polynomial factors given by random coefficient vectors; the
    // operator is sized so that truncating the Jacobi arguments cannot
    // touch the exact product entries (deg u + 2 deg v + 1 blocks)
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> un(-1, 1);
    const int dv = 8, du = 8;
    const int nblocks = du + 2 * dv + 2;
    BlockVector vc(BasisId{kDisk, {}, false}, dv);
    BlockVector uc(BasisId{kDisk, {}, false}, du);
    for (int i = 0; i < vc.size(); ++i) vc[i] = un(rng);
    for (int i = 0; i < uc.size(); ++i) uc[i] = un(rng);
    BBBMatrix V = multiplication_operator(ws, vc, nblocks);
    BlockVector uwide = uc.resized(nblocks - 1);
    BlockVector prod(BasisId{kDisk, {}, false}, nblocks - 1);
    V.matvec(uwide.data(), prod.data());
    double worst = 0;
    for (auto [x, y] : oracles::interior_points(kDisk, 50, 13)) {
      const double want = synthesize_at(ws, vc, x, y) * synthesize_at(ws, uc, x, y);
      worst = std::max(worst, std::abs(synthesize_at(ws, prod, x, y) - want));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("operator request dispatch covers every kind") {
  Workspace& ws = disk_ws();
  OperatorRequest req;
  req.degree = 5;
  req.source = disk_slice_params(1, 1, 1);
  for (OperatorKind k :
       {OperatorKind::Identity, OperatorKind::Wx, OperatorKind::Wy, OperatorKind::TWab,
        OperatorKind::TWc, OperatorKind::TWabc, OperatorKind::Jx, OperatorKind::Jy}) {
    req.kind = k;
    CHECK_NOTHROW(build_operator(ws, req));
  }
  req.source = BasisParams{};
  for (OperatorKind k : {OperatorKind::Dx, OperatorKind::Dy, OperatorKind::Tab, OperatorKind::Tc,
                         OperatorKind::Tabc, OperatorKind::LaplacianDirichlet,
                         OperatorKind::LaplacianPlainToBi, OperatorKind::Biharmonic}) {
    req.kind = k;
    CHECK_NOTHROW(build_operator(ws, req));
  }
}

TEST_CASE("parameter underflow is rejected") {
  Workspace& ws = disk_ws();
  CHECK_THROWS_AS(build_wx(ws, disk_slice_params(0, 0, 0), 5, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_conversion_weighted(ws, disk_slice_params(1, 1, 0),
                                            arc_mask(DomainKind::DiskSlice), 5, 5),
                  std::invalid_argument);
}
