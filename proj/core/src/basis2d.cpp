#include "sliceop/basis2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sliceop/errors.hpp"

namespace sliceop {

namespace {

// values[i*M + m] = p_i(nodes[m]) for i <= maxdeg
std::vector<double> eval_matrix(const RecurrenceTable& t, const GaussRule& rule, int maxdeg) {
  const int M = rule.size();
  std::vector<double> vals(static_cast<std::size_t>(maxdeg + 1) * M);
  std::vector<double> col(maxdeg + 1);
  for (int m = 0; m < M; ++m) {
    t.eval_all(maxdeg, rule.nodes[m], col);
    for (int i = 0; i <= maxdeg; ++i) vals[static_cast<std::size_t>(i) * M + m] = col[i];
  }
  return vals;
}

double banded_dot(const GaussRule& rule, const std::vector<double>& A, int ia,
                  const std::vector<double>& B, int ib) {
  const int M = rule.size();
  const double* a = A.data() + static_cast<std::size_t>(ia) * M;
  const double* b = B.data() + static_cast<std::size_t>(ib) * M;
  double s = 0;
  for (int m = 0; m < M; ++m) s += rule.weights[m] * a[m] * b[m];
  return s;
}

}  // namespace

BasisContext::BasisContext(TablePool& pool, BasisParams params)
    : pool_(&pool), params_(params) {
  validate_params(pool.domain().kind(), params);
}

void BasisContext::ensure_degree(int N) {
  if (N <= built_) return;
  const double a = params_.a, b = params_.b;

  pt_ = pool_->p_table(params_.d, params_.c, N + 8);
  // Reserve the ladder base long enough for every level climb up front so
  // higher levels are produced by lifting rather than fresh bootstraps.
  pool_->r_table(a, b, rho_exponent(params_, 0), (N + 8) + 2 * (N + 1) + 2);
  r_.assign(N + 2, nullptr);
  for (int k = 0; k <= N + 1; ++k)
    r_[k] = pool_->r_table(a, b, rho_exponent(params_, k), std::max(8, N - k + 8));

  auto sized = [N](std::vector<std::vector<double>>& v) {
    v.assign(N + 1, {});
    for (int n = 0; n <= N; ++n) v[n].assign(n + 1, 0.0);
  };
  sized(ax_diag_);
  sized(ax_up_);
  sized(ay_lo_);
  sized(ay_mid_);
  sized(ay_hi_);
  sized(by_lo_);
  sized(by_mid_);
  sized(by_hi_);
  sized(cy_lo_);
  sized(cy_mid_);
  sized(cy_hi_);
  dlast_.assign(N + 1, {});

  const bool has_mid = pool_->domain().kind() == DomainKind::Trapezium;
  for (int k = 0; k <= N; ++k) {
    const double ek = rho_exponent(params_, k);
    const double ek1 = rho_exponent(params_, k + 1);
    const int maxdeg = N - k;

    // entries coupling level k with level k+1 (measure exponent ek1)
    {
      RuleRef rule = pool_->r_rule(a, b, ek1, maxdeg + 4);
      const auto va = eval_matrix(*r_[k], *rule, maxdeg);
      const auto vb = eval_matrix(*r_[k + 1], *rule, maxdeg);
      const double qf = pt_->beta[k];
      const double wnorm = r_[k + 1]->omega;
      for (int n = k; n <= N; ++n) {
        ay_hi_[n][k] = qf * banded_dot(*rule, va, n - k, vb, n - k) / wnorm;
        if (k + 1 <= n)
          by_hi_[n][k] = qf * banded_dot(*rule, va, n - k, vb, n - k - 1) / wnorm;
      }
    }
    // entries coupling level k with level k-1 (measure exponent ek)
    if (k >= 1) {
      RuleRef rule = pool_->r_rule(a, b, ek, maxdeg + 5);
      const auto va = eval_matrix(*r_[k], *rule, maxdeg);
      const auto vb = eval_matrix(*r_[k - 1], *rule, maxdeg + 2);
      const double qf = pt_->beta[k - 1];
      const double wnorm = r_[k - 1]->omega;
      for (int n = k; n <= N; ++n)
        ay_lo_[n][k] = qf * banded_dot(*rule, va, n - k, vb, n - k + 2) / wnorm;
    }
    // same-level entries, present only when the t-weight is asymmetric
    if (has_mid && pt_->alpha[k] != 0.0) {
      RuleRef rule = pool_->r_rule(a, b, ek + 1, maxdeg + 5);
      const auto va = eval_matrix(*r_[k], *rule, maxdeg + 1);
      const double qf = pt_->alpha[k];
      const double wnorm = r_[k]->omega;
      for (int n = k; n <= N; ++n) {
        ay_mid_[n][k] = qf * banded_dot(*rule, va, n - k, va, n - k + 1) / wnorm;
        by_mid_[n][k] = qf * banded_dot(*rule, va, n - k, va, n - k) / wnorm;
      }
    }
    for (int n = k; n <= N; ++n) ax_diag_[n][k] = r_[k]->alpha[n - k];
    for (int n = k; n <= N; ++n) ax_up_[n][k] = r_[k]->beta[n - k];
  }

  // remaining y-entries follow from <y H_A, H_B> = <y H_B, H_A>
  for (int n = 0; n <= N; ++n)
    for (int k = 0; k <= n; ++k) {
      if (k >= 1) by_lo_[n][k] = by_hi_[n][k - 1] * norm2(n, k) / norm2(n, k - 1);
      if (n >= 1) {
        if (k >= 1) cy_lo_[n][k] = ay_hi_[n - 1][k - 1] * norm2(n, k) / norm2(n - 1, k - 1);
        if (k <= n - 1) cy_mid_[n][k] = ay_mid_[n - 1][k] * norm2(n, k) / norm2(n - 1, k);
        if (k + 1 <= n - 1) cy_hi_[n][k] = ay_lo_[n - 1][k + 1] * norm2(n, k) / norm2(n - 1, k + 1);
      }
    }

  built_ = N;
  for (int n = 0; n <= N; ++n) build_left_inverse_row(n);
}

void BasisContext::build_left_inverse_row(int n) {
  auto& d = dlast_[n];
  d.assign(2 * (n + 1), 0.0);
  // back substitution through the y-rows of the stacked block
  std::vector<double> eta(n + 2, 0.0);  // eta[c] for c = 1..n+1
  eta[n + 1] = 1.0 / ay_hi_[n][n];
  for (int c = n; c >= 1; --c) {
    double num = ay_mid_[n][c] * eta[c + 1];
    if (c + 1 <= n) num += ay_lo_[n][c + 1] * eta[c + 2];
    eta[c] = -num / ay_hi_[n][c - 1];
  }
  double d0 = -(ay_mid_[n][0] * eta[1] + (n >= 1 ? ay_lo_[n][1] * eta[2] : 0.0)) / ax_up_[n][0];
  d[0] = d0;
  for (int c = 1; c <= n + 1; ++c) d[n + c] = eta[c];

  // validate D^T A = I on the last row
  auto residual = [&]() {
    double worst = 0;
    for (int c = 0; c <= n + 1; ++c) {
      double s = 0;
      if (c <= n) s += d[c] * ax_up_[n][c];
      if (c + 1 <= n) s += d[n + 1 + c + 1] * ay_lo_[n][c + 1];
      if (c <= n) s += d[n + 1 + c] * ay_mid_[n][c];
      if (c - 1 >= 0 && c - 1 <= n) s += d[n + 1 + c - 1] * ay_hi_[n][c - 1];
      worst = std::max(worst, std::abs(s - (c == n + 1 ? 1.0 : 0.0)));
    }
    return worst;
  };
  const double tol = pool_->settings().left_inverse_tol;
  if (residual() <= tol) return;

  // structured route degraded; fall back to the least-norm last row
  Eigen::MatrixXd A = stacked_block(n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 2);
  e[n + 1] = 1.0;
  Eigen::VectorXd sol = A * (A.transpose() * A).ldlt().solve(e);
  for (int r = 0; r < 2 * (n + 1); ++r) d[r] = sol[r];
  if (residual() > tol)
    throw NumericalError("left inverse validation failed at block " + std::to_string(n) +
                         "; recurrence entries look corrupted");
}

Eigen::MatrixXd BasisContext::stacked_block(int n) const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * (n + 1), n + 2);
  for (int k = 0; k <= n; ++k) {
    A(k, k) = ax_up_[n][k];
    if (k - 1 >= 0) A(n + 1 + k, k - 1) = ay_lo_[n][k];
    A(n + 1 + k, k) = ay_mid_[n][k];
    A(n + 1 + k, k + 1) = ay_hi_[n][k];
  }
  return A;
}

Eigen::MatrixXd BasisContext::left_inverse(int n) const {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n + 2, 2 * (n + 1));
  for (int k = 0; k <= n; ++k) D(k, k) = 1.0 / ax_up_[n][k];
  for (int r = 0; r < 2 * (n + 1); ++r) D(n + 1, r) = dlast_[n][r];
  return D;
}

double BasisContext::y_up(int n, int k, int j) const {
  if (j == k - 1 && k >= 1) return ay_lo_[n][k];
  if (j == k) return ay_mid_[n][k];
  if (j == k + 1) return ay_hi_[n][k];
  return 0.0;
}

double BasisContext::y_mid(int n, int k, int j) const {
  if (j == k - 1 && k >= 1) return by_lo_[n][k];
  if (j == k) return by_mid_[n][k];
  if (j == k + 1 && j <= n) return by_hi_[n][k];
  return 0.0;
}

double BasisContext::y_down(int n, int k, int j) const {
  if (n < 1) return 0.0;
  if (j == k - 1 && k >= 1) return cy_lo_[n][k];
  if (j == k && j <= n - 1) return cy_mid_[n][k];
  if (j == k + 1 && j <= n - 1) return cy_hi_[n][k];
  return 0.0;
}

double BasisContext::eval_one(int n, int k, double x, double y) const {
  const double xr = std::min(std::max(x, domain().alpha()), domain().beta());
  const double Rv = r_.at(k)->eval(n - k, x);
  // Q_j = rho^j P_j(y/rho) through the homogenized three-term recurrence
  const double rho = domain().rho(xr);
  const double rho2 = domain().rho_squared(xr);
  double qm1 = 0.0, q = 1.0;
  for (int j = 0; j < k; ++j) {
    const double qn =
        ((y - pt_->alpha[j] * rho) * q - (j > 0 ? pt_->beta[j - 1] * rho2 * qm1 : 0.0)) /
        pt_->beta[j];
    qm1 = q;
    q = qn;
  }
  return Rv * q;
}

void BasisContext::eval_all(int N, double x, double y, std::span<double> out) const {
  if (N > built_) throw std::out_of_range("BasisContext: ensure_degree before eval_all");
  out[0] = 1.0;
  if (N == 0) return;
  std::vector<double> wx(N + 1), wy(N + 1);
  const double* Hm1 = nullptr;
  const double* Hn = out.data();  // block n starts here
  for (int n = 0; n < N; ++n) {
    for (int k = 0; k <= n; ++k) {
      double vx = (ax_diag_[n][k] - x) * Hn[k];
      if (n >= 1 && k <= n - 1) vx += ax_up_[n - 1][k] * Hm1[k];
      wx[k] = vx;
      double vy = (by_mid_[n][k] - y) * Hn[k];
      if (k >= 1) vy += by_lo_[n][k] * Hn[k - 1];
      if (k + 1 <= n) vy += by_hi_[n][k] * Hn[k + 1];
      if (n >= 1) {
        if (k >= 1) vy += cy_lo_[n][k] * Hm1[k - 1];
        if (k <= n - 1) vy += cy_mid_[n][k] * Hm1[k];
        if (k + 1 <= n - 1) vy += cy_hi_[n][k] * Hm1[k + 1];
      }
      wy[k] = vy;
    }
    double* Hn1 = out.data() + BlockVector::index(n + 1, 0);
    const auto& d = dlast_[n];
    double last = 0;
    for (int k = 0; k <= n; ++k) {
      Hn1[k] = -wx[k] / ax_up_[n][k];
      last += d[k] * wx[k] + d[n + 1 + k] * wy[k];
    }
    Hn1[n + 1] = -last;
    Hm1 = Hn;
    Hn = Hn1;
  }
}

void BasisContext::eval_all_grad(int N, double x, double y, std::span<double> val,
                                 std::span<double> ddx, std::span<double> ddy) const {
  if (N > built_) throw std::out_of_range("BasisContext: ensure_degree before eval_all_grad");
  val[0] = 1.0;
  ddx[0] = 0.0;
  ddy[0] = 0.0;
  if (N == 0) return;
  std::vector<double> wx(N + 1), wy(N + 1);
  auto step = [&](int n, const double* Hn, const double* Hm1, const double* Vn,
                  std::span<double> out, int which) {
    // which: 0 value, 1 d/dx, 2 d/dy; Vn is the value block used by dG
    for (int k = 0; k <= n; ++k) {
      double vx = (ax_diag_[n][k] - x) * Hn[k];
      if (n >= 1 && k <= n - 1) vx += ax_up_[n - 1][k] * Hm1[k];
      if (which == 1) vx -= Vn[k];
      wx[k] = vx;
      double vy = (by_mid_[n][k] - y) * Hn[k];
      if (k >= 1) vy += by_lo_[n][k] * Hn[k - 1];
      if (k + 1 <= n) vy += by_hi_[n][k] * Hn[k + 1];
      if (n >= 1) {
        if (k >= 1) vy += cy_lo_[n][k] * Hm1[k - 1];
        if (k <= n - 1) vy += cy_mid_[n][k] * Hm1[k];
        if (k + 1 <= n - 1) vy += cy_hi_[n][k] * Hm1[k + 1];
      }
      if (which == 2) vy -= Vn[k];
      wy[k] = vy;
    }
    double* Hn1 = out.data() + BlockVector::index(n + 1, 0);
    const auto& d = dlast_[n];
    double last = 0;
    for (int k = 0; k <= n; ++k) {
      Hn1[k] = -wx[k] / ax_up_[n][k];
      last += d[k] * wx[k] + d[n + 1 + k] * wy[k];
    }
    Hn1[n + 1] = -last;
  };
  for (int n = 0; n < N; ++n) {
    const int off = BlockVector::index(n, 0);
    const int offm1 = n >= 1 ? BlockVector::index(n - 1, 0) : 0;
    const double* Vn = val.data() + off;
    const double* Vm1 = n >= 1 ? val.data() + offm1 : nullptr;
    step(n, Vn, Vm1, Vn, val, 0);
    step(n, ddx.data() + off, n >= 1 ? ddx.data() + offm1 : nullptr, Vn, ddx, 1);
    step(n, ddy.data() + off, n >= 1 ? ddy.data() + offm1 : nullptr, Vn, ddy, 2);
  }
}

double BasisContext::clenshaw(std::span<const double> coeffs, int N, double x, double y) const {
  if (N > built_) throw std::out_of_range("BasisContext: ensure_degree before clenshaw");
  if (N == 0) return coeffs[0];
  std::vector<double> g1(coeffs.begin() + BlockVector::index(N, 0),
                         coeffs.begin() + BlockVector::index(N + 1, 0));
  std::vector<double> g2;  // gamma_{n+2}
  std::vector<double> psi_x(N + 1), psi_y(N + 1), next(N + 1);
  for (int n = N - 1; n >= 0; --n) {
    // psi = gamma_{n+1}^T D_n^T over [x-rows | y-rows]
    const auto& d = dlast_[n];
    const double glast = g1[n + 1];
    for (int r = 0; r <= n; ++r) {
      psi_x[r] = g1[r] / ax_up_[n][r] + glast * d[r];
      psi_y[r] = glast * d[n + 1 + r];
    }
    for (int c = 0; c <= n; ++c) {
      double s = psi_x[c] * (ax_diag_[n][c] - x);
      s += psi_y[c] * (by_mid_[n][c] - y);
      if (c + 1 <= n) s += psi_y[c + 1] * by_lo_[n][c + 1];
      if (c - 1 >= 0) s += psi_y[c - 1] * by_hi_[n][c - 1];
      next[c] = coeffs[BlockVector::index(n, c)] - s;
    }
    if (!g2.empty()) {
      // gamma_{n+2}^T D_{n+1}^T C_{n+1}
      const auto& d1 = dlast_[n + 1];
      const double glast1 = g2[n + 2];
      for (int c = 0; c <= n; ++c) {
        const double chix = g2[c] / ax_up_[n + 1][c] + glast1 * d1[c];
        double s = chix * ax_up_[n][c];
        const double chiy_c = glast1 * d1[n + 2 + c];
        s += chiy_c * cy_mid_[n + 1][c];
        if (c + 1 <= n + 1) s += glast1 * d1[n + 2 + c + 1] * cy_lo_[n + 1][c + 1];
        if (c - 1 >= 0) s += glast1 * d1[n + 2 + c - 1] * cy_hi_[n + 1][c - 1];
        next[c] -= s;
      }
    }
    g2.assign(g1.begin(), g1.end());
    g1.assign(next.begin(), next.begin() + n + 1);
  }
  return g1[0];
}

BBBMatrix BasisContext::jacobi_x(int block_rows, int block_cols) {
  ensure_degree(std::max(block_rows, block_cols));
  BBBMatrix J(block_rows, block_cols, 1, 1, 0, 0);
  for (int n = 0; n < block_rows; ++n) {
    for (int k = 0; k <= n; ++k) {
      if (n < block_cols) J.at(n, n, k, k) = ax_diag_[n][k];
      if (n + 1 < block_cols) J.at(n, n + 1, k, k) = ax_up_[n][k];
      if (n - 1 >= 0 && n - 1 < block_cols && k <= n - 1) J.at(n, n - 1, k, k) = ax_up_[n - 1][k];
    }
  }
  return J;
}

BBBMatrix BasisContext::jacobi_y(int block_rows, int block_cols) {
  ensure_degree(std::max(block_rows, block_cols));
  BBBMatrix J(block_rows, block_cols, 1, 1, 1, 1);
  for (int n = 0; n < block_rows; ++n)
    for (int k = 0; k <= n; ++k) {
      if (n + 1 < block_cols)
        for (int j = std::max(0, k - 1); j <= k + 1; ++j) {
          const double v = y_up(n, k, j);
          if (v != 0.0) J.at(n, n + 1, k, j) = v;
        }
      if (n < block_cols)
        for (int j = std::max(0, k - 1); j <= std::min(n, k + 1); ++j) {
          const double v = y_mid(n, k, j);
          if (v != 0.0) J.at(n, n, k, j) = v;
        }
      if (n - 1 >= 0 && n - 1 < block_cols)
        for (int j = std::max(0, k - 1); j <= std::min(n - 1, k + 1); ++j) {
          const double v = y_down(n, k, j);
          if (v != 0.0) J.at(n, n - 1, k, j) = v;
        }
    }
  return J;
}

// ---------------------------------------------------------------------------

Workspace::Workspace(Domain domain, Settings settings, std::string cache_dir)
    : domain_(domain), settings_(settings), pool_(domain, settings, std::move(cache_dir)) {}

BasisContext& Workspace::basis(const BasisParams& p) {
  const std::array<double, 4> key{p.a, p.b, p.c, p.d};
  auto it = bases_.find(key);
  if (it == bases_.end())
    it = bases_.emplace(key, std::make_unique<BasisContext>(pool_, p)).first;
  return *it->second;
}

BasisParams Workspace::dirichlet_params() const {
  return line_mask(domain_.kind()) + arc_mask(domain_.kind());
}

BasisParams Workspace::biharmonic_params() const {
  const BasisParams p = dirichlet_params();
  return p + p;
}

}  // namespace sliceop
