#include "sliceop/bbb_matrix.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "sliceop/errors.hpp"

namespace sliceop {

namespace {
int block_offset(int n) { return n * (n + 1) / 2; }
}

BBBMatrix::BBBMatrix(int block_rows, int block_cols, int L, int U, int lambda, int mu)
    : brows_(block_rows), bcols_(block_cols), L_(L), U_(U), lambda_(lambda), mu_(mu) {
  if (block_rows < 0 || block_cols < 0) throw std::invalid_argument("BBBMatrix: negative size");
  const int nd = std::max(0, diag_count());
  blocks_.resize(static_cast<std::size_t>(brows_) * nd);
  if (nd == 0 || band_width() <= 0) return;
  for (int i = 0; i < brows_; ++i)
    for (int d = 0; d < nd; ++d) {
      const int j = i + d - L_;
      if (j >= 0 && j < bcols_) block(i, d).assign(static_cast<std::size_t>(j + 1) * band_width(), 0.0);
    }
}

BBBMatrix BBBMatrix::identity(int blocks) {
  return diagonal(blocks, [](int, int) { return 1.0; });
}

BBBMatrix BBBMatrix::diagonal(int blocks, const std::function<double(int, int)>& d) {
  BBBMatrix m(blocks, blocks, 0, 0, 0, 0);
  for (int n = 0; n < blocks; ++n)
    for (int k = 0; k <= n; ++k) m.at(n, n, k, k) = d(n, k);
  return m;
}

double& BBBMatrix::at(int i, int j, int r, int c) {
  if (!entry_stored(i, j, r, c)) throw std::out_of_range("BBBMatrix::at outside structure");
  return block(i, j - i + L_)[static_cast<std::size_t>(c) * band_width() + (c - r + lambda_)];
}

double BBBMatrix::get(int i, int j, int r, int c) const {
  if (!entry_stored(i, j, r, c)) return 0.0;
  const auto& b = block(i, j - i + L_);
  if (b.empty()) return 0.0;
  return b[static_cast<std::size_t>(c) * band_width() + (c - r + lambda_)];
}

void BBBMatrix::matvec(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != cols() || static_cast<int>(y.size()) != rows())
    throw std::invalid_argument("BBBMatrix::matvec: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  const int bw = band_width();
  for (int i = 0; i < brows_; ++i) {
    const int yoff = block_offset(i);
    for (int d = 0; d < diag_count(); ++d) {
      const int j = i + d - L_;
      if (j < 0 || j >= bcols_) continue;
      const auto& b = block(i, d);
      if (b.empty()) continue;
      const int xoff = block_offset(j);
      for (int c = 0; c <= j; ++c) {
        const double xv = x[xoff + c];
        if (xv == 0.0) continue;
        const int rlo = std::max(0, c - mu_), rhi = std::min(i, c + lambda_);
        for (int r = rlo; r <= rhi; ++r)
          y[yoff + r] += b[static_cast<std::size_t>(c) * bw + (c - r + lambda_)] * xv;
      }
    }
  }
}

BBBMatrix BBBMatrix::transpose() const {
  BBBMatrix t(bcols_, brows_, U_, L_, mu_, lambda_);
  for (int i = 0; i < brows_; ++i)
    for (int d = 0; d < diag_count(); ++d) {
      const int j = i + d - L_;
      if (j < 0 || j >= bcols_) continue;
      const auto& b = block(i, d);
      if (b.empty()) continue;
      for (int c = 0; c <= j; ++c) {
        const int rlo = std::max(0, c - mu_), rhi = std::min(i, c + lambda_);
        for (int r = rlo; r <= rhi; ++r) {
          const double v = b[static_cast<std::size_t>(c) * band_width() + (c - r + lambda_)];
          if (v != 0.0) t.at(j, i, c, r) = v;
        }
      }
    }
  return t;
}

BBBMatrix BBBMatrix::truncated(int block_rows, int block_cols) const {
  BBBMatrix t(block_rows, block_cols, L_, U_, lambda_, mu_);
  const int ilim = std::min(brows_, block_rows);
  for (int i = 0; i < ilim; ++i)
    for (int d = 0; d < diag_count(); ++d) {
      const int j = i + d - L_;
      if (j < 0 || j >= std::min(bcols_, block_cols)) continue;
      const auto& b = block(i, d);
      if (b.empty()) continue;
      for (int c = 0; c <= j; ++c)
        for (int r = std::max(0, c - mu_); r <= std::min(i, c + lambda_); ++r) {
          const double v = b[static_cast<std::size_t>(c) * band_width() + (c - r + lambda_)];
          if (v != 0.0) t.at(i, j, r, c) = v;
        }
    }
  return t;
}

void BBBMatrix::scale_rows(const std::function<double(int, int)>& s) {
  for (int i = 0; i < brows_; ++i)
    for (int d = 0; d < diag_count(); ++d) {
      const int j = i + d - L_;
      if (j < 0 || j >= bcols_) continue;
      auto& b = block(i, d);
      if (b.empty()) continue;
      for (int c = 0; c <= j; ++c)
        for (int r = std::max(0, c - mu_); r <= std::min(i, c + lambda_); ++r)
          b[static_cast<std::size_t>(c) * band_width() + (c - r + lambda_)] *= s(i, r);
    }
}

void BBBMatrix::scale_cols(const std::function<double(int, int)>& s) {
  for (int i = 0; i < brows_; ++i)
    for (int d = 0; d < diag_count(); ++d) {
      const int j = i + d - L_;
      if (j < 0 || j >= bcols_) continue;
      auto& b = block(i, d);
      if (b.empty()) continue;
      for (int c = 0; c <= j; ++c) {
        const double sc = s(j, c);
        for (int r = std::max(0, c - mu_); r <= std::min(i, c + lambda_); ++r)
          b[static_cast<std::size_t>(c) * band_width() + (c - r + lambda_)] *= sc;
      }
    }
}

BBBMatrix& BBBMatrix::operator*=(double s) {
  for (auto& b : blocks_)
    for (double& v : b) v *= s;
  return *this;
}

double BBBMatrix::max_abs() const {
  double m = 0;
  for (const auto& b : blocks_)
    for (double v : b) m = std::max(m, std::abs(v));
  return m;
}

std::size_t BBBMatrix::allocated_doubles() const {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.size();
  return n;
}

namespace {

struct DiagScan {
  bool any_above(const BBBMatrix& m, double tol, int which, int edge) {
    // which: 0 = block diag j-i == edge, 1 = sub diag c-r == edge
    for (int i = 0; i < m.block_rows(); ++i)
      for (int j = std::max(0, i - m.lower_block_bandwidth());
           j <= std::min(m.block_cols() - 1, i + m.upper_block_bandwidth()); ++j) {
        if (which == 0 && j - i != edge) continue;
        for (int c = 0; c <= j; ++c)
          for (int r = std::max(0, c - m.upper_sub_bandwidth());
               r <= std::min(i, c + m.lower_sub_bandwidth()); ++r) {
            if (which == 1 && c - r != edge) continue;
            if (std::abs(m.get(i, j, r, c)) > tol) return true;
          }
      }
    return false;
  }
};

}  // namespace

void BBBMatrix::trim(double rel_tol) {
  const double tol = rel_tol * max_abs();
  DiagScan scan;
  int L = L_, U = U_, lam = lambda_, mu = mu_;
  while (L + U >= 0 && !scan.any_above(*this, tol, 0, -L)) --L;
  while (L + U >= 0 && !scan.any_above(*this, tol, 0, U)) --U;
  while (lam + mu >= 0 && !scan.any_above(*this, tol, 1, -lam)) --lam;
  while (lam + mu >= 0 && !scan.any_above(*this, tol, 1, mu)) --mu;
  if (L == L_ && U == U_ && lam == lambda_ && mu == mu_) return;
  BBBMatrix t(brows_, bcols_, L, U, lam, mu);
  for (int i = 0; i < brows_; ++i)
    for (int j = std::max(0, i - L); j <= std::min(bcols_ - 1, i + U); ++j)
      for (int c = 0; c <= j; ++c)
        for (int r = std::max(0, c - mu); r <= std::min(i, c + lam); ++r) {
          const double v = get(i, j, r, c);
          if (v != 0.0) t.at(i, j, r, c) = v;
        }
  *this = std::move(t);
}

Eigen::MatrixXd BBBMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows(), cols());
  for (int i = 0; i < brows_; ++i)
    for (int d = 0; d < diag_count(); ++d) {
      const int j = i + d - L_;
      if (j < 0 || j >= bcols_) continue;
      const auto& b = block(i, d);
      if (b.empty()) continue;
      for (int c = 0; c <= j; ++c)
        for (int r = std::max(0, c - mu_); r <= std::min(i, c + lambda_); ++r)
          m(block_offset(i) + r, block_offset(j) + c) =
              b[static_cast<std::size_t>(c) * band_width() + (c - r + lambda_)];
    }
  return m;
}

Eigen::SparseMatrix<double> BBBMatrix::to_sparse() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(allocated_doubles());
  for (int i = 0; i < brows_; ++i)
    for (int d = 0; d < diag_count(); ++d) {
      const int j = i + d - L_;
      if (j < 0 || j >= bcols_) continue;
      const auto& b = block(i, d);
      if (b.empty()) continue;
      for (int c = 0; c <= j; ++c)
        for (int r = std::max(0, c - mu_); r <= std::min(i, c + lambda_); ++r) {
          const double v = b[static_cast<std::size_t>(c) * band_width() + (c - r + lambda_)];
          if (v != 0.0) trips.emplace_back(block_offset(i) + r, block_offset(j) + c, v);
        }
    }
  Eigen::SparseMatrix<double> s(rows(), cols());
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

void BBBMatrix::spy_export(std::ostream& os) const {
  for (int i = 0; i < brows_; ++i)
    for (int d = 0; d < diag_count(); ++d) {
      const int j = i + d - L_;
      if (j < 0 || j >= bcols_) continue;
      const auto& b = block(i, d);
      if (b.empty()) continue;
      for (int c = 0; c <= j; ++c)
        for (int r = std::max(0, c - mu_); r <= std::min(i, c + lambda_); ++r) {
          const double v = b[static_cast<std::size_t>(c) * band_width() + (c - r + lambda_)];
          if (v != 0.0) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%d %d %d %d %.17g\n", i, j, r, c, v);
            os << buf;
          }
        }
    }
}

BBBMatrix operator+(const BBBMatrix& a, const BBBMatrix& b) {
  if (a.brows_ != b.brows_ || a.bcols_ != b.bcols_)
    throw std::invalid_argument("BBBMatrix: dimension mismatch in +");
  BBBMatrix s(a.brows_, a.bcols_, std::max(a.L_, b.L_), std::max(a.U_, b.U_),
              std::max(a.lambda_, b.lambda_), std::max(a.mu_, b.mu_));
  auto accumulate = [&](const BBBMatrix& m) {
    for (int i = 0; i < m.brows_; ++i)
      for (int d = 0; d < m.diag_count(); ++d) {
        const int j = i + d - m.L_;
        if (j < 0 || j >= m.bcols_) continue;
        const auto& blk = m.block(i, d);
        if (blk.empty()) continue;
        for (int c = 0; c <= j; ++c)
          for (int r = std::max(0, c - m.mu_); r <= std::min(i, c + m.lambda_); ++r) {
            const double v = blk[static_cast<std::size_t>(c) * m.band_width() + (c - r + m.lambda_)];
            if (v != 0.0) s.at(i, j, r, c) += v;
          }
      }
  };
  accumulate(a);
  accumulate(b);
  return s;
}

BBBMatrix operator*(const BBBMatrix& a, const BBBMatrix& b) {
  if (a.bcols_ != b.brows_)
    throw std::invalid_argument("BBBMatrix: inner dimension mismatch in *");
  BBBMatrix p(a.brows_, b.bcols_, a.L_ + b.L_, a.U_ + b.U_, a.lambda_ + b.lambda_,
              a.mu_ + b.mu_);
  if (p.diag_count() <= 0 || p.band_width() <= 0) return p;
  for (int i = 0; i < a.brows_; ++i)
    for (int da = 0; da < a.diag_count(); ++da) {
      const int m = i + da - a.L_;
      if (m < 0 || m >= a.bcols_) continue;
      const auto& ab = a.block(i, da);
      if (ab.empty()) continue;
      for (int db = 0; db < b.diag_count(); ++db) {
        const int j = m + db - b.L_;
        if (j < 0 || j >= b.bcols_) continue;
        const auto& bb = b.block(m, db);
        if (bb.empty()) continue;
        // block product: P(i,j) += A(i,m) * B(m,j)
        for (int c = 0; c <= j; ++c) {
          const int qlo = std::max(0, c - b.mu_), qhi = std::min(m, c + b.lambda_);
          for (int q = qlo; q <= qhi; ++q) {
            const double bv = bb[static_cast<std::size_t>(c) * b.band_width() + (c - q + b.lambda_)];
            if (bv == 0.0) continue;
            const int rlo = std::max(0, q - a.mu_), rhi = std::min(i, q + a.lambda_);
            for (int r = rlo; r <= rhi; ++r) {
              const double av =
                  ab[static_cast<std::size_t>(q) * a.band_width() + (q - r + a.lambda_)];
              if (av != 0.0) p.at(i, j, r, c) += av * bv;
            }
          }
        }
      }
    }
  return p;
}

std::vector<double> bbb_solve(const BBBMatrix& A, std::span<const double> f,
                              const Settings& settings) {
  if (A.block_rows() != A.block_cols())
    throw std::invalid_argument("bbb_solve: system must be square");
  const int n = A.rows();
  if (static_cast<int>(f.size()) != n) throw std::invalid_argument("bbb_solve: rhs size");

  Eigen::SparseMatrix<double> S = A.to_sparse();
  S.makeCompressed();
  Eigen::Map<const Eigen::VectorXd> rhs(f.data(), n);
  const double fnorm = rhs.lpNorm<Eigen::Infinity>();
  if (fnorm == 0.0) return std::vector<double>(n, 0.0);
  if (S.nonZeros() == 0)
    throw NumericalError("bbb_solve: structurally singular system (no stored entries)");

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(S);
  Eigen::VectorXd u;
  bool factorized = lu.info() == Eigen::Success;
  if (factorized) {
    u = lu.solve(rhs);
    // a round of iterative refinement tightens the residual cheaply
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::VectorXd r = rhs - S * u;
      if (r.lpNorm<Eigen::Infinity>() <= settings.solve_tol * fnorm) break;
      u += lu.solve(r);
    }
  }
  double resid = factorized ? (rhs - S * u).lpNorm<Eigen::Infinity>() / fnorm
                            : std::numeric_limits<double>::infinity();
  if (resid > settings.solve_tol) {
    // QR fallback for rank trouble / severe conditioning (kept dense, so
    // only attempted at sizes where that is affordable)
    if (n <= 4000) {
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A.to_dense());
      u = qr.solve(rhs);
      resid = (rhs - S * u).lpNorm<Eigen::Infinity>() / fnorm;
    }
    if (resid > settings.solve_tol) {
      // condition estimate: largest / smallest singular value by power iteration
      Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
      double smax = 0;
      for (int it = 0; it < 12; ++it) {
        v = S.transpose() * (S * v);
        smax = std::sqrt(v.norm());
        v.normalize();
      }
      double smin_inv = 0;
      if (factorized) {
        Eigen::VectorXd w = Eigen::VectorXd::Ones(n).normalized();
        for (int it = 0; it < 12; ++it) {
          w = lu.solve(w);
          smin_inv = w.norm();
          w.normalize();
        }
      }
      const double cond = smin_inv > 0 ? smax * smin_inv : std::numeric_limits<double>::infinity();
      throw NumericalError("bbb_solve: residual " + std::to_string(resid) +
                           " exceeds tolerance; condition estimate " + std::to_string(cond));
    }
  }
  return std::vector<double>(u.data(), u.data() + n);
}

}  // namespace sliceop
