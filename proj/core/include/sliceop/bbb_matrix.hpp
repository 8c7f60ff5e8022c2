#ifndef SLICEOP_BBB_MATRIX_HPP
#define SLICEOP_BBB_MATRIX_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "sliceop/settings.hpp"

namespace sliceop {

/// Banded-block-banded matrix over degree-blocked index sets: block row i has
/// i+1 rows and block column j has j+1 columns.  Block (i,j) is stored iff
/// -L <= j-i <= U, and inside each block entry (r,c) is stored iff
/// -lambda <= c-r <= mu.  Bandwidths may be negative: L = -1 means the first
/// block superdiagonal is the lowest stored one.
class BBBMatrix {
 public:
  BBBMatrix() = default;
  BBBMatrix(int block_rows, int block_cols, int L, int U, int lambda, int mu);

  static BBBMatrix identity(int blocks);
  /// Block-diagonal with prescribed diagonal entries d(n,k).
  static BBBMatrix diagonal(int blocks, const std::function<double(int, int)>& d);

  int block_rows() const { return brows_; }
  int block_cols() const { return bcols_; }
  int rows() const { return brows_ * (brows_ + 1) / 2; }
  int cols() const { return bcols_ * (bcols_ + 1) / 2; }
  int lower_block_bandwidth() const { return L_; }
  int upper_block_bandwidth() const { return U_; }
  int lower_sub_bandwidth() const { return lambda_; }
  int upper_sub_bandwidth() const { return mu_; }

  bool block_stored(int i, int j) const {
    return i >= 0 && i < brows_ && j >= 0 && j < bcols_ && j - i >= -L_ && j - i <= U_;
  }
  bool entry_stored(int i, int j, int r, int c) const {
    return block_stored(i, j) && r >= 0 && r <= i && c >= 0 && c <= j && c - r >= -lambda_ &&
           c - r <= mu_;
  }

  /// Mutable access to a stored entry; throws outside the structure.
  double& at(int i, int j, int r, int c);
  /// Value with implicit zeros outside the structure.
  double get(int i, int j, int r, int c) const;

  /// y = A x over flat degree-blocked vectors.
  void matvec(std::span<const double> x, std::span<double> y) const;

  BBBMatrix transpose() const;
  BBBMatrix truncated(int block_rows, int block_cols) const;
  /// Scales row (i,r) by s(i,r).
  void scale_rows(const std::function<double(int, int)>& s);
  /// Scales column (j,c) by s(j,c).
  void scale_cols(const std::function<double(int, int)>& s);
  BBBMatrix& operator*=(double s);

  /// Drops outer block diagonals and sub-diagonals whose entries all stay
  /// below rel_tol * max|entry|.
  void trim(double rel_tol);

  double max_abs() const;
  /// Total stored doubles (structure accounting).
  std::size_t allocated_doubles() const;

  Eigen::MatrixXd to_dense() const;
  Eigen::SparseMatrix<double> to_sparse() const;

  /// Triplet text export: "block_i block_j sub_i sub_j value" per line.
  void spy_export(std::ostream& os) const;

  friend BBBMatrix operator+(const BBBMatrix& a, const BBBMatrix& b);
  friend BBBMatrix operator*(const BBBMatrix& a, const BBBMatrix& b);

 private:
  int band_width() const { return lambda_ + mu_ + 1; }
  int diag_count() const { return L_ + U_ + 1; }
  std::vector<double>& block(int i, int d) { return blocks_[i * diag_count() + d]; }
  const std::vector<double>& block(int i, int d) const { return blocks_[i * diag_count() + d]; }

  int brows_ = 0, bcols_ = 0;
  int L_ = 0, U_ = 0;
  int lambda_ = 0, mu_ = 0;
  // blocks_[i*diag_count + (j-i+L)]; each block stores band columns:
  // entry (r,c) at data[c*band_width + (c-r+lambda)]
  std::vector<std::vector<double>> blocks_;
};

/// Solves the square system A u = f by sparse LU with iterative refinement
/// and a QR fallback; certifies the relative residual against settings.
/// Throws NumericalError (with a condition estimate) if certification fails.
std::vector<double> bbb_solve(const BBBMatrix& A, std::span<const double> f,
                              const Settings& settings = {});

}  // namespace sliceop

#endif
