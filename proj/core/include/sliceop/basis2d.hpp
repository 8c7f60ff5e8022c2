#ifndef SLICEOP_BASIS2D_HPP
#define SLICEOP_BASIS2D_HPP

#include <Eigen/Dense>
#include <array>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "sliceop/bbb_matrix.hpp"
#include "sliceop/block_vector.hpp"
#include "sliceop/domain.hpp"
#include "sliceop/table_pool.hpp"

namespace sliceop {

/// The bivariate orthogonal family on one domain for one parameter tuple:
///
///   H_{n,k}(x,y) = R_{n-k}(x) * rho(x)^k * P_k(y / rho(x))
///
/// where R is the level-k x-family (rho-exponent c+d+2k+1) and P the
/// t-family with parameters (d,c).  Holds the univariate tables, the
/// three-term recurrence entries feeding the block forward recurrence, and
/// the block left inverses, all extended lazily by degree.
class BasisContext {
 public:
  BasisContext(TablePool& pool, BasisParams params);

  const BasisParams& params() const { return params_; }
  const Domain& domain() const { return pool_->domain(); }

  /// Builds tables and recurrence entries for blocks 0..N.
  void ensure_degree(int N);
  int built_degree() const { return built_; }

  const RecurrenceTable& r_level(int k) const { return *r_.at(k); }
  const RecurrenceTable& p_family() const { return *pt_; }
  /// Squared norm of H_{n,k} under the plain 2D integral (independent of n).
  double norm2(int /*n*/, int k) const { return r_.at(k)->omega * pt_->omega; }

  /// One basis value by the 1D product formula.  The rho^k P_k(y/rho)
  /// factor is evaluated through a homogenized recurrence in (rho^2, y),
  /// so rho -> 0 needs no special casing.
  double eval_one(int n, int k, double x, double y) const;

  /// All H_{n,k}, n <= N, by the block forward recurrence (O(N^2)).
  void eval_all(int N, double x, double y, std::span<double> out) const;
  /// Values plus first derivatives from the differentiated recurrence.
  void eval_all_grad(int N, double x, double y, std::span<double> val,
                     std::span<double> ddx, std::span<double> ddy) const;

  /// Backward-recurrence evaluation of sum c_{n,k} H_{n,k}(x,y).
  double clenshaw(std::span<const double> coeffs, int N, double x, double y) const;

  /// Jacobi operators: J_x H = x H and J_y H = y H.
  BBBMatrix jacobi_x(int block_rows, int block_cols);
  BBBMatrix jacobi_y(int block_rows, int block_cols);

  /// Full left inverse of the stacked recurrence block A_n (for tests and
  /// diagnostics; the recurrence itself uses the structured rows).
  Eigen::MatrixXd left_inverse(int n) const;
  /// The stacked block A_n itself.
  Eigen::MatrixXd stacked_block(int n) const;
  /// Last row of D_n^T over the stacked [x-rows | y-rows] block.
  const std::vector<double>& left_inverse_row(int n) const { return dlast_[n]; }

  // Raw recurrence entries (valid after ensure_degree):
  //   x H_{n,k}: diag entry and up-coupling
  double x_diag(int n, int k) const { return ax_diag_[n][k]; }
  double x_up(int n, int k) const { return ax_up_[n][k]; }
  //   y H_{n,k} -> H_{n+1,j}, j = k-1, k, k+1
  double y_up(int n, int k, int j) const;
  //   y H_{n,k} -> H_{n,j}
  double y_mid(int n, int k, int j) const;
  //   y H_{n,k} -> H_{n-1,j}
  double y_down(int n, int k, int j) const;

 private:
  void build_block(int n);
  void build_left_inverse_row(int n);

  TablePool* pool_;
  BasisParams params_;
  int built_ = -1;
  std::vector<TableRef> r_;
  TableRef pt_;

  std::vector<std::vector<double>> ax_diag_, ax_up_;
  std::vector<std::vector<double>> ay_lo_, ay_mid_, ay_hi_;
  std::vector<std::vector<double>> by_lo_, by_mid_, by_hi_;
  std::vector<std::vector<double>> cy_lo_, cy_mid_, cy_hi_;
  // last row of D_n^T over the stacked [x-rows, y-rows] block, length 2(n+1)
  std::vector<std::vector<double>> dlast_;
};

/// A domain plus its shared univariate table pool and the basis contexts
/// built on it.  Every higher-level routine takes one of these.
class Workspace {
 public:
  explicit Workspace(Domain domain, Settings settings = {}, std::string cache_dir = {});

  const Domain& domain() const { return domain_; }
  const Settings& settings() const { return settings_; }
  TablePool& pool() { return pool_; }

  BasisContext& basis(const BasisParams& p);

  /// Base parameter tuple of the Dirichlet solution space (one power of
  /// every boundary factor), e.g. (1,1,1) on the disk slice.
  BasisParams dirichlet_params() const;
  /// Two powers of every boundary factor (Dirichlet + Neumann).
  BasisParams biharmonic_params() const;
  BasisParams zero_params() const { return {}; }

 private:
  Domain domain_;
  Settings settings_;
  TablePool pool_;
  std::map<std::array<double, 4>, std::unique_ptr<BasisContext>> bases_;
};

}  // namespace sliceop

#endif
