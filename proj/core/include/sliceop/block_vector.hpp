#ifndef SLICEOP_BLOCK_VECTOR_HPP
#define SLICEOP_BLOCK_VECTOR_HPP

#include <span>
#include <vector>

#include "sliceop/domain.hpp"

namespace sliceop {

/// Coefficient vector in a bivariate basis, blocked by total degree:
/// block n holds entries k = 0..n, stored degree-major.
class BlockVector {
 public:
  BlockVector() = default;
  BlockVector(BasisId basis, int degree)
      : basis_(std::move(basis)), degree_(degree), data_(length(degree), 0.0) {}

  static int length(int degree) { return (degree + 1) * (degree + 2) / 2; }
  static int index(int n, int k) { return n * (n + 1) / 2 + k; }

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(data_.size()); }
  const BasisId& basis() const { return basis_; }

  double& operator()(int n, int k) { return data_[index(n, k)]; }
  double operator()(int n, int k) const { return data_[index(n, k)]; }
  double& operator[](int i) { return data_[i]; }
  double operator[](int i) const { return data_[i]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<const double> block(int n) const {
    return std::span<const double>(data_).subspan(index(n, 0), n + 1);
  }

  /// Euclidean norm of each degree block.
  std::vector<double> block_norms() const;
  /// Max-norm of the whole vector.
  double max_norm() const;

  /// Same coefficients re-tagged as weighted/unweighted.  The expansion
  /// W * sum c_nk H_nk has the same coefficients in the weighted basis.
  BlockVector with_weighted_tag(bool weighted) const;

  /// Copy truncated or zero-padded to another degree.
  BlockVector resized(int degree) const;

  /// Checked binary ops (basis tags must agree).
  BlockVector& operator+=(const BlockVector& o);
  BlockVector& operator*=(double s);

 private:
  BasisId basis_;
  int degree_ = -1;
  std::vector<double> data_;
};

}  // namespace sliceop

#endif
