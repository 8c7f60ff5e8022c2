#include "sliceop/block_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sliceop {

std::vector<double> BlockVector::block_norms() const {
  std::vector<double> out(degree_ + 1);
  for (int n = 0; n <= degree_; ++n) {
    double s = 0;
    for (int k = 0; k <= n; ++k) s += (*this)(n, k) * (*this)(n, k);
    out[n] = std::sqrt(s);
  }
  return out;
}

double BlockVector::max_norm() const {
  double m = 0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

BlockVector BlockVector::with_weighted_tag(bool weighted) const {
  BlockVector out = *this;
  out.basis_.weighted = weighted;
  return out;
}

BlockVector BlockVector::resized(int degree) const {
  BlockVector out(basis_, degree);
  const int ncopy = std::min(degree, degree_);
  std::copy_n(data_.begin(), length(ncopy), out.data_.begin());
  return out;
}

BlockVector& BlockVector::operator+=(const BlockVector& o) {
  if (!(basis_ == o.basis_) || degree_ != o.degree_)
    throw std::invalid_argument("BlockVector: basis mismatch in +=");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

BlockVector& BlockVector::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

}  // namespace sliceop
