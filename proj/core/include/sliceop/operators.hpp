#ifndef SLICEOP_OPERATORS_HPP
#define SLICEOP_OPERATORS_HPP

#include "sliceop/basis2d.hpp"
#include "sliceop/bbb_matrix.hpp"
#include "sliceop/block_vector.hpp"

namespace sliceop {

/// Partial-derivative operator d/dx: coefficients in the basis with
/// parameters src map to the basis with every parameter raised by one.
/// Block-bandwidths (-1,3), sub-block-bandwidths (0,2).
BBBMatrix build_dx(Workspace& ws, const BasisParams& src, int block_rows, int block_cols);

/// d/dy: raises the rho-boundary parameters only.  Block-bandwidths (-1,1),
/// sub-block-bandwidths (-1,1).
BBBMatrix build_dy(Workspace& ws, const BasisParams& src, int block_rows, int block_cols);

/// Weighted derivative d/dx [W^{src} f]: weighted coefficients with every
/// parameter lowered by one.  Requires the decremented parameters >= 0.
/// Block-bandwidths (3,-1), sub-block-bandwidths (2,0).
BBBMatrix build_wx(Workspace& ws, const BasisParams& src, int block_rows, int block_cols);

/// d/dy [W^{src} f]; lowers the rho-boundary parameters.  Block-bandwidths
/// (1,-1), sub-block-bandwidths (1,-1).
BBBMatrix build_wy(Workspace& ws, const BasisParams& src, int block_rows, int block_cols);

/// Basis conversion: expands the src family in the family with parameters
/// src + delta, where delta has 0/1 entries (use line_mask / arc_mask or
/// their sum).  Block-bandwidths (0, |delta|), sub-block (0, delta.c+delta.d).
BBBMatrix build_conversion(Workspace& ws, const BasisParams& src, const BasisParams& delta,
                           int block_rows, int block_cols);

/// Weighted conversion: W^{src} H^{src} expanded over W^{src-delta} H^{src-delta}.
BBBMatrix build_conversion_weighted(Workspace& ws, const BasisParams& src,
                                    const BasisParams& delta, int block_rows, int block_cols);

/// Diagonal of squared norms ||H_{n,k}||^2 for a basis.
BBBMatrix build_norm_diagonal(Workspace& ws, const BasisParams& p, int blocks);

/// Laplacian acting on weighted Dirichlet-space coefficients, producing
/// plain coefficients in the same parameter family (square, N+1 blocks).
BBBMatrix laplacian_dirichlet(Workspace& ws, int N);

/// Laplacian from the parameter-zero family into the doubled family.
BBBMatrix laplacian_plain_to_bi(Workspace& ws, int block_rows, int block_cols);

/// Laplacian from the weighted doubled family into the parameter-zero family.
BBBMatrix laplacian_bi_to_plain(Workspace& ws, int block_rows, int block_cols);

/// Biharmonic operator on the weighted doubled family (square, N+1 blocks).
BBBMatrix biharmonic_operator(Workspace& ws, int N);

/// Multiplication operator V for a function v given by coefficients in an
/// unweighted basis: the Clenshaw recurrence evaluated at the transposed
/// Jacobi matrices of that basis.  V acts on coefficient vectors in the
/// same basis (square, nblocks).
BBBMatrix multiplication_operator(Workspace& ws, const BlockVector& v, int nblocks);

enum class OperatorKind {
  Identity,
  Dx,
  Dy,
  Wx,
  Wy,
  Tab,
  Tc,
  Tabc,
  TWab,
  TWc,
  TWabc,
  Jx,
  Jy,
  LaplacianDirichlet,
  LaplacianPlainToBi,
  LaplacianBiToPlain,
  Biharmonic,
  VariableCoeff,
};

struct OperatorRequest {
  OperatorKind kind = OperatorKind::Identity;
  BasisParams source;  // ignored by the fixed-parameter compositions
  int degree = 10;     // truncation (block count - 1)
  BlockVector coeff;   // VariableCoeff only
};

BBBMatrix build_operator(Workspace& ws, const OperatorRequest& req);

}  // namespace sliceop

#endif
