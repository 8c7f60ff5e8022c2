#ifndef SLICEOP_PDE_HPP
#define SLICEOP_PDE_HPP

#include <array>
#include <vector>

#include "sliceop/bbb_matrix.hpp"
#include "sliceop/operators.hpp"
#include "sliceop/transform.hpp"

namespace sliceop {

/// Result of a solve: coefficients in the appropriate weighted basis plus an
/// optional constant shift (non-zero constant Dirichlet data) and the
/// certified relative residual of the truncated system.
struct Solution {
  BlockVector coeffs;
  double constant_shift = 0;
  double residual = 0;

  std::vector<double> block_norms() const { return coeffs.block_norms(); }
};

/// Laplace problem  div grad u = f  with zero Dirichlet data; the solution is
/// expanded in the weighted Dirichlet basis, which vanishes on the boundary
/// by construction.
Solution solve_poisson(Workspace& ws, const ScalarField& f, int N);

/// Variable-coefficient Helmholtz  div grad u + k^2 v u = f  with constant
/// Dirichlet data bc (default 0): substituting u = w + bc reduces to the
/// zero-data problem with right side f - bc k^2 v.
Solution solve_helmholtz(Workspace& ws, const ScalarField& f, double k, const ScalarField& v,
                         int N, double bc = 0.0, int v_degree = 8);

/// Biharmonic problem with zero Dirichlet and Neumann data; the solution
/// basis carries two powers of every boundary factor.
Solution solve_biharmonic(Workspace& ws, const ScalarField& f, int N);

double solution_value(Workspace& ws, const Solution& sol, double x, double y);
/// {u, du/dx, du/dy}
std::array<double, 3> solution_gradient(Workspace& ws, const Solution& sol, double x, double y);

/// Single-element p-FEM discretization of  -div grad u = f  in the weighted
/// Dirichlet basis: symmetric stiffness from the weighted derivative and
/// conversion operators, diagonal load scaling by the squared basis norms.
struct PfemSystem {
  int degree = 0;
  BBBMatrix stiffness;
  BBBMatrix load_scale;
};

PfemSystem pfem_assemble(Workspace& ws, int N);
BlockVector pfem_load(Workspace& ws, const PfemSystem& sys, const ScalarField& f);
Solution pfem_solve(Workspace& ws, const PfemSystem& sys, const ScalarField& f);

/// Evenly spread samples on the boundary of the domain (for trace checks).
std::vector<std::array<double, 2>> boundary_points(const Domain& dom, int count);

}  // namespace sliceop

#endif
