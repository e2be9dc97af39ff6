#pragma once

#include <array>
#include <functional>

#include "porosplit/fe.hpp"
#include "porosplit/sparse.hpp"

namespace porosplit {

/// Pointwise 2x2 tensor, row-major.
using TensorField = std::function<std::array<double, 4>(const Point&)>;
using VectorFunction = std::function<std::array<double, 2>(const Point&)>;

/// (i, j) = int w phi_i . phi_j; block diagonal per component for vector spaces.
CsrMatrix assemble_weighted_mass(const FeSpace& space, const ScalarField& weight);

/// (i, j) = int w phi_j . phi_i between two spaces with the same component count.
CsrMatrix assemble_cross_mass(const FeSpace& row_space, const FeSpace& col_space,
                              const ScalarField& weight);

/// (i, j) = int (W phi_j) . phi_i on a vector space.
CsrMatrix assemble_tensor_mass(const FeSpace& space, const TensorField& weight);

/// (i, j) = int C eps(phi_j) : eps(phi_i), C eps = lambda tr(eps) I + 2 mu eps.
CsrMatrix assemble_elastic_stiffness(const FeSpace& space, const ScalarField& lambda,
                                     const ScalarField& mu);

/// (i, j) = int q_j div(w phi_i): rows on the vector test space, columns on
/// the scalar trial space. The divergence uses the product rule.
CsrMatrix assemble_div_coupling(const FeSpace& trial_scalar, const FeSpace& test_vector,
                                const ScalarField& weight);

/// (i, j) = int N div(w_a phi_i^a) div(w_b phi_j^b); rows on space_a.
CsrMatrix assemble_divdiv(const FeSpace& space_a, const FeSpace& space_b, const ScalarField& w_a,
                          const ScalarField& w_b, const ScalarField& scale);

/// Entry i = int_Gamma w t . phi_i ds over facets tagged `tag`.
Vector assemble_neumann_load(const FeSpace& space, BoundaryTag tag, const VectorFunction& traction,
                             const ScalarField& weight = 1.0);

/// Entry i = int f . phi_i (scalar spaces use f[0]).
Vector assemble_body_load(const FeSpace& space, const VectorFunction& f);

/// Zero the rows in `row_dofs` and columns in `col_dofs`; when
/// `unit_diagonal` is set (square blocks on one space) constrained diagonal
/// entries become 1. Symmetric input stays exactly symmetric.
CsrMatrix constrain(const CsrMatrix& a, const DofSet& row_dofs, const DofSet& col_dofs,
                    bool unit_diagonal);
void constrain(Vector& v, const DofSet& dofs);

/// Assembled operator blocks and loads of one time step. Rows of the
/// rectangular couplings live on the first named space: Dsf is U x V, Bu is
/// U x P, Bv is V x P.
struct BlockSystem {
  CsrMatrix Ms, Ks, Mf, Kf, Dss, Dff, Dsf, Bu, Bv, Mp, S;
  Vector fs, ff, fp;
};

struct BlockDofs {
  DofSet u, v, p;
};

/// Homogeneous Dirichlet elimination on every block and load.
BlockSystem apply_dirichlet(const BlockSystem& system, const BlockDofs& dofs);

}  // namespace porosplit
