#pragma once

#include "hyperflow/dynamics.hpp"
#include "hyperflow/operators.hpp"

namespace hyperflow {

/// Dense materialization of f -> -lap^2 f for small instances. Used as the
/// ground-truth oracle in tests; the evaluation code is independent of the
/// sparse incidence path.
struct DenseOperator {
    std::size_t n = 0;
    std::vector<double> matrix;           // row-major n x n, action of -lap^2
    std::vector<double> weight_diagonal;  // w_I^alpha per vertex

    double at(std::size_t i, std::size_t j) const { return matrix[i * n + j]; }
};

/// Column j equals -lap^2 applied to the j-th coordinate basis state,
/// evaluated by dense loops over the raw hypergraph. Guarded to N <= 2000.
/// General variant only.
DenseOperator dense_laplacian(const IncidenceSystem& sys);

struct EigenDecomposition {
    std::vector<double> eigenvalues;   // ascending
    std::vector<double> eigenvectors;  // column-major n x n, original coords,
                                       // normalized in <.,.>_V
};

/// Full spectrum of D^{1/2} M D^{-1/2} via cyclic Jacobi rotations
/// (off-diagonal Frobenius norm <= 1e-12 relative at termination, at most
/// 100 sweeps). Eigenvectors are transformed back to the original coordinates.
EigenDecomposition eigendecomposition(const DenseOperator& op);

/// Exact interior solve of the p = 2 Dirichlet problem with boundary values
/// substituted. Throws SingularSystemError when the interior principal
/// submatrix is numerically singular.
VertexState dirichlet_linear_solve(const DenseOperator& op, const BoundaryCondition& bc);

/// Number of eigenvalues below rel_tol * max(lambda_max, 1). Reported as a
/// diagnostic; whether constants exhaust the gradient nullspace is not
/// asserted anywhere.
std::size_t estimate_nullspace_dimension(const EigenDecomposition& eig, double rel_tol = 1e-8);

}  // namespace hyperflow
