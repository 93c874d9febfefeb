#include "hyperflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hyperflow {

namespace {

// Dense evaluation of -lap^2 straight from the hypergraph definition.
// Deliberately does not touch the IncidenceSystem coefficient lists.
VertexState dense_apply_neg_lap2(const OrientedHypergraph& h, const OperatorParams& prm,
                                 const VertexState& x) {
    VertexState res(h.n_vertices, 0.0);
    for (std::size_t q = 0; q < h.n_hyperarcs(); ++q) {
        const auto& a = h.hyperarcs[q];
        const double wg_gamma = weight_pow(h.W_G[q], prm.gamma);
        const double arc_scale = weight_pow(h.W_I[q], prm.beta) * wg_gamma;

        double s_in = 0.0;
        for (VertexId v : a.in) {
            s_in += weight_pow(h.w_I[v], prm.alpha) * weight_pow(h.w_G[v], prm.epsilon) * x[v];
        }
        double s_out = 0.0;
        for (VertexId v : a.out) {
            s_out += weight_pow(h.w_I[v], prm.alpha) * weight_pow(h.w_G[v], prm.eta) * x[v];
        }
        const double grad = wg_gamma * (s_in / static_cast<double>(a.in.size()) -
                                        s_out / static_cast<double>(a.out.size()));

        for (VertexId v : a.out) {
            const double d =
                weight_pow(h.w_G[v], prm.eta) / static_cast<double>(a.out.size()) * arc_scale;
            res[v] -= d * grad;
        }
        for (VertexId v : a.in) {
            const double d = -weight_pow(h.w_G[v], prm.epsilon) /
                             static_cast<double>(a.in.size()) * arc_scale;
            res[v] -= d * grad;
        }
    }
    return res;
}

double frobenius(const std::vector<double>& m) {
    double s = 0.0;
    for (double x : m) s += x * x;
    return std::sqrt(s);
}

// Cyclic Jacobi on a symmetric matrix; accumulates rotations into V
// (column-major eigenvectors of A). Returns false if the off-diagonal mass
// is still above the threshold after max_sweeps.
bool jacobi(std::vector<double>& A, std::vector<double>& V, std::size_t n, double off_tol,
            int max_sweeps) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return A[i * n + j]; };
    V.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) V[i * n + i] = 1.0;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * at(i, j) * at(i, j);
        }
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= off_tol) return true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double app = at(p, p);
                const double aqq = at(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = V[k * n + p];
                    const double vkq = V[k * n + q];
                    V[k * n + p] = c * vkp - s * vkq;
                    V[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    return off_norm() <= off_tol;
}

struct SymmetricEigen {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column-major, orthonormal
};

SymmetricEigen symmetric_eigen(std::vector<double> S, std::size_t n) {
    const double tol = 1e-12 * std::max(1.0, frobenius(S));
    std::vector<double> V;
    if (!jacobi(S, V, n, tol, 100)) {
        throw NoConvergenceError("Jacobi eigensolver did not converge in 100 sweeps");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return S[a * n + a] < S[b * n + b]; });

    SymmetricEigen e;
    e.values.resize(n);
    e.vectors.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        e.values[k] = S[j * n + j];
        for (std::size_t i = 0; i < n; ++i) e.vectors[i * n + k] = V[i * n + j];
    }
    return e;
}

}  // namespace

DenseOperator dense_laplacian(const IncidenceSystem& sys) {
    const OrientedHypergraph& h = sys.hypergraph();
    const OperatorParams& prm = sys.params();
    if (prm.variant != OperatorVariant::General) {
        throw UnsupportedVariantError(
            "dense_laplacian materializes the general-variant operator only");
    }
    const std::size_t n = h.n_vertices;
    if (n > 2000) {
        throw TooLargeError("dense oracle is guarded to N <= 2000, got " + std::to_string(n));
    }

    DenseOperator op;
    op.n = n;
    op.matrix.assign(n * n, 0.0);
    op.weight_diagonal.resize(n);
    for (std::size_t i = 0; i < n; ++i) op.weight_diagonal[i] = weight_pow(h.w_I[i], prm.alpha);

    VertexState basis(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        basis[j] = 1.0;
        const VertexState col = dense_apply_neg_lap2(h, prm, basis);
        basis[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) op.matrix[i * n + j] = col[i];
    }
    return op;
}

EigenDecomposition eigendecomposition(const DenseOperator& op) {
    const std::size_t n = op.n;
    // Similarity transform S = D^{1/2} M D^{-1/2}; symmetric because -lap^2 is
    // self-adjoint w.r.t. the weighted vertex inner product.
    std::vector<double> S(n * n);
    std::vector<double> sqrt_d(n);
    for (std::size_t i = 0; i < n; ++i) sqrt_d[i] = std::sqrt(op.weight_diagonal[i]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            S[i * n + j] = sqrt_d[i] * op.at(i, j) / sqrt_d[j];
        }
    }
    // Kill rounding asymmetry before rotating.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double m = 0.5 * (S[i * n + j] + S[j * n + i]);
            S[i * n + j] = m;
            S[j * n + i] = m;
        }
    }

    SymmetricEigen se = symmetric_eigen(std::move(S), n);

    EigenDecomposition out;
    out.eigenvalues = std::move(se.values);
    out.eigenvectors.resize(n * n);
    // x = D^{-1/2} v is automatically normalized in <.,.>_V.
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors[i * n + k] = se.vectors[i * n + k] / sqrt_d[i];
        }
    }
    return out;
}

VertexState dirichlet_linear_solve(const DenseOperator& op, const BoundaryCondition& bc) {
    const std::size_t n = op.n;
    if (bc.values.empty()) throw InvalidBoundaryError("boundary condition must be nonempty");
    std::vector<char> is_boundary(n, 0);
    VertexState result(n, 0.0);
    for (const auto& [v, value] : bc.values) {
        if (v >= n) throw VertexOutOfRangeError("boundary vertex out of range");
        if (is_boundary[v]) throw InvalidBoundaryError("boundary vertex listed twice");
        is_boundary[v] = 1;
        result[v] = value;
    }
    std::vector<std::size_t> interior;
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_boundary[i]) interior.push_back(i);
    }
    if (interior.empty()) throw EmptyInteriorError("boundary covers every vertex");
    const std::size_t m = interior.size();

    // Interior block of the symmetrized operator and right-hand side
    // r = -M_IB F_B, transformed by D^{1/2}.
    std::vector<double> S(m * m);
    std::vector<double> sqrt_d(m);
    for (std::size_t i = 0; i < m; ++i) sqrt_d[i] = std::sqrt(op.weight_diagonal[interior[i]]);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            S[i * m + j] = sqrt_d[i] * op.at(interior[i], interior[j]) / sqrt_d[j];
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double v = 0.5 * (S[i * m + j] + S[j * m + i]);
            S[i * m + j] = v;
            S[j * m + i] = v;
        }
    }
    std::vector<double> rhs(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double r = 0.0;
        for (const auto& [v, value] : bc.values) r -= op.at(interior[i], v) * value;
        rhs[i] = sqrt_d[i] * r;
    }

    SymmetricEigen se = symmetric_eigen(std::move(S), m);
    const double lambda_max = std::max(std::abs(se.values.front()), std::abs(se.values.back()));
    const double cutoff = 1e-12 * std::max(lambda_max, 1.0);
    for (double lv : se.values) {
        if (std::abs(lv) <= cutoff) {
            throw SingularSystemError("interior principal submatrix is numerically singular");
        }
    }

    // y = V diag(1/lambda) V^T rhs, then f_I = D^{-1/2} y.
    std::vector<double> coef(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double c = 0.0;
        for (std::size_t i = 0; i < m; ++i) c += se.vectors[i * m + k] * rhs[i];
        coef[k] = c / se.values[k];
    }
    for (std::size_t i = 0; i < m; ++i) {
        double y = 0.0;
        for (std::size_t k = 0; k < m; ++k) y += se.vectors[i * m + k] * coef[k];
        result[interior[i]] = y / sqrt_d[i];
    }
    return result;
}

std::size_t estimate_nullspace_dimension(const EigenDecomposition& eig, double rel_tol) {
    if (eig.eigenvalues.empty()) return 0;
    const double cutoff = rel_tol * std::max(eig.eigenvalues.back(), 1.0);
    std::size_t count = 0;
    for (double lv : eig.eigenvalues) {
        if (lv <= cutoff) ++count;
    }
    return count;
}

}  // namespace hyperflow
