#pragma once

#include <optional>

#include "hyperflow/core.hpp"

namespace hyperflow {

/// Precomputed sparse coefficient lists realizing the vertex gradient and
/// divergence as linear maps.
///
/// For hyperarc a_q and vertex v the general-variant coefficients are
///
///   grad: W_G(a_q)^gamma * ( delta_in  * w_I(v)^alpha w_G(v)^epsilon / |a_q^in|
///                          - delta_out * w_I(v)^alpha w_G(v)^eta     / |a_q^out| )
///   div:  ( delta_out * w_G(v)^eta / |a_q^out| - delta_in * w_G(v)^epsilon / |a_q^in| )
///         * W_I(a_q)^beta W_G(a_q)^gamma
///
/// In the simplified variant the cardinality normalizers and all weight powers
/// are dropped; grad keeps the bare delta signs and div gains a 1/deg(v) factor:
///   grad: delta_in - delta_out
///   div:  -(1/deg(v)) * (delta_out - delta_in)
///
/// Applications are pure functions of (system, state) and evaluated
/// sequentially in hyperarc order, so results are deterministic.
class IncidenceSystem {
  public:
    const OrientedHypergraph& hypergraph() const { return *hg_; }
    const OperatorParams& params() const { return params_; }

    std::size_t n_vertices() const { return hg_->n_vertices; }
    std::size_t n_hyperarcs() const { return hg_->n_hyperarcs(); }
    std::size_t nonzeros() const { return vertices_.size(); }

    // CSR-style access; grad and div share one sparsity pattern.
    std::size_t arc_begin(std::size_t q) const { return offsets_[q]; }
    std::size_t arc_end(std::size_t q) const { return offsets_[q + 1]; }
    VertexId entry_vertex(std::size_t k) const { return vertices_[k]; }
    double grad_coeff(std::size_t k) const { return grad_coeff_[k]; }
    double div_coeff(std::size_t k) const { return div_coeff_[k]; }

    double wg_gamma(std::size_t q) const { return wg_gamma_[q]; }   // W_G^gamma
    double wi_beta(std::size_t q) const { return wi_beta_[q]; }     // W_I^beta

    friend IncidenceSystem assemble(const OrientedHypergraph& h, const OperatorParams& params);

  private:
    const OrientedHypergraph* hg_ = nullptr;  // must outlive the system
    OperatorParams params_;
    std::vector<std::size_t> offsets_;
    std::vector<VertexId> vertices_;
    std::vector<double> grad_coeff_;
    std::vector<double> div_coeff_;
    std::vector<double> wg_gamma_;
    std::vector<double> wi_beta_;
};

/// Precompute the coefficient structure. Total nonzeros equal
/// sum_q (|a_q^out| + |a_q^in|). The hypergraph must outlive the system.
IncidenceSystem assemble(const OrientedHypergraph& h, const OperatorParams& params);
IncidenceSystem assemble(OrientedHypergraph&& h, const OperatorParams& params) = delete;

/// (grad f)(a_q); vertex functions to hyperarc functions.
HyperarcState gradient(const IncidenceSystem& sys, const VertexState& f);

/// Adjoint of the gradient w.r.t. the weighted inner products:
/// <G, grad f>_A == <f, adjoint G>_V exactly in exact arithmetic.
VertexState adjoint(const IncidenceSystem& sys, const HyperarcState& F);

/// div F = -adjoint F, elementwise.
VertexState divergence(const IncidenceSystem& sys, const HyperarcState& F);

/// phi_p(x) = |x|^{p-2} x, smoothed to (x^2 + reg^2)^{(p-2)/2} x for p < 2
/// when reg > 0; phi_p(0) = 0 in the exact (reg = 0) mode.
double phi_p(double x, double p, double regularization);

inline double default_regularization(double p) { return p < 2.0 ? 1e-8 : 0.0; }

/// Composed production path: div( phi_p(grad f) ).
VertexState p_laplacian(const IncidenceSystem& sys, const VertexState& f, double p,
                        std::optional<double> regularization = std::nullopt);

/// Literal evaluation of the expanded p-Laplacian formula (p > 1). The inner
/// |sum|^{p-2} base is recovered from the cached gradient value so both paths
/// share one summation order; everything else is recomputed from the raw
/// hypergraph. Exists to cross-validate the composed path.
VertexState p_laplacian_direct(const IncidenceSystem& sys, const VertexState& f, double p);

/// E_p(f) = (1/p) sum_q W_I(a_q)^beta |grad f(a_q)|^p
double energy(const IncidenceSystem& sys, const VertexState& f, double p);

/// Same quantity computed from an already evaluated gradient.
double energy_from_gradient(const IncidenceSystem& sys, const HyperarcState& grad, double p);

/// p * E_p(f) / sum_i w_I^alpha |f(v_i)|^p. For p = 2 this equals
/// <f, -lap f>_V / <f, f>_V.
double rayleigh_quotient(const IncidenceSystem& sys, const VertexState& f, double p);

}  // namespace hyperflow
