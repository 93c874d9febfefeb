#include "hyperflow/operators.hpp"

#include <cmath>

namespace hyperflow {

namespace {

void check_vertex_length(const IncidenceSystem& sys, const VertexState& f) {
    if (f.size() != sys.n_vertices()) {
        throw LengthMismatchError("vertex state: expected length " +
                                  std::to_string(sys.n_vertices()) + ", got " +
                                  std::to_string(f.size()));
    }
}

void check_hyperarc_length(const IncidenceSystem& sys, const HyperarcState& F) {
    if (F.size() != sys.n_hyperarcs()) {
        throw LengthMismatchError("hyperarc state: expected length " +
                                  std::to_string(sys.n_hyperarcs()) + ", got " +
                                  std::to_string(F.size()));
    }
}

void check_p(double p) {
    if (!std::isfinite(p) || p < 1.0) {
        throw POutOfRangeError("p must be a finite real >= 1, got " + std::to_string(p));
    }
}

}  // namespace

IncidenceSystem assemble(const OrientedHypergraph& h, const OperatorParams& params) {
    params.validate();
    const bool simplified = params.variant == OperatorVariant::SimplifiedJostMulas;

    IncidenceSystem sys;
    sys.hg_ = &h;
    sys.params_ = params;

    std::size_t nnz = 0;
    for (const auto& a : h.hyperarcs) nnz += a.out.size() + a.in.size();
    sys.offsets_.reserve(h.n_hyperarcs() + 1);
    sys.vertices_.reserve(nnz);
    sys.grad_coeff_.reserve(nnz);
    sys.div_coeff_.reserve(nnz);
    sys.wg_gamma_.reserve(h.n_hyperarcs());
    sys.wi_beta_.reserve(h.n_hyperarcs());

    sys.offsets_.push_back(0);
    for (std::size_t q = 0; q < h.n_hyperarcs(); ++q) {
        const auto& a = h.hyperarcs[q];
        const double wg_gamma = simplified ? 1.0 : weight_pow(h.W_G[q], params.gamma);
        const double wi_beta = simplified ? 1.0 : weight_pow(h.W_I[q], params.beta);
        const double arc_scale = wi_beta * wg_gamma;
        sys.wg_gamma_.push_back(wg_gamma);
        sys.wi_beta_.push_back(wi_beta);

        const double inv_out = 1.0 / static_cast<double>(a.out.size());
        const double inv_in = 1.0 / static_cast<double>(a.in.size());

        // Merge the two sorted, disjoint sides so entries are ascending by vertex.
        auto io = a.out.begin();
        auto ii = a.in.begin();
        while (io != a.out.end() || ii != a.in.end()) {
            const bool take_out =
                ii == a.in.end() || (io != a.out.end() && *io < *ii);
            if (take_out) {
                const VertexId v = *io++;
                if (simplified) {
                    if (h.degree[v] == 0) {
                        throw ZeroDegreeVertexError("vertex " + std::to_string(v) +
                                                    " has zero degree");
                    }
                    sys.vertices_.push_back(v);
                    sys.grad_coeff_.push_back(-1.0);
                    sys.div_coeff_.push_back(-1.0 / static_cast<double>(h.degree[v]));
                } else {
                    sys.vertices_.push_back(v);
                    const double wia = weight_pow(h.w_I[v], params.alpha);
                    const double wge = weight_pow(h.w_G[v], params.eta);
                    sys.grad_coeff_.push_back(-wg_gamma * wia * wge * inv_out);
                    sys.div_coeff_.push_back(wge * inv_out * arc_scale);
                }
            } else {
                const VertexId v = *ii++;
                if (simplified) {
                    if (h.degree[v] == 0) {
                        throw ZeroDegreeVertexError("vertex " + std::to_string(v) +
                                                    " has zero degree");
                    }
                    sys.vertices_.push_back(v);
                    sys.grad_coeff_.push_back(1.0);
                    sys.div_coeff_.push_back(1.0 / static_cast<double>(h.degree[v]));
                } else {
                    sys.vertices_.push_back(v);
                    const double wia = weight_pow(h.w_I[v], params.alpha);
                    const double wge = weight_pow(h.w_G[v], params.epsilon);
                    sys.grad_coeff_.push_back(wg_gamma * wia * wge * inv_in);
                    sys.div_coeff_.push_back(-wge * inv_in * arc_scale);
                }
            }
        }
        sys.offsets_.push_back(sys.vertices_.size());
    }
    return sys;
}

HyperarcState gradient(const IncidenceSystem& sys, const VertexState& f) {
    check_vertex_length(sys, f);
    HyperarcState g(sys.n_hyperarcs());
    for (std::size_t q = 0; q < sys.n_hyperarcs(); ++q) {
        double s = 0.0;
        for (std::size_t k = sys.arc_begin(q); k < sys.arc_end(q); ++k) {
            s += sys.grad_coeff(k) * f[sys.entry_vertex(k)];
        }
        g[q] = s;
    }
    return g;
}

VertexState divergence(const IncidenceSystem& sys, const HyperarcState& F) {
    check_hyperarc_length(sys, F);
    VertexState d(sys.n_vertices(), 0.0);
    for (std::size_t q = 0; q < sys.n_hyperarcs(); ++q) {
        const double Fq = F[q];
        if (Fq == 0.0) continue;
        for (std::size_t k = sys.arc_begin(q); k < sys.arc_end(q); ++k) {
            d[sys.entry_vertex(k)] += sys.div_coeff(k) * Fq;
        }
    }
    return d;
}

VertexState adjoint(const IncidenceSystem& sys, const HyperarcState& F) {
    VertexState d = divergence(sys, F);
    for (double& x : d) x = -x;
    return d;
}

double phi_p(double x, double p, double regularization) {
    if (p == 2.0) return x;
    if (regularization > 0.0 && p < 2.0) {
        return x * std::pow(x * x + regularization * regularization, 0.5 * (p - 2.0));
    }
    if (x == 0.0) return 0.0;
    return std::pow(std::abs(x), p - 2.0) * x;
}

VertexState p_laplacian(const IncidenceSystem& sys, const VertexState& f, double p,
                        std::optional<double> regularization) {
    check_p(p);
    const double reg = regularization.value_or(default_regularization(p));
    if (reg < 0.0) throw Error("regularization must be nonnegative");
    HyperarcState g = gradient(sys, f);
    for (double& x : g) x = phi_p(x, p, reg);
    return divergence(sys, g);
}

VertexState p_laplacian_direct(const IncidenceSystem& sys, const VertexState& f, double p) {
    if (!std::isfinite(p) || p <= 1.0) {
        throw POutOfRangeError("the direct formula requires p > 1, got " + std::to_string(p));
    }
    check_vertex_length(sys, f);
    const OrientedHypergraph& h = sys.hypergraph();
    const OperatorParams& prm = sys.params();
    const bool simplified = prm.variant == OperatorVariant::SimplifiedJostMulas;

    const HyperarcState g = gradient(sys, f);

    VertexState result(sys.n_vertices(), 0.0);
    for (std::size_t q = 0; q < h.n_hyperarcs(); ++q) {
        const auto& a = h.hyperarcs[q];
        // Inner sum recovered from the cached gradient so both evaluation
        // paths share one summation order.
        const double inner = g[q] / sys.wg_gamma(q);
        if (inner == 0.0) continue;
        const double power = std::pow(std::abs(inner), p - 2.0) * inner;

        if (simplified) {
            for (VertexId v : a.out) {
                result[v] += (-1.0 / static_cast<double>(h.degree[v])) * power;
            }
            for (VertexId v : a.in) {
                result[v] += (1.0 / static_cast<double>(h.degree[v])) * power;
            }
        } else {
            const double arc_factor =
                weight_pow(h.W_I[q], prm.beta) * weight_pow(h.W_G[q], p * prm.gamma);
            const double inv_out = 1.0 / static_cast<double>(a.out.size());
            const double inv_in = 1.0 / static_cast<double>(a.in.size());
            for (VertexId v : a.out) {
                result[v] += weight_pow(h.w_G[v], prm.eta) * inv_out * arc_factor * power;
            }
            for (VertexId v : a.in) {
                result[v] -= weight_pow(h.w_G[v], prm.epsilon) * inv_in * arc_factor * power;
            }
        }
    }
    return result;
}

double energy_from_gradient(const IncidenceSystem& sys, const HyperarcState& grad, double p) {
    check_hyperarc_length(sys, grad);
    double e = 0.0;
    if (p == 2.0) {
        for (std::size_t q = 0; q < grad.size(); ++q) {
            e += sys.wi_beta(q) * grad[q] * grad[q];
        }
    } else {
        for (std::size_t q = 0; q < grad.size(); ++q) {
            e += sys.wi_beta(q) * std::pow(std::abs(grad[q]), p);
        }
    }
    return e / p;
}

double energy(const IncidenceSystem& sys, const VertexState& f, double p) {
    check_p(p);
    return energy_from_gradient(sys, gradient(sys, f), p);
}

double rayleigh_quotient(const IncidenceSystem& sys, const VertexState& f, double p) {
    check_p(p);
    check_vertex_length(sys, f);
    const OrientedHypergraph& h = sys.hypergraph();
    double denom = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        denom += weight_pow(h.w_I[i], sys.params().alpha) * std::pow(std::abs(f[i]), p);
    }
    if (!(denom > 0.0)) throw ZeroFunctionError("Rayleigh quotient of the zero function");
    return p * energy(sys, f, p) / denom;
}

}  // namespace hyperflow
