// Test-only reference implementations and random-instance generators.
//
// Everything here evaluates the operator definitions with plain dense loops
// over the hypergraph, independently of the IncidenceSystem coefficient
// machinery it is used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <utility>

#include "hyperflow/core.hpp"

namespace oracle {

using hyperflow::Hyperarc;
using hyperflow::OperatorParams;
using hyperflow::OperatorVariant;
using hyperflow::OrientedHypergraph;
using hyperflow::VertexId;
using hyperflow::VertexState;

inline bool contains(const std::vector<VertexId>& side, VertexId v) {
    return std::find(side.begin(), side.end(), v) != side.end();
}

inline double wpow(double w, double e) { return std::pow(w, e); }

// Vertex gradient, literal general definition with delta_in/delta_out
// membership tests per vertex.
inline std::vector<double> gradient(const OrientedHypergraph& h, const OperatorParams& prm,
                                    const VertexState& f) {
    std::vector<double> g(h.n_hyperarcs(), 0.0);
    const bool simplified = prm.variant == OperatorVariant::SimplifiedJostMulas;
    for (std::size_t q = 0; q < h.n_hyperarcs(); ++q) {
        const auto& a = h.hyperarcs[q];
        double s = 0.0;
        for (VertexId v = 0; v < h.n_vertices; ++v) {
            const double din = contains(a.in, v) ? 1.0 : 0.0;
            const double dout = contains(a.out, v) ? 1.0 : 0.0;
            if (simplified) {
                s += (din - dout) * f[v];
            } else {
                s += (din * wpow(h.w_I[v], prm.alpha) * wpow(h.w_G[v], prm.epsilon) /
                          static_cast<double>(a.in.size()) -
                      dout * wpow(h.w_I[v], prm.alpha) * wpow(h.w_G[v], prm.eta) /
                          static_cast<double>(a.out.size())) *
                     f[v];
            }
        }
        g[q] = simplified ? s : wpow(h.W_G[q], prm.gamma) * s;
    }
    return g;
}

inline std::vector<double> adjoint(const OrientedHypergraph& h, const OperatorParams& prm,
                                   const std::vector<double>& F) {
    std::vector<double> r(h.n_vertices, 0.0);
    const bool simplified = prm.variant == OperatorVariant::SimplifiedJostMulas;
    for (VertexId v = 0; v < h.n_vertices; ++v) {
        double s = 0.0;
        for (std::size_t q = 0; q < h.n_hyperarcs(); ++q) {
            const auto& a = h.hyperarcs[q];
            const double din = contains(a.in, v) ? 1.0 : 0.0;
            const double dout = contains(a.out, v) ? 1.0 : 0.0;
            if (simplified) {
                if (h.degree[v] > 0) {
                    s += -1.0 / static_cast<double>(h.degree[v]) * (din - dout) * F[q];
                }
            } else {
                s += (din * wpow(h.w_G[v], prm.epsilon) / static_cast<double>(a.in.size()) -
                      dout * wpow(h.w_G[v], prm.eta) / static_cast<double>(a.out.size())) *
                     wpow(h.W_I[q], prm.beta) * wpow(h.W_G[q], prm.gamma) * F[q];
            }
        }
        r[v] = s;
    }
    return r;
}

inline std::vector<double> divergence(const OrientedHypergraph& h, const OperatorParams& prm,
                                      const std::vector<double>& F) {
    std::vector<double> r = adjoint(h, prm, F);
    for (double& x : r) x = -x;
    return r;
}

// The expanded triple-sum p-Laplacian formula (general variant).
inline VertexState p_laplacian(const OrientedHypergraph& h, const OperatorParams& prm,
                               const VertexState& f, double p) {
    VertexState r(h.n_vertices, 0.0);
    for (VertexId v = 0; v < h.n_vertices; ++v) {
        double total = 0.0;
        for (std::size_t q = 0; q < h.n_hyperarcs(); ++q) {
            const auto& a = h.hyperarcs[q];
            const double din = contains(a.in, v) ? 1.0 : 0.0;
            const double dout = contains(a.out, v) ? 1.0 : 0.0;
            if (din == 0.0 && dout == 0.0) continue;
            double inner = 0.0;
            for (VertexId u = 0; u < h.n_vertices; ++u) {
                const double uin = contains(a.in, u) ? 1.0 : 0.0;
                const double uout = contains(a.out, u) ? 1.0 : 0.0;
                inner += (uin * wpow(h.w_I[u], prm.alpha) * wpow(h.w_G[u], prm.epsilon) /
                              static_cast<double>(a.in.size()) -
                          uout * wpow(h.w_I[u], prm.alpha) * wpow(h.w_G[u], prm.eta) /
                              static_cast<double>(a.out.size())) *
                         f[u];
            }
            if (inner == 0.0) continue;
            total += (dout * wpow(h.w_G[v], prm.eta) / static_cast<double>(a.out.size()) -
                      din * wpow(h.w_G[v], prm.epsilon) / static_cast<double>(a.in.size())) *
                     wpow(h.W_I[q], prm.beta) * wpow(h.W_G[q], p * prm.gamma) *
                     std::pow(std::abs(inner), p - 2.0) * inner;
        }
        r[v] = total;
    }
    return r;
}

// The simplified p-Laplacian in its expanded form: 1/deg(v_i) times, over
// incident hyperarcs, |sum_in f - sum_out f|^{p-2} times (co-oriented sum
// minus anti-oriented sum).
inline VertexState p_laplacian_simplified(const OrientedHypergraph& h, const VertexState& f,
                                          double p) {
    VertexState r(h.n_vertices, 0.0);
    for (VertexId v = 0; v < h.n_vertices; ++v) {
        if (h.degree[v] == 0) continue;
        double total = 0.0;
        for (std::size_t q = 0; q < h.n_hyperarcs(); ++q) {
            const auto& a = h.hyperarcs[q];
            const double din = contains(a.in, v) ? 1.0 : 0.0;
            const double dout = contains(a.out, v) ? 1.0 : 0.0;
            if (din == 0.0 && dout == 0.0) continue;
            double diff = 0.0;
            for (VertexId u : a.in) diff += f[u];
            for (VertexId u : a.out) diff -= f[u];
            double co = 0.0, anti = 0.0;
            for (VertexId u = 0; u < h.n_vertices; ++u) {
                const double uin = contains(a.in, u) ? 1.0 : 0.0;
                const double uout = contains(a.out, u) ? 1.0 : 0.0;
                co += (dout * uout + din * uin) * f[u];
                anti += (dout * uin + din * uout) * f[u];
            }
            if (diff == 0.0) continue;
            total += std::pow(std::abs(diff), p - 2.0) * (co - anti);
        }
        r[v] = total / static_cast<double>(h.degree[v]);
    }
    return r;
}

inline double inner_vertex(const OrientedHypergraph& h, double alpha, const VertexState& f,
                           const VertexState& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += wpow(h.w_I[i], alpha) * f[i] * g[i];
    return s;
}

inline double inner_hyperarc(const OrientedHypergraph& h, double beta,
                             const std::vector<double>& F, const std::vector<double>& G) {
    double s = 0.0;
    for (std::size_t q = 0; q < F.size(); ++q) s += wpow(h.W_I[q], beta) * F[q] * G[q];
    return s;
}

// ---------------------------------------------------------------------------
// Random instances

struct InstanceOptions {
    std::size_t min_vertices = 2;
    std::size_t max_vertices = 12;
    std::size_t max_hyperarcs = 20;
    std::size_t max_side = 4;
    bool unit_vertex_weights = false;
    bool unit_hyperarc_weights = false;
    bool random_exponents = false;
    bool epsilon_equals_eta = false;
    bool with_reversed = false;          // add reversed twins with equal W weights
    bool connected_pairwise_base = false;
};

inline std::vector<VertexId> sample_subset(std::mt19937_64& rng, std::size_t n,
                                           std::size_t size, const std::set<VertexId>& avoid) {
    std::set<VertexId> chosen;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    while (chosen.size() < size) {
        const VertexId v = static_cast<VertexId>(pick(rng));
        if (avoid.count(v)) continue;
        chosen.insert(v);
    }
    return {chosen.begin(), chosen.end()};
}

inline std::pair<OrientedHypergraph, OperatorParams> random_instance(std::mt19937_64& rng,
                                                                     const InstanceOptions& o) {
    std::uniform_int_distribution<std::size_t> nv(o.min_vertices, o.max_vertices);
    const std::size_t n = nv(rng);
    std::uniform_real_distribution<double> wdist(0.5, 2.0);
    std::uniform_real_distribution<double> edist(-2.0, 2.0);

    std::set<std::pair<std::vector<VertexId>, std::vector<VertexId>>> used;
    std::vector<Hyperarc> arcs;

    if (o.connected_pairwise_base && n >= 2) {
        std::uniform_int_distribution<int> flip(0, 1);
        for (VertexId v = 1; v < n; ++v) {
            std::uniform_int_distribution<VertexId> parent(0, v - 1);
            const VertexId u = parent(rng);
            Hyperarc a = flip(rng) ? Hyperarc{{u}, {v}} : Hyperarc{{v}, {u}};
            if (used.insert({a.out, a.in}).second) arcs.push_back(std::move(a));
        }
    }

    std::uniform_int_distribution<std::size_t> na(1, o.max_hyperarcs);
    const std::size_t extra = na(rng);
    const std::size_t max_side = std::min(o.max_side, n > 1 ? n - 1 : 1);
    std::uniform_int_distribution<std::size_t> side(1, std::max<std::size_t>(1, max_side));
    for (std::size_t t = 0; t < extra && n >= 2; ++t) {
        const std::size_t n_out = std::min(side(rng), n - 1);
        const std::size_t n_in = std::min(side(rng), n - n_out);
        std::vector<VertexId> out = sample_subset(rng, n, n_out, {});
        std::vector<VertexId> in =
            sample_subset(rng, n, n_in, std::set<VertexId>(out.begin(), out.end()));
        Hyperarc a{std::move(out), std::move(in)};
        if (used.insert({a.out, a.in}).second) arcs.push_back(std::move(a));
    }
    if (arcs.empty()) {
        arcs.push_back(Hyperarc{{0}, {static_cast<VertexId>(n > 1 ? 1 : 0)}});
    }

    if (o.with_reversed) {
        const std::size_t m0 = arcs.size();
        std::uniform_int_distribution<int> coin(0, 1);
        for (std::size_t q = 0; q < m0; ++q) {
            if (!coin(rng)) continue;
            Hyperarc rev{arcs[q].in, arcs[q].out};
            if (used.insert({rev.out, rev.in}).second) arcs.push_back(std::move(rev));
        }
    }

    hyperflow::HypergraphWeights w;
    if (!o.unit_vertex_weights) {
        w.vertex_inner.resize(n);
        w.vertex_grad.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            w.vertex_inner[i] = wdist(rng);
            w.vertex_grad[i] = wdist(rng);
        }
    }
    if (!o.unit_hyperarc_weights) {
        w.hyperarc_inner.resize(arcs.size());
        w.hyperarc_grad.resize(arcs.size());
        for (std::size_t q = 0; q < arcs.size(); ++q) {
            w.hyperarc_inner[q] = wdist(rng);
            w.hyperarc_grad[q] = wdist(rng);
        }
        if (o.with_reversed) {
            // Wherever a reversal is stored, the weight functions must be
            // symmetric for gradient antisymmetry to apply.
            std::map<std::pair<std::vector<VertexId>, std::vector<VertexId>>, std::size_t> index;
            for (std::size_t q = 0; q < arcs.size(); ++q) {
                std::vector<VertexId> out = arcs[q].out;
                std::vector<VertexId> in = arcs[q].in;
                std::sort(out.begin(), out.end());
                std::sort(in.begin(), in.end());
                index.emplace(std::make_pair(std::move(out), std::move(in)), q);
            }
            for (const auto& [key, q] : index) {
                auto it = index.find(std::make_pair(key.second, key.first));
                if (it != index.end() && it->second > q) {
                    w.hyperarc_inner[it->second] = w.hyperarc_inner[q];
                    w.hyperarc_grad[it->second] = w.hyperarc_grad[q];
                }
            }
        }
    }

    OperatorParams prm;
    if (o.random_exponents) {
        prm.alpha = edist(rng);
        prm.beta = edist(rng);
        prm.gamma = edist(rng);
        prm.epsilon = edist(rng);
        prm.eta = o.epsilon_equals_eta ? prm.epsilon : edist(rng);
    }
    return {hyperflow::build_hypergraph(n, std::move(arcs), std::move(w)), prm};
}

inline VertexState random_state(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                double hi = 1.0) {
    std::uniform_real_distribution<double> unif(lo, hi);
    VertexState f(n);
    for (double& x : f) x = unif(rng);
    return f;
}

inline bool weakly_connected(const OrientedHypergraph& h) {
    if (h.n_vertices == 0) return true;
    std::vector<std::vector<VertexId>> adj(h.n_vertices);
    for (const auto& a : h.hyperarcs) {
        // Every member of a hyperarc is mutually reachable through it.
        std::vector<VertexId> all;
        all.insert(all.end(), a.out.begin(), a.out.end());
        all.insert(all.end(), a.in.begin(), a.in.end());
        for (std::size_t i = 1; i < all.size(); ++i) {
            adj[all[0]].push_back(all[i]);
            adj[all[i]].push_back(all[0]);
        }
    }
    std::vector<char> seen(h.n_vertices, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const VertexId u = stack.back();
        stack.pop_back();
        for (VertexId v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == h.n_vertices;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace oracle
