#include "hyperflow/core.hpp"

#include <algorithm>
#include <map>

namespace hyperflow {

void OperatorParams::validate() const {
    for (double e : {alpha, beta, gamma, epsilon, eta}) {
        if (!std::isfinite(e)) throw Error("operator exponents must be finite");
    }
    if (variant == OperatorVariant::SimplifiedJostMulas) {
        if (alpha != 0.0 || beta != 0.0 || gamma != 0.0 || epsilon != 0.0 || eta != 0.0) {
            throw Error("the simplified variant requires all exponents to be zero");
        }
    }
}

namespace {

void normalize_side(std::vector<VertexId>& side, std::size_t n, const char* name,
                    std::size_t arc_index) {
    if (side.empty()) {
        throw EmptySideError("hyperarc " + std::to_string(arc_index) + ": " + name +
                             " set is empty");
    }
    std::sort(side.begin(), side.end());
    side.erase(std::unique(side.begin(), side.end()), side.end());
    if (side.back() >= n) {
        throw VertexOutOfRangeError("hyperarc " + std::to_string(arc_index) + ": vertex " +
                                    std::to_string(side.back()) + " >= " + std::to_string(n));
    }
}

bool sorted_sets_intersect(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else
            return true;
    }
    return false;
}

std::vector<double> resolve_weights(std::vector<double> w, std::size_t n, const char* name) {
    if (w.empty()) w.assign(n, 1.0);
    if (w.size() != n) {
        throw LengthMismatchError(std::string(name) + ": expected " + std::to_string(n) +
                                  " weights, got " + std::to_string(w.size()));
    }
    for (double x : w) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw NonpositiveWeightError(std::string(name) +
                                         " weights must be strictly positive and finite");
        }
    }
    return w;
}

bool nearly_equal(double a, double b, double rel_tol) {
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

OrientedHypergraph build_hypergraph(std::size_t n_vertices, std::vector<Hyperarc> hyperarcs,
                                    HypergraphWeights weights, std::vector<std::string> labels) {
    OrientedHypergraph h;
    h.n_vertices = n_vertices;

    for (std::size_t q = 0; q < hyperarcs.size(); ++q) {
        auto& a = hyperarcs[q];
        normalize_side(a.out, n_vertices, "output", q);
        normalize_side(a.in, n_vertices, "input", q);
        if (sorted_sets_intersect(a.out, a.in)) {
            throw OverlappingSidesError("hyperarc " + std::to_string(q) +
                                        ": output and input sets overlap");
        }
    }

    std::map<std::pair<std::vector<VertexId>, std::vector<VertexId>>, std::size_t> seen;
    for (std::size_t q = 0; q < hyperarcs.size(); ++q) {
        auto [it, inserted] = seen.emplace(std::make_pair(hyperarcs[q].out, hyperarcs[q].in), q);
        if (!inserted) {
            throw DuplicateHyperarcError("hyperarcs " + std::to_string(it->second) + " and " +
                                         std::to_string(q) + " are identical");
        }
    }

    h.hyperarcs = std::move(hyperarcs);
    h.w_I = resolve_weights(std::move(weights.vertex_inner), n_vertices, "w_I");
    h.w_G = resolve_weights(std::move(weights.vertex_grad), n_vertices, "w_G");
    h.W_I = resolve_weights(std::move(weights.hyperarc_inner), h.hyperarcs.size(), "W_I");
    h.W_G = resolve_weights(std::move(weights.hyperarc_grad), h.hyperarcs.size(), "W_G");

    if (!labels.empty() && labels.size() != n_vertices) {
        throw LengthMismatchError("labels: expected " + std::to_string(n_vertices) +
                                  " entries, got " + std::to_string(labels.size()));
    }
    h.labels = std::move(labels);

    h.degree.assign(n_vertices, 0);
    for (const auto& a : h.hyperarcs) {
        for (VertexId v : a.out) ++h.degree[v];
        for (VertexId v : a.in) ++h.degree[v];
    }
    return h;
}

double inner_product_vertex(const OrientedHypergraph& h, const VertexState& f,
                            const VertexState& g, const InnerProductParams& p) {
    if (f.size() != h.n_vertices || g.size() != h.n_vertices) {
        throw LengthMismatchError("vertex states must have length " +
                                  std::to_string(h.n_vertices));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        s += weight_pow(h.w_I[i], p.alpha) * f[i] * g[i];
    }
    return s;
}

double inner_product_hyperarc(const OrientedHypergraph& h, const HyperarcState& F,
                              const HyperarcState& G, const InnerProductParams& p) {
    if (F.size() != h.n_hyperarcs() || G.size() != h.n_hyperarcs()) {
        throw LengthMismatchError("hyperarc states must have length " +
                                  std::to_string(h.n_hyperarcs()));
    }
    double s = 0.0;
    for (std::size_t q = 0; q < F.size(); ++q) {
        s += weight_pow(h.W_I[q], p.beta) * F[q] * G[q];
    }
    return s;
}

WeightSymmetryReport check_symmetric_hyperarc_weights(const OrientedHypergraph& h) {
    WeightSymmetryReport report;
    std::map<std::pair<std::vector<VertexId>, std::vector<VertexId>>, std::size_t> index;
    for (std::size_t q = 0; q < h.hyperarcs.size(); ++q) {
        index.emplace(std::make_pair(h.hyperarcs[q].out, h.hyperarcs[q].in), q);
    }
    constexpr double kTol = 1e-12;
    for (std::size_t q = 0; q < h.hyperarcs.size(); ++q) {
        auto it = index.find(std::make_pair(h.hyperarcs[q].in, h.hyperarcs[q].out));
        if (it == index.end() || it->second <= q) continue;  // vacuous, or already visited
        const std::size_t r = it->second;
        if (!nearly_equal(h.W_G[q], h.W_G[r], kTol)) {
            report.violations.push_back({q, r, "W_G", h.W_G[q], h.W_G[r]});
        }
        if (!nearly_equal(h.W_I[q], h.W_I[r], kTol)) {
            report.violations.push_back({q, r, "W_I", h.W_I[q], h.W_I[r]});
        }
    }
    report.symmetric = report.violations.empty();
    return report;
}

bool check_weight_condition(const OrientedHypergraph& h, const OperatorParams& params) {
    params.validate();
    if (params.variant == OperatorVariant::SimplifiedJostMulas) return true;  // all exponents 0
    constexpr double kTol = 1e-12;
    for (const auto& a : h.hyperarcs) {
        // All pairs agree iff the min and max over both factor lists agree.
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (VertexId v : a.out) {
            const double x = weight_pow(h.w_I[v], params.alpha) * weight_pow(h.w_G[v], params.eta);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        for (VertexId v : a.in) {
            const double x =
                weight_pow(h.w_I[v], params.alpha) * weight_pow(h.w_G[v], params.epsilon);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        if (!nearly_equal(lo, hi, kTol)) return false;
    }
    return true;
}

}  // namespace hyperflow
