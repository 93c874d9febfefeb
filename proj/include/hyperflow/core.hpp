#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperflow/errors.hpp"

namespace hyperflow {

using VertexId = std::uint32_t;

/// One group connection: two disjoint, nonempty vertex subsets.
/// Both sides are kept sorted ascending; set semantics are enforced
/// when the hypergraph is built.
struct Hyperarc {
    std::vector<VertexId> out;
    std::vector<VertexId> in;

    bool operator==(const Hyperarc&) const = default;
};

/// Real-valued function on the vertex set (length N).
using VertexState = std::vector<double>;

/// Real-valued function on the hyperarc set (length |A_H|).
using HyperarcState = std::vector<double>;

/// Optional weight bundle for build_hypergraph. Empty vectors mean
/// "all ones", matching the unweighted experimental setting.
struct HypergraphWeights {
    std::vector<double> vertex_inner;    // w_I, per vertex
    std::vector<double> vertex_grad;     // w_G, per vertex
    std::vector<double> hyperarc_inner;  // W_I, per hyperarc
    std::vector<double> hyperarc_grad;   // W_G, per hyperarc
};

/// Immutable after construction; safe to share across threads for reading.
struct OrientedHypergraph {
    std::size_t n_vertices = 0;
    std::vector<Hyperarc> hyperarcs;

    std::vector<double> w_I;  // per-vertex inner-product weight
    std::vector<double> w_G;  // per-vertex gradient weight
    std::vector<double> W_I;  // per-hyperarc inner-product weight
    std::vector<double> W_G;  // per-hyperarc gradient weight

    /// Number of hyperarcs containing the vertex in out or in.
    std::vector<std::uint32_t> degree;

    /// Optional external labels (size n_vertices or empty). Retained for I/O;
    /// internally everything is index-based.
    std::vector<std::string> labels;

    std::size_t n_hyperarcs() const { return hyperarcs.size(); }

    std::string label_of(VertexId v) const {
        return labels.empty() ? std::to_string(v) : labels[v];
    }
};

/// Exponents of the weighted inner products (Def.-5-style spaces).
struct InnerProductParams {
    double alpha = 0.0;
    double beta = 0.0;
};

enum class OperatorVariant {
    General,
    SimplifiedJostMulas,
};

/// Exponent bundle for the first-order operators and the p-Laplacian.
/// The simplified variant fixes all exponents to zero and additionally
/// drops the side-cardinality normalizers (see operators.hpp).
struct OperatorParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double epsilon = 0.0;
    double eta = 0.0;
    OperatorVariant variant = OperatorVariant::General;

    static OperatorParams simplified() {
        OperatorParams p;
        p.variant = OperatorVariant::SimplifiedJostMulas;
        return p;
    }

    void validate() const;
};

/// w^e with the conventions w^0 = 1 and w^1 = w kept exact; other exponents
/// go through log space since they are user-supplied reals.
inline double weight_pow(double w, double e) {
    if (e == 0.0) return 1.0;
    if (e == 1.0) return w;
    return std::exp(e * std::log(w));
}

/// Build a validated hypergraph. Sides are sorted and deduplicated, degrees
/// computed, duplicate hyperarcs rejected. Defaults: all weights 1.
OrientedHypergraph build_hypergraph(std::size_t n_vertices, std::vector<Hyperarc> hyperarcs,
                                    HypergraphWeights weights = {},
                                    std::vector<std::string> labels = {});

/// sum_i w_I(v_i)^alpha f(v_i) g(v_i)
double inner_product_vertex(const OrientedHypergraph& h, const VertexState& f,
                            const VertexState& g, const InnerProductParams& p = {});

/// sum_q W_I(a_q)^beta F(a_q) G(a_q)
double inner_product_hyperarc(const OrientedHypergraph& h, const HyperarcState& F,
                              const HyperarcState& G, const InnerProductParams& p = {});

struct WeightSymmetryViolation {
    std::size_t hyperarc = 0;          // index of (out, in)
    std::size_t reversed_hyperarc = 0; // index of (in, out)
    std::string weight;                // "W_G" or "W_I"
    double value = 0.0;
    double reversed_value = 0.0;
};

struct WeightSymmetryReport {
    bool symmetric = true;
    std::vector<WeightSymmetryViolation> violations;
};

/// Checks W_G and W_I for symmetry wherever a reversed hyperarc is present.
/// Hyperarcs without a stored reversal satisfy the condition vacuously.
WeightSymmetryReport check_symmetric_hyperarc_weights(const OrientedHypergraph& h);

/// True iff w_I(v_k)^alpha w_G(v_k)^epsilon == w_I(v_j)^alpha w_G(v_j)^eta
/// (relative tolerance 1e-12) for every pair v_j in out, v_k in in of every
/// hyperarc. This is the condition under which constants have zero gradient.
bool check_weight_condition(const OrientedHypergraph& h, const OperatorParams& params);

}  // namespace hyperflow
