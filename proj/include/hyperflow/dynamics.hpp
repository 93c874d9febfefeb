#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "hyperflow/operators.hpp"

namespace hyperflow {

/// Configuration of the forward-Euler scale-space flows.
struct FlowConfig {
    double p = 2.0;
    std::optional<double> tau;              // empty = Auto (CFL estimate + backtracking)
    double tolerance = 1e-6;
    std::size_t max_iterations = 1'000'000;
    std::optional<double> regularization;   // default: 1e-8 for p < 2, 0 otherwise
    std::uint64_t seed = 0;                 // power-iteration start for Auto tau
    std::size_t record_every = 100;
};

/// Fixed values on a strict subset of the vertices.
struct BoundaryCondition {
    std::vector<std::pair<VertexId, double>> values;
};

struct TraceEntry {
    std::size_t iteration = 0;
    double relative_change = 0.0;
    double energy = 0.0;
    double weighted_mean = 0.0;
    double rayleigh_quotient = 0.0;
};

struct FlowResult {
    VertexState final_state;
    std::size_t iterations = 0;
    bool converged = false;
    double step_size = 0.0;  // tau actually used (after any backtracking)
    std::vector<TraceEntry> trace;
};

/// CFL-style step size. For p = 2 returns 0.9 * 2 / lambda_max with lambda_max
/// of -lap^2 estimated by 50 power iterations from a seed-fixed start; for
/// p != 2 the p = 2 estimate is scaled by (max_q |grad f0| + reg)^{2-p} and
/// clamped to [1e-12, 1e3]. The returned tau is halved until the first Euler
/// step does not increase E_p.
double estimate_step_size(const IncidenceSystem& sys, double p, const VertexState& f0,
                          double regularization = 0.0, std::uint64_t seed = 0);

/// Initial value (Neumann-type) problem: f_{n+1} = f_n + tau * lap_p f_n until
/// the relative change ||f_{n+1}-f_n||_2 / max(||f_n||_2, 1e-30) drops below
/// the tolerance or the iteration cap is hit (converged = false then).
FlowResult neumann_flow(const IncidenceSystem& sys, const VertexState& f0,
                        const FlowConfig& cfg);

/// Runs the same iteration but tracks and returns the rescaled quantity
/// g_n = (f_n - mean) / ||f_n - mean||_V; stops when ||g_{n+1} - g_n||_2 falls
/// below the tolerance. The limit direction is a second-eigenfunction
/// candidate; its weighted mean is 0 and its V-norm 1.
FlowResult renormalized_flow(const IncidenceSystem& sys, const VertexState& f0,
                             const FlowConfig& cfg);

/// Dirichlet problem: the explicit scheme restricted to interior vertices with
/// the boundary values re-pinned after every step. Converged means the
/// interior residual max |lap_p f| dropped below tolerance * max_j |F_j| and
/// the relative change below the tolerance.
FlowResult dirichlet_solve(const IncidenceSystem& sys, const VertexState& f0,
                           const BoundaryCondition& bc, const FlowConfig& cfg);

/// +1 where f > level, -1 where f < level, +1 at exactly the level.
std::vector<int> threshold(const VertexState& f, double level);

/// sum_i w_I^alpha f(v_i) / sum_i w_I^alpha
double weighted_mean(const OrientedHypergraph& h, const VertexState& f, double alpha);

}  // namespace hyperflow
