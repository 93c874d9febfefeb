#include "hyperflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hyperflow {

namespace {

constexpr double kNormFloor = 1e-30;

double l2_norm(const VertexState& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double l2_diff(const VertexState& a, const VertexState& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double v_norm(const OrientedHypergraph& h, double alpha, const VertexState& x) {
    return std::sqrt(inner_product_vertex(h, x, x, {alpha, 0.0}));
}

struct StepData {
    HyperarcState grad;
    VertexState delta;  // lap_p f
    double energy = 0.0;
};

StepData eval_step(const IncidenceSystem& sys, const VertexState& f, double p, double reg) {
    StepData s;
    s.grad = gradient(sys, f);
    s.energy = energy_from_gradient(sys, s.grad, p);
    HyperarcState t = s.grad;
    for (double& x : t) x = phi_p(x, p, reg);
    s.delta = divergence(sys, t);
    return s;
}

std::optional<VertexState> try_renormalize(const OrientedHypergraph& h, double alpha,
                                           const VertexState& f) {
    const double mean = weighted_mean(h, f, alpha);
    VertexState g = f;
    for (double& x : g) x -= mean;
    const double nrm = v_norm(h, alpha, g);
    if (!(nrm > 1e-300)) return std::nullopt;
    for (double& x : g) x /= nrm;
    return g;
}

double rayleigh_or_zero(const IncidenceSystem& sys, const VertexState& f, double p,
                        double energy_of_f) {
    const OrientedHypergraph& h = sys.hypergraph();
    double denom = 0.0;
    const double alpha = sys.params().alpha;
    for (std::size_t i = 0; i < f.size(); ++i) {
        denom += weight_pow(h.w_I[i], alpha) * std::pow(std::abs(f[i]), p);
    }
    return denom > 0.0 ? p * energy_of_f / denom : 0.0;
}

double estimate_step_size_impl(const IncidenceSystem& sys, double p, const VertexState& f0,
                               double reg, std::uint64_t seed,
                               const std::vector<char>* boundary_mask) {
    const OrientedHypergraph& h = sys.hypergraph();
    const double alpha = sys.params().alpha;
    const std::size_t n = sys.n_vertices();

    // Largest eigenvalue of -lap^2 in the weighted vertex space, by power
    // iteration from a seed-fixed random start.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    VertexState v(n);
    for (double& x : v) x = unif(rng);
    double nv = v_norm(h, alpha, v);
    if (nv > 0.0) {
        for (double& x : v) x /= nv;
    }
    double lambda = 0.0;
    for (int it = 0; it < 50; ++it) {
        VertexState w = p_laplacian(sys, v, 2.0, 0.0);
        for (double& x : w) x = -x;
        lambda = inner_product_vertex(h, v, w, {alpha, 0.0});
        const double nw = v_norm(h, alpha, w);
        if (!(nw > 1e-300)) {
            lambda = 0.0;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    }

    double tau = lambda > 1e-300 ? 0.9 * 2.0 / lambda : 1e3;
    if (p != 2.0) {
        const HyperarcState g0 = gradient(sys, f0);
        double gmax = 0.0;
        for (double x : g0) gmax = std::max(gmax, std::abs(x));
        tau *= std::pow(gmax + reg, 2.0 - p);
    }
    tau = std::clamp(tau, 1e-12, 1e3);

    // Halve until the first Euler step does not increase the energy.
    StepData s0 = eval_step(sys, f0, p, reg);
    if (boundary_mask) {
        for (std::size_t i = 0; i < n; ++i) {
            if ((*boundary_mask)[i]) s0.delta[i] = 0.0;
        }
    }
    for (int k = 0; k < 80; ++k) {
        VertexState f1 = f0;
        for (std::size_t i = 0; i < n; ++i) f1[i] += tau * s0.delta[i];
        const double e1 = energy(sys, f1, p);
        if (std::isfinite(e1) && e1 <= s0.energy * (1.0 + 1e-12) + 1e-300) break;
        tau *= 0.5;
    }
    return tau;
}

enum class FlowMode { Plain, Renormalized, Dirichlet };

FlowResult run_flow(const IncidenceSystem& sys, const VertexState& f0, const FlowConfig& cfg,
                    const BoundaryCondition* bc, FlowMode mode) {
    const OrientedHypergraph& h = sys.hypergraph();
    const double alpha = sys.params().alpha;
    const std::size_t n = sys.n_vertices();

    if (f0.size() != n) {
        throw LengthMismatchError("initial state: expected length " + std::to_string(n) +
                                  ", got " + std::to_string(f0.size()));
    }
    if (!std::isfinite(cfg.p) || cfg.p < 1.0) {
        throw POutOfRangeError("flow requires p >= 1, got " + std::to_string(cfg.p));
    }
    if (!(cfg.tolerance > 0.0)) throw Error("tolerance must be positive");
    const double reg = cfg.regularization.value_or(default_regularization(cfg.p));
    if (reg < 0.0) throw Error("regularization must be nonnegative");

    VertexState f = f0;

    std::vector<char> is_boundary(n, 0);
    double bc_scale = 0.0;
    if (mode == FlowMode::Dirichlet) {
        if (bc == nullptr || bc->values.empty()) {
            throw InvalidBoundaryError("boundary condition must be nonempty");
        }
        for (const auto& [v, value] : bc->values) {
            if (v >= n) {
                throw VertexOutOfRangeError("boundary vertex " + std::to_string(v) +
                                            " >= " + std::to_string(n));
            }
            if (is_boundary[v]) {
                throw InvalidBoundaryError("boundary vertex " + std::to_string(v) +
                                           " listed twice");
            }
            is_boundary[v] = 1;
            f[v] = value;
            bc_scale = std::max(bc_scale, std::abs(value));
        }
        if (bc->values.size() >= n) {
            throw EmptyInteriorError("boundary covers every vertex");
        }
        bc_scale = std::max(bc_scale, kNormFloor);
    }

    if (mode == FlowMode::Renormalized) {
        VertexState centered = f;
        const double mean = weighted_mean(h, f, alpha);
        for (double& x : centered) x -= mean;
        if (v_norm(h, alpha, centered) <= 1e-14 * std::max(1.0, v_norm(h, alpha, f))) {
            throw DegenerateInitialError("initial state is (numerically) constant");
        }
        // Work on the renormalized representative mean + g throughout. The
        // direction dynamics are unchanged (identically for p = 2, up to a
        // monotone time reparametrization otherwise), and the deviation never
        // decays into the cancellation regime of the mean.
        const auto g0 = try_renormalize(h, alpha, f);
        for (std::size_t i = 0; i < n; ++i) f[i] = mean + (*g0)[i];
    }

    const bool auto_tau = !cfg.tau.has_value();
    double tau = auto_tau ? estimate_step_size_impl(
                                sys, cfg.p, f, reg, cfg.seed,
                                mode == FlowMode::Dirichlet ? &is_boundary : nullptr)
                          : *cfg.tau;
    if (auto_tau && mode == FlowMode::Renormalized) {
        // With tau near 2/lambda_max the Euler multiplier of the top mode has
        // the largest magnitude and the rescaled iterate locks onto it. Half
        // the step keeps all multipliers positive, so the smallest nonzero
        // mode dominates g instead.
        tau *= 0.5;
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) throw Error("tau must be positive and finite");

    FlowResult res;

    VertexState f_prev, delta_prev;
    double energy_prev = 0.0;
    bool have_prev = false;
    int halvings = 0;
    constexpr int kMaxHalvings = 200;

    std::size_t iter = 0;
    std::size_t last_recorded = std::numeric_limits<std::size_t>::max();

    auto record = [&](double rel, double e_report, const VertexState& state_report) {
        if (last_recorded == iter) return;
        TraceEntry t;
        t.iteration = iter;
        t.relative_change = rel;
        t.energy = e_report;
        t.weighted_mean = weighted_mean(h, state_report, alpha);
        t.rayleigh_quotient = rayleigh_or_zero(sys, state_report, cfg.p, e_report);
        res.trace.push_back(t);
        last_recorded = iter;
    };

    for (;;) {
        StepData s = eval_step(sys, f, cfg.p, reg);
        if (mode == FlowMode::Dirichlet) {
            for (std::size_t i = 0; i < n; ++i) {
                if (is_boundary[i]) s.delta[i] = 0.0;
            }
        }

        // Lazy backtracking: an accepted step that increased the energy is
        // rolled back and retried with half the step size.
        if (auto_tau && have_prev && halvings < kMaxHalvings &&
            (!std::isfinite(s.energy) || s.energy > energy_prev * (1.0 + 1e-12) + 1e-300)) {
            tau *= 0.5;
            ++halvings;
            f = f_prev;
            for (std::size_t i = 0; i < n; ++i) f[i] += tau * delta_prev[i];
            continue;
        }

        VertexState f_next = f;
        for (std::size_t i = 0; i < n; ++i) f_next[i] += tau * s.delta[i];

        const double rel = tau * l2_norm(s.delta) / std::max(l2_norm(f), kNormFloor);

        bool stop = false;
        double reported_change = rel;
        std::optional<VertexState> g_now, g_next;
        if (mode == FlowMode::Plain) {
            stop = rel < cfg.tolerance;
        } else if (mode == FlowMode::Renormalized) {
            g_now = try_renormalize(h, alpha, f);
            g_next = try_renormalize(h, alpha, f_next);
            if (!g_now || !g_next) {
                // f reached the constant state (finite-time extinction); the
                // last well-defined direction is in f_prev's renormalization.
                res.converged = false;
                res.iterations = iter;
                auto g_last = have_prev ? try_renormalize(h, alpha, f_prev) : std::nullopt;
                res.final_state = g_last ? *g_last : f;
                record(rel, s.energy, res.final_state);
                res.step_size = tau;
                return res;
            }
            reported_change = l2_diff(*g_next, *g_now);
            stop = reported_change < cfg.tolerance;
        } else {
            double residual = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!is_boundary[i]) residual = std::max(residual, std::abs(s.delta[i]));
            }
            stop = residual <= cfg.tolerance * bc_scale && rel < cfg.tolerance;
        }

        const bool cap = iter >= cfg.max_iterations;
        if (stop || cap || iter % cfg.record_every == 0) {
            if (mode == FlowMode::Renormalized) {
                const VertexState& grec = stop ? *g_next : *g_now;
                record(reported_change, energy(sys, grec, cfg.p), grec);
            } else {
                record(reported_change, s.energy, f);
            }
        }
        if (stop || cap) {
            res.converged = stop;
            res.iterations = iter;
            if (mode == FlowMode::Renormalized) {
                res.final_state = stop ? std::move(*g_next) : std::move(*g_now);
            } else {
                res.final_state = std::move(f);
            }
            res.step_size = tau;
            return res;
        }

        f_prev = std::move(f);
        delta_prev = std::move(s.delta);
        energy_prev = s.energy;
        have_prev = true;
        if (mode == FlowMode::Renormalized) {
            const double mean_next = weighted_mean(h, f_next, alpha);
            f.resize(n);
            for (std::size_t i = 0; i < n; ++i) f[i] = mean_next + (*g_next)[i];
        } else {
            f = std::move(f_next);
        }
        ++iter;
    }
}

}  // namespace

double estimate_step_size(const IncidenceSystem& sys, double p, const VertexState& f0,
                          double regularization, std::uint64_t seed) {
    if (f0.size() != sys.n_vertices()) {
        throw LengthMismatchError("initial state: expected length " +
                                  std::to_string(sys.n_vertices()));
    }
    return estimate_step_size_impl(sys, p, f0, regularization, seed, nullptr);
}

FlowResult neumann_flow(const IncidenceSystem& sys, const VertexState& f0,
                        const FlowConfig& cfg) {
    return run_flow(sys, f0, cfg, nullptr, FlowMode::Plain);
}

FlowResult renormalized_flow(const IncidenceSystem& sys, const VertexState& f0,
                             const FlowConfig& cfg) {
    return run_flow(sys, f0, cfg, nullptr, FlowMode::Renormalized);
}

FlowResult dirichlet_solve(const IncidenceSystem& sys, const VertexState& f0,
                           const BoundaryCondition& bc, const FlowConfig& cfg) {
    return run_flow(sys, f0, cfg, &bc, FlowMode::Dirichlet);
}

std::vector<int> threshold(const VertexState& f, double level) {
    std::vector<int> labels(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        labels[i] = f[i] < level ? -1 : 1;  // ties get +1
    }
    return labels;
}

double weighted_mean(const OrientedHypergraph& h, const VertexState& f, double alpha) {
    if (f.size() != h.n_vertices) {
        throw LengthMismatchError("vertex state must have length " +
                                  std::to_string(h.n_vertices));
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double w = weight_pow(h.w_I[i], alpha);
        num += w * f[i];
        den += w;
    }
    return num / den;
}

}  // namespace hyperflow
