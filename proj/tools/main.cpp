// Command-line surface: edge-list ingestion, operator application, diffusion
// flows, clustering, and the dense eigenvalue oracle.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "hyperflow/ingest.hpp"
#include "hyperflow/spectral.hpp"

namespace {

using namespace hyperflow;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNotConverged = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

std::optional<double> parse_tau(const std::string& s) {
    if (s == "auto") return std::nullopt;
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !(v > 0.0)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("--tau expects a positive number or 'auto', got '" + s + "'");
    }
}

OperatorParams parse_operator_params(const std::string& params_csv, const std::string& variant) {
    OperatorParams p;
    if (variant == "simplified") {
        if (!params_csv.empty()) {
            throw UsageError("--params cannot be combined with --variant simplified");
        }
        return OperatorParams::simplified();
    }
    if (variant != "general") {
        throw UsageError("--variant must be 'general' or 'simplified', got '" + variant + "'");
    }
    if (params_csv.empty()) return p;
    std::vector<double> values;
    std::stringstream ss(params_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            values.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("--params expects five comma-separated numbers");
        }
    }
    if (values.size() != 5) {
        throw UsageError("--params expects exactly five values: alpha,beta,gamma,epsilon,eta");
    }
    p.alpha = values[0];
    p.beta = values[1];
    p.gamma = values[2];
    p.epsilon = values[3];
    p.eta = values[4];
    return p;
}

BoundaryCondition parse_boundary(const OrientedHypergraph& h, const std::string& spec) {
    BoundaryCondition bc;
    std::unordered_map<std::string, VertexId> ids;
    for (std::size_t i = 0; i < h.n_vertices; ++i) {
        ids.emplace(h.label_of(static_cast<VertexId>(i)), static_cast<VertexId>(i));
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--boundary entries must look like LABEL=VALUE");
        }
        const std::string label = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        auto it = ids.find(label);
        if (it == ids.end()) throw Error("boundary label '" + label + "' not in the network");
        try {
            std::size_t pos = 0;
            const double v = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument(value);
            bc.values.emplace_back(it->second, v);
        } catch (const std::exception&) {
            throw UsageError("--boundary value '" + value + "' is not a number");
        }
    }
    if (bc.values.empty()) throw UsageError("--boundary is empty");
    return bc;
}

// "zero", "random:LO,HI" or "file:PATH". Random states are centred to zero
// mean and normalised, mirroring the experimental initialization.
VertexState make_initial_state(const OrientedHypergraph& h, const std::string& init,
                               std::uint64_t seed) {
    if (init == "zero") return VertexState(h.n_vertices, 0.0);
    if (init.rfind("file:", 0) == 0) {
        auto in = open_input(init.substr(5));
        return load_vertex_state(h, in);
    }
    if (init.rfind("random:", 0) == 0) {
        const std::string range = init.substr(7);
        const auto comma = range.find(',');
        if (comma == std::string::npos) throw UsageError("--init random expects 'random:LO,HI'");
        double lo = 0.0, hi = 0.0;
        try {
            lo = std::stod(range.substr(0, comma));
            hi = std::stod(range.substr(comma + 1));
        } catch (const std::exception&) {
            throw UsageError("--init random expects numeric bounds");
        }
        if (!(lo < hi)) throw UsageError("--init random requires LO < HI");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(lo, hi);
        VertexState f(h.n_vertices);
        for (double& x : f) x = unif(rng);
        const double mean = weighted_mean(h, f, 0.0);
        double norm = 0.0;
        for (double& x : f) {
            x -= mean;
            norm += x * x;
        }
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (double& x : f) x /= norm;
        }
        return f;
    }
    throw UsageError("--init must be zero, random:LO,HI or file:PATH, got '" + init + "'");
}

int run_build(const std::string& input, std::optional<std::size_t> max_lines, bool reverse,
              const std::string& mode, const std::string& leader, std::size_t max_vertices,
              const std::string& out_path) {
    if (mode != "star" && mode != "pairwise") {
        throw UsageError("--mode must be 'star' or 'pairwise'");
    }
    auto in = open_input(input);
    ParseOptions opts;
    opts.max_lines = max_lines;
    opts.reverse_pairs = reverse;
    ArcList arcs = parse_edge_list(in, opts);
    std::fprintf(stderr, "parsed %zu arcs (%zu labels, %zu self-loops dropped, %zu duplicates dropped)\n",
                 arcs.arcs.size(), arcs.labels.size(), arcs.self_loops_removed,
                 arcs.duplicates_removed);
    if (!leader.empty() || max_vertices > 0) {
        if (max_vertices == 0) throw UsageError("--leader requires --max-vertices");
        std::optional<std::string> leader_opt;
        if (!leader.empty() && leader != "auto") leader_opt = leader;
        arcs = extract_subnetwork(arcs, leader_opt, max_vertices);
        std::fprintf(stderr, "sub-network: %zu vertices, %zu arcs\n", arcs.labels.size(),
                     arcs.arcs.size());
    }
    OrientedHypergraph h = mode == "star" ? build_follower_star(arcs) : build_pairwise(arcs);
    std::fprintf(stderr, "hypergraph: %zu vertices, %zu hyperarcs\n", h.n_vertices,
                 h.n_hyperarcs());
    save_hypergraph(h, out_path);
    return kExitOk;
}

int run_apply(const std::string& hg_path, const std::string& op, double p,
              const std::string& state_path, const std::string& params_csv,
              const std::string& variant, const std::string& out_path) {
    OrientedHypergraph h = load_hypergraph(hg_path);
    IncidenceSystem sys = assemble(h, parse_operator_params(params_csv, variant));
    auto out = open_output(out_path);
    if (op == "grad") {
        auto in = open_input(state_path);
        save_hyperarc_state(gradient(sys, load_vertex_state(h, in)), out);
    } else if (op == "adjoint" || op == "div") {
        auto in = open_input(state_path);
        const HyperarcState F = load_hyperarc_state(in);
        save_vertex_state(h, op == "div" ? divergence(sys, F) : adjoint(sys, F), out);
    } else if (op == "plap") {
        auto in = open_input(state_path);
        save_vertex_state(h, p_laplacian(sys, load_vertex_state(h, in), p), out);
    } else {
        throw UsageError("--op must be grad, adjoint, div or plap");
    }
    return kExitOk;
}

int write_flow_outputs(const OrientedHypergraph& h, const FlowResult& result,
                       const std::string& out_path, const std::string& trace_path) {
    auto out = open_output(out_path);
    save_vertex_state(h, result.final_state, out);
    if (!trace_path.empty()) {
        auto trace = open_output(trace_path);
        save_trace(result.trace, trace);
    }
    std::fprintf(stderr, "%s after %zu iterations (tau %.6g)\n",
                 result.converged ? "converged" : "NOT converged", result.iterations,
                 result.step_size);
    return result.converged ? kExitOk : kExitNotConverged;
}

int run_diffuse(const std::string& hg_path, double p, const std::string& tau,
                double tol, std::size_t max_iter, const std::string& init, std::uint64_t seed,
                bool renormalize, const std::string& out_path, const std::string& trace_path) {
    OrientedHypergraph h = load_hypergraph(hg_path);
    IncidenceSystem sys = assemble(h, {});
    FlowConfig cfg;
    cfg.p = p;
    cfg.tau = parse_tau(tau);
    cfg.tolerance = tol;
    cfg.max_iterations = max_iter;
    cfg.seed = seed;
    const VertexState f0 = make_initial_state(h, init, seed);
    const FlowResult result =
        renormalize ? renormalized_flow(sys, f0, cfg) : neumann_flow(sys, f0, cfg);
    return write_flow_outputs(h, result, out_path, trace_path);
}

int run_dirichlet(const std::string& hg_path, double p, const std::string& boundary,
                  const std::string& tau, double tol, std::size_t max_iter,
                  const std::string& out_path, const std::string& trace_path) {
    OrientedHypergraph h = load_hypergraph(hg_path);
    IncidenceSystem sys = assemble(h, {});
    FlowConfig cfg;
    cfg.p = p;
    cfg.tau = parse_tau(tau);
    cfg.tolerance = tol;
    cfg.max_iterations = max_iter;
    const BoundaryCondition bc = parse_boundary(h, boundary);
    const FlowResult result = dirichlet_solve(sys, VertexState(h.n_vertices, 0.0), bc, cfg);
    return write_flow_outputs(h, result, out_path, trace_path);
}

int run_cluster(const std::string& state_path, double level, const std::string& out_path) {
    auto in = open_input(state_path);
    const auto rows = load_state_table(in);
    VertexState values(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) values[i] = rows[i].second;
    const auto labels = threshold(values, level);
    auto out = open_output(out_path);
    out << "vertex,label\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << rows[i].first << ',' << labels[i] << '\n';
    }
    return kExitOk;
}

int run_eigen(const std::string& hg_path, std::size_t k, const std::string& out_path) {
    OrientedHypergraph h = load_hypergraph(hg_path);
    IncidenceSystem sys = assemble(h, {});
    const DenseOperator op = dense_laplacian(sys);
    const EigenDecomposition eig = eigendecomposition(op);
    if (k == 0 || k > h.n_vertices) throw UsageError("--k must be in [1, N]");

    auto out = open_output(out_path);
    out << "vertex";
    for (std::size_t j = 0; j < k; ++j) out << ",ev" << j;
    out << "\n#eigenvalues";
    char buf[32];
    for (std::size_t j = 0; j < k; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", eig.eigenvalues[j]);
        out << ',' << buf;
    }
    out << '\n';
    for (std::size_t i = 0; i < h.n_vertices; ++i) {
        out << h.label_of(static_cast<VertexId>(i));
        for (std::size_t j = 0; j < k; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", eig.eigenvectors[i * h.n_vertices + j]);
            out << ',' << buf;
        }
        out << '\n';
    }
    std::printf("estimated nullspace dimension: %zu\n", estimate_nullspace_dimension(eig));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differential operators, diffusion scale spaces, and spectral clustering "
                 "on oriented hypergraphs"};
    app.require_subcommand(1);

    // build
    auto* build = app.add_subcommand("build", "Parse an edge list and build a hypergraph");
    std::string b_input, b_mode = "star", b_leader, b_out;
    std::size_t b_max_lines = 0, b_max_vertices = 0;
    bool b_reverse = false;
    build->add_option("--input", b_input, "Edge-list file ('A B' = A follows B)")->required();
    build->add_option("--max-lines", b_max_lines, "Read at most this many input lines");
    build->add_flag("--reverse-pairs", b_reverse, "Read 'A B' as 'B follows A'");
    build->add_option("--mode", b_mode, "star | pairwise")->required();
    build->add_option("--leader", b_leader,
                      "Extract the sub-network around this label ('auto' = most followers)");
    build->add_option("--max-vertices", b_max_vertices, "Sub-network size cap");
    build->add_option("--out", b_out, "Output hypergraph file")->required();

    // apply
    auto* apply = app.add_subcommand("apply", "Apply an operator to a state file");
    std::string a_hg, a_op, a_state, a_params, a_variant = "general", a_out;
    double a_p = 2.0;
    apply->add_option("--hg", a_hg, "Hypergraph file")->required();
    apply->add_option("--op", a_op, "grad | adjoint | div | plap")->required();
    apply->add_option("--p", a_p, "Exponent p for plap");
    apply->add_option("--state", a_state,
                      "Input state CSV (vertex state for grad/plap, hyperarc state otherwise)")
        ->required();
    apply->add_option("--params", a_params, "alpha,beta,gamma,epsilon,eta (default all 0)");
    apply->add_option("--variant", a_variant, "general | simplified");
    apply->add_option("--out", a_out, "Output state CSV")->required();

    // diffuse
    auto* diffuse = app.add_subcommand("diffuse", "Run the initial value (Neumann-type) flow");
    std::string d_hg, d_tau = "auto", d_init = "random:-1,1", d_out, d_trace;
    double d_p = 2.0, d_tol = 1e-6;
    std::size_t d_max_iter = 1'000'000;
    std::uint64_t d_seed = 0;
    bool d_renorm = false;
    diffuse->add_option("--hg", d_hg, "Hypergraph file")->required();
    diffuse->add_option("--p", d_p, "Exponent p >= 1")->required();
    diffuse->add_option("--tau", d_tau, "Step size or 'auto'");
    diffuse->add_option("--tol", d_tol, "Relative-change stopping tolerance");
    diffuse->add_option("--max-iter", d_max_iter, "Iteration cap");
    diffuse->add_option("--init", d_init, "zero | random:LO,HI | file:PATH");
    diffuse->add_option("--seed", d_seed, "Seed for random init and step-size estimation");
    diffuse->add_flag("--renormalize", d_renorm,
                      "Track the rescaled quantity g = (f - mean)/||f - mean||");
    diffuse->add_option("--out", d_out, "Final state CSV")->required();
    diffuse->add_option("--trace", d_trace, "Trace CSV");

    // dirichlet
    auto* dirichlet = app.add_subcommand("dirichlet", "Solve the Dirichlet problem by flow");
    std::string x_hg, x_boundary, x_tau = "auto", x_out, x_trace;
    double x_p = 2.0, x_tol = 1e-6;
    std::size_t x_max_iter = 1'000'000;
    dirichlet->add_option("--hg", x_hg, "Hypergraph file")->required();
    dirichlet->add_option("--p", x_p, "Exponent p >= 1")->required();
    dirichlet->add_option("--boundary", x_boundary, "Fixed values, e.g. \"L1=-1,L2=1\"")
        ->required();
    dirichlet->add_option("--tau", x_tau, "Step size or 'auto'");
    dirichlet->add_option("--tol", x_tol, "Stopping tolerance");
    dirichlet->add_option("--max-iter", x_max_iter, "Iteration cap");
    dirichlet->add_option("--out", x_out, "Final state CSV")->required();
    dirichlet->add_option("--trace", x_trace, "Trace CSV");

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Threshold a state into +1/-1 labels");
    std::string c_state, c_out;
    double c_level = 0.0;
    cluster->add_option("--state", c_state, "State CSV")->required();
    cluster->add_option("--level", c_level, "Threshold level (ties map to +1)");
    cluster->add_option("--out", c_out, "Output label CSV")->required();

    // eigen
    auto* eigen = app.add_subcommand("eigen", "Dense eigendecomposition (small instances)");
    std::string e_hg, e_out;
    std::size_t e_k = 2;
    eigen->add_option("--hg", e_hg, "Hypergraph file")->required();
    eigen->add_option("--k", e_k, "Number of smallest eigenpairs to write");
    eigen->add_option("--out", e_out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(build)) {
            std::optional<std::size_t> max_lines;
            if (b_max_lines > 0) max_lines = b_max_lines;
            return run_build(b_input, max_lines, b_reverse, b_mode, b_leader, b_max_vertices,
                             b_out);
        }
        if (app.got_subcommand(apply)) {
            return run_apply(a_hg, a_op, a_p, a_state, a_params, a_variant, a_out);
        }
        if (app.got_subcommand(diffuse)) {
            return run_diffuse(d_hg, d_p, d_tau, d_tol, d_max_iter, d_init, d_seed, d_renorm,
                               d_out, d_trace);
        }
        if (app.got_subcommand(dirichlet)) {
            return run_dirichlet(x_hg, x_p, x_boundary, x_tau, x_tol, x_max_iter, x_out, x_trace);
        }
        if (app.got_subcommand(cluster)) {
            return run_cluster(c_state, c_level, c_out);
        }
        if (app.got_subcommand(eigen)) {
            return run_eigen(e_hg, e_k, e_out);
        }
        std::cerr << "no subcommand given\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
