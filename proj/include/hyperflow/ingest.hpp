#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>

#include "hyperflow/dynamics.hpp"

namespace hyperflow {

/// Cleaned follower/followed pairs with an interned label table.
struct ArcList {
    std::vector<std::string> labels;                    // id -> label, first-seen order
    std::unordered_map<std::string, VertexId> ids;      // label -> id
    std::vector<std::pair<VertexId, VertexId>> arcs;    // (follower, followed)
    std::size_t self_loops_removed = 0;
    std::size_t duplicates_removed = 0;
    std::size_t lines_read = 0;
};

struct ParseOptions {
    std::optional<std::size_t> max_lines;  // truncate raw input after this many lines
    bool reverse_pairs = false;            // read "A B" as "B follows A" instead
};

/// Each nonempty, non-'#' line must hold two whitespace-separated tokens
/// "A B", read as "A follows B". Self-loops and duplicate pairs are dropped
/// (counts retained). Throws MalformedLineError with the line number, or
/// EmptyInputError when no data lines were seen at all.
ArcList parse_edge_list(std::istream& input, const ParseOptions& opts = {});

/// One hyperarc ({u}, {followers of u}) per user u with at least one
/// follower; unit weights. Hyperarcs ordered by followed-user id.
OrientedHypergraph build_follower_star(const ArcList& arcs);

/// One hyperarc ({u}, {v}) per arc "u follows v"; the pairwise-graph baseline.
OrientedHypergraph build_pairwise(const ArcList& arcs);

/// BFS over the undirected adjacency from the leader (or, when absent, the
/// label with the largest follower count; ties go to the smaller id) until
/// max_vertices are collected. Returns the induced arc set, relabelled in
/// discovery order.
ArcList extract_subnetwork(const ArcList& arcs, const std::optional<std::string>& leader,
                           std::size_t max_vertices);

// -- persistence ---------------------------------------------------------------
// Versioned structured-text schema for hypergraphs; comma-separated tables with
// header rows for states and traces. Numeric values use 17 significant digits,
// so save/load round-trips are bit-exact.

void save_hypergraph(const OrientedHypergraph& h, std::ostream& out);
void save_hypergraph(const OrientedHypergraph& h, const std::string& path);
OrientedHypergraph load_hypergraph(std::istream& in);
OrientedHypergraph load_hypergraph(const std::string& path);

void save_vertex_state(const OrientedHypergraph& h, const VertexState& f, std::ostream& out);
VertexState load_vertex_state(const OrientedHypergraph& h, std::istream& in);

void save_hyperarc_state(const HyperarcState& F, std::ostream& out);
HyperarcState load_hyperarc_state(std::istream& in);

void save_trace(const std::vector<TraceEntry>& trace, std::ostream& out);

void save_cluster_labels(const OrientedHypergraph& h, const std::vector<int>& labels,
                         std::ostream& out);

/// Free-standing state table (label, value) without a hypergraph, as used by
/// the cluster subcommand.
std::vector<std::pair<std::string, double>> load_state_table(std::istream& in);

}  // namespace hyperflow
