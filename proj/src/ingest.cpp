#include "hyperflow/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_set>

namespace hyperflow {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

// Splits a line into whitespace-separated tokens, appending to `tokens`.
void tokenize(std::string_view line, std::vector<std::string_view>& tokens) {
    tokens.clear();
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j])) ++j;
        tokens.push_back(line.substr(i, j - i));
        i = j;
    }
}

VertexId intern_label(ArcList& list, std::string_view label) {
    auto it = list.ids.find(std::string(label));
    if (it != list.ids.end()) return it->second;
    const VertexId id = static_cast<VertexId>(list.labels.size());
    list.labels.emplace_back(label);
    list.ids.emplace(list.labels.back(), id);
    return id;
}

std::uint64_t pair_key(VertexId a, VertexId b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

void write_double(std::ostream& out, double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.write(buf, len);
}

double parse_double(std::string_view tok, std::size_t line_no) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw FileParseError(line_no, "expected a number, got '" + std::string(tok) + "'");
    }
    return v;
}

std::size_t parse_count(std::string_view tok, std::size_t line_no) {
    std::size_t v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw FileParseError(line_no, "expected a count, got '" + std::string(tok) + "'");
    }
    return v;
}

void check_label_writable(const std::string& label) {
    if (label.empty()) throw IoError("cannot serialize an empty vertex label");
    for (char c : label) {
        if (is_space(c) || c == '\n' || c == ',') {
            throw IoError("label '" + label + "' contains whitespace or a comma");
        }
    }
}

}  // namespace

ArcList parse_edge_list(std::istream& input, const ParseOptions& opts) {
    ArcList list;
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::string_view> tokens;
    std::string line;
    std::size_t line_no = 0;
    std::size_t data_lines = 0;

    while ((!opts.max_lines || list.lines_read < *opts.max_lines) && std::getline(input, line)) {
        ++line_no;
        ++list.lines_read;
        tokenize(line, tokens);
        if (tokens.empty() || tokens.front().front() == '#') continue;
        if (tokens.size() != 2) {
            throw MalformedLineError(line_no, "expected two tokens, got " +
                                                  std::to_string(tokens.size()));
        }
        ++data_lines;
        std::string_view first = tokens[0];
        std::string_view second = tokens[1];
        if (opts.reverse_pairs) std::swap(first, second);

        const VertexId follower = intern_label(list, first);
        const VertexId followed = intern_label(list, second);
        if (follower == followed) {
            ++list.self_loops_removed;
            continue;
        }
        if (!seen.insert(pair_key(follower, followed)).second) {
            ++list.duplicates_removed;
            continue;
        }
        list.arcs.emplace_back(follower, followed);
    }
    if (data_lines == 0) throw EmptyInputError("no edge-list lines found");
    return list;
}

OrientedHypergraph build_follower_star(const ArcList& list) {
    if (list.arcs.empty()) throw EmptyInputError("arc list is empty");
    // (followed, follower) pairs sorted so each star comes out in one block,
    // ordered by followed-user id.
    std::vector<std::pair<VertexId, VertexId>> grouped;
    grouped.reserve(list.arcs.size());
    for (const auto& [follower, followed] : list.arcs) grouped.emplace_back(followed, follower);
    std::sort(grouped.begin(), grouped.end());

    std::vector<Hyperarc> hyperarcs;
    std::size_t i = 0;
    while (i < grouped.size()) {
        std::size_t j = i;
        Hyperarc a;
        a.out.push_back(grouped[i].first);
        while (j < grouped.size() && grouped[j].first == grouped[i].first) {
            a.in.push_back(grouped[j].second);
            ++j;
        }
        hyperarcs.push_back(std::move(a));
        i = j;
    }
    return build_hypergraph(list.labels.size(), std::move(hyperarcs), {}, list.labels);
}

OrientedHypergraph build_pairwise(const ArcList& list) {
    if (list.arcs.empty()) throw EmptyInputError("arc list is empty");
    std::vector<Hyperarc> hyperarcs;
    hyperarcs.reserve(list.arcs.size());
    for (const auto& [follower, followed] : list.arcs) {
        hyperarcs.push_back(Hyperarc{{follower}, {followed}});
    }
    return build_hypergraph(list.labels.size(), std::move(hyperarcs), {}, list.labels);
}

ArcList extract_subnetwork(const ArcList& list, const std::optional<std::string>& leader,
                           std::size_t max_vertices) {
    if (list.arcs.empty()) throw EmptyInputError("arc list is empty");
    if (max_vertices == 0) throw Error("max_vertices must be positive");

    VertexId start = 0;
    if (leader) {
        auto it = list.ids.find(*leader);
        if (it == list.ids.end()) throw UnknownLeaderError("unknown leader '" + *leader + "'");
        start = it->second;
    } else {
        std::vector<std::uint32_t> follower_count(list.labels.size(), 0);
        for (const auto& [follower, followed] : list.arcs) ++follower_count[followed];
        start = static_cast<VertexId>(
            std::max_element(follower_count.begin(), follower_count.end()) -
            follower_count.begin());
    }

    std::vector<std::vector<VertexId>> adj(list.labels.size());
    for (const auto& [a, b] : list.arcs) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }

    std::vector<VertexId> order;
    std::vector<char> visited(list.labels.size(), 0);
    std::deque<VertexId> queue;
    visited[start] = 1;
    order.push_back(start);
    queue.push_back(start);
    while (!queue.empty() && order.size() < max_vertices) {
        const VertexId u = queue.front();
        queue.pop_front();
        for (VertexId v : adj[u]) {
            if (visited[v]) continue;
            visited[v] = 1;
            order.push_back(v);
            queue.push_back(v);
            if (order.size() >= max_vertices) break;
        }
    }

    std::vector<VertexId> remap(list.labels.size(), 0);
    std::vector<char> keep(list.labels.size(), 0);
    ArcList out;
    for (VertexId old_id : order) {
        keep[old_id] = 1;
        remap[old_id] = static_cast<VertexId>(out.labels.size());
        out.labels.push_back(list.labels[old_id]);
        out.ids.emplace(list.labels[old_id], remap[old_id]);
    }
    for (const auto& [a, b] : list.arcs) {
        if (keep[a] && keep[b]) out.arcs.emplace_back(remap[a], remap[b]);
    }
    return out;
}

// -- persistence ----------------------------------------------------------------

namespace {
constexpr const char* kSchemaTag = "hypergraph-v1";
}

void save_hypergraph(const OrientedHypergraph& h, std::ostream& out) {
    out << kSchemaTag << '\n';
    out << "vertices " << h.n_vertices << '\n';
    for (std::size_t i = 0; i < h.n_vertices; ++i) {
        const std::string label = h.label_of(static_cast<VertexId>(i));
        check_label_writable(label);
        out << label << '\n';
    }
    out << "hyperarcs " << h.n_hyperarcs() << '\n';
    for (const auto& a : h.hyperarcs) {
        out << a.out.size() << ' ' << a.in.size();
        for (VertexId v : a.out) out << ' ' << h.label_of(v);
        for (VertexId v : a.in) out << ' ' << h.label_of(v);
        out << '\n';
    }
    const auto write_row = [&](const char* name, const std::vector<double>& w) {
        out << name;
        for (double v : w) {
            out << ' ';
            write_double(out, v);
        }
        out << '\n';
    };
    write_row("w_I", h.w_I);
    write_row("w_G", h.w_G);
    write_row("W_I", h.W_I);
    write_row("W_G", h.W_G);
}

void save_hypergraph(const OrientedHypergraph& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    save_hypergraph(h, out);
    if (!out) throw IoError("failed while writing '" + path + "'");
}

OrientedHypergraph load_hypergraph(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string_view> tokens;

    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line)) throw FileParseError(line_no + 1, "unexpected end of file");
        ++line_no;
        return line;
    };

    next_line();
    if (line != kSchemaTag) {
        throw SchemaVersionMismatchError("expected schema '" + std::string(kSchemaTag) +
                                         "', got '" + line + "'");
    }

    next_line();
    tokenize(line, tokens);
    if (tokens.size() != 2 || tokens[0] != "vertices") {
        throw FileParseError(line_no, "expected 'vertices <count>'");
    }
    const std::size_t n = parse_count(tokens[1], line_no);

    std::vector<std::string> labels;
    labels.reserve(n);
    std::unordered_map<std::string, VertexId> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        next_line();
        tokenize(line, tokens);
        if (tokens.size() != 1) throw FileParseError(line_no, "expected one vertex label");
        labels.emplace_back(tokens[0]);
        if (!ids.emplace(labels.back(), static_cast<VertexId>(i)).second) {
            throw FileParseError(line_no, "duplicate vertex label '" + labels.back() + "'");
        }
    }

    next_line();
    tokenize(line, tokens);
    if (tokens.size() != 2 || tokens[0] != "hyperarcs") {
        throw FileParseError(line_no, "expected 'hyperarcs <count>'");
    }
    const std::size_t m = parse_count(tokens[1], line_no);

    std::vector<Hyperarc> hyperarcs;
    hyperarcs.reserve(m);
    for (std::size_t q = 0; q < m; ++q) {
        next_line();
        tokenize(line, tokens);
        if (tokens.size() < 2) throw FileParseError(line_no, "expected '<n_out> <n_in> ...'");
        const std::size_t n_out = parse_count(tokens[0], line_no);
        const std::size_t n_in = parse_count(tokens[1], line_no);
        if (tokens.size() != 2 + n_out + n_in) {
            throw FileParseError(line_no, "hyperarc vertex count does not match header");
        }
        Hyperarc a;
        for (std::size_t k = 0; k < n_out + n_in; ++k) {
            auto it = ids.find(std::string(tokens[2 + k]));
            if (it == ids.end()) {
                throw FileParseError(line_no,
                                     "unknown vertex label '" + std::string(tokens[2 + k]) + "'");
            }
            (k < n_out ? a.out : a.in).push_back(it->second);
        }
        hyperarcs.push_back(std::move(a));
    }

    HypergraphWeights weights;
    const auto read_row = [&](const char* name, std::size_t count) {
        next_line();
        tokenize(line, tokens);
        if (tokens.empty() || tokens[0] != name) {
            throw FileParseError(line_no, std::string("expected '") + name + "' row");
        }
        if (tokens.size() != count + 1) {
            throw FileParseError(line_no, std::string(name) + ": expected " +
                                              std::to_string(count) + " values");
        }
        std::vector<double> w(count);
        for (std::size_t i = 0; i < count; ++i) w[i] = parse_double(tokens[i + 1], line_no);
        return w;
    };
    weights.vertex_inner = read_row("w_I", n);
    weights.vertex_grad = read_row("w_G", n);
    weights.hyperarc_inner = read_row("W_I", m);
    weights.hyperarc_grad = read_row("W_G", m);

    return build_hypergraph(n, std::move(hyperarcs), std::move(weights), std::move(labels));
}

OrientedHypergraph load_hypergraph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return load_hypergraph(in);
}

void save_vertex_state(const OrientedHypergraph& h, const VertexState& f, std::ostream& out) {
    if (f.size() != h.n_vertices) throw LengthMismatchError("state length != vertex count");
    out << "vertex,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string label = h.label_of(static_cast<VertexId>(i));
        check_label_writable(label);
        out << label << ',';
        write_double(out, f[i]);
        out << '\n';
    }
}

VertexState load_vertex_state(const OrientedHypergraph& h, std::istream& in) {
    std::unordered_map<std::string, VertexId> ids;
    for (std::size_t i = 0; i < h.n_vertices; ++i) {
        ids.emplace(h.label_of(static_cast<VertexId>(i)), static_cast<VertexId>(i));
    }
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw FileParseError(1, "missing header row");
    ++line_no;
    VertexState f(h.n_vertices, 0.0);
    std::vector<char> assigned(h.n_vertices, 0);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw FileParseError(line_no, "expected 'label,value'");
        const std::string label = line.substr(0, comma);
        auto it = ids.find(label);
        if (it == ids.end()) throw FileParseError(line_no, "unknown vertex '" + label + "'");
        if (assigned[it->second]) throw FileParseError(line_no, "vertex '" + label + "' repeated");
        assigned[it->second] = 1;
        std::string_view value(line);
        value.remove_prefix(comma + 1);
        f[it->second] = parse_double(value, line_no);
    }
    for (std::size_t i = 0; i < h.n_vertices; ++i) {
        if (!assigned[i]) {
            throw FileParseError(line_no, "no value for vertex '" +
                                              h.label_of(static_cast<VertexId>(i)) + "'");
        }
    }
    return f;
}

void save_hyperarc_state(const HyperarcState& F, std::ostream& out) {
    out << "hyperarc,value\n";
    for (std::size_t q = 0; q < F.size(); ++q) {
        out << q << ',';
        write_double(out, F[q]);
        out << '\n';
    }
}

HyperarcState load_hyperarc_state(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw FileParseError(1, "missing header row");
    ++line_no;
    HyperarcState F;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw FileParseError(line_no, "expected 'index,value'");
        const std::size_t idx = parse_count(std::string_view(line).substr(0, comma), line_no);
        if (idx != F.size()) throw FileParseError(line_no, "hyperarc rows must be 0,1,2,...");
        std::string_view value(line);
        value.remove_prefix(comma + 1);
        F.push_back(parse_double(value, line_no));
    }
    return F;
}

void save_trace(const std::vector<TraceEntry>& trace, std::ostream& out) {
    out << "iteration,relative_change,energy,weighted_mean,rayleigh_quotient\n";
    for (const auto& t : trace) {
        out << t.iteration << ',';
        write_double(out, t.relative_change);
        out << ',';
        write_double(out, t.energy);
        out << ',';
        write_double(out, t.weighted_mean);
        out << ',';
        write_double(out, t.rayleigh_quotient);
        out << '\n';
    }
}

void save_cluster_labels(const OrientedHypergraph& h, const std::vector<int>& labels,
                         std::ostream& out) {
    if (labels.size() != h.n_vertices) throw LengthMismatchError("label length != vertex count");
    out << "vertex,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << h.label_of(static_cast<VertexId>(i)) << ',' << labels[i] << '\n';
    }
}

std::vector<std::pair<std::string, double>> load_state_table(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw FileParseError(1, "missing header row");
    ++line_no;
    std::vector<std::pair<std::string, double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw FileParseError(line_no, "expected 'label,value'");
        std::string_view value(line);
        value.remove_prefix(comma + 1);
        rows.emplace_back(line.substr(0, comma), parse_double(value, line_no));
    }
    if (rows.empty()) throw EmptyInputError("state table has no rows");
    return rows;
}

}  // namespace hyperflow
