#ifndef R2POLY_GRAPH_IO_HPP
#define R2POLY_GRAPH_IO_HPP

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "graph.hpp"

namespace r2poly {

enum class GraphFormat { Auto, EdgeList, Json };

struct LoadedGraph {
    Graph graph;
    /// Present when the input declared U and W.
    std::optional<BipartiteGraph> declared;

    /// The declared bipartition, else one from two-colouring.
    BipartiteGraph bipartite() const { return declared ? *declared : BipartiteGraph::from_coloring(graph); }
};

/// One "u v" pair per line; a lone token declares a vertex; '#' starts a
/// comment. Vertices are numbered by first appearance and keep their names.
inline Graph parse_edge_list(const std::string& text)
{
    std::map<std::string, Vertex> ids;
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    auto id_of = [&](const std::string& tok) {
        auto [it, fresh] = ids.emplace(tok, static_cast<Vertex>(labels.size()));
        if (fresh)
            labels.push_back(tok);
        return it->second;
    };
    std::istringstream in(text);
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        if (tok.size() > 2)
            throw InvalidInput("line " + std::to_string(lineno) + ": expected \"u v\" or a single vertex");
        const Vertex a = id_of(tok[0]);
        if (tok.size() == 2)
            edges.push_back({a, id_of(tok[1])});
    }
    const std::size_t n = labels.size();
    return Graph(n, std::move(edges), std::move(labels));
}

/// {"n": 4, "edges": [[0,1],...], "U": [...], "W": [...], "labels": [...]};
/// U, W and labels are optional, U and W must come together.
inline LoadedGraph parse_json_graph(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed graph document: ") + e.what());
    }
    try {
        if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges"))
            throw InvalidInput("graph document needs fields \"n\" and \"edges\"");
        const auto n = doc.at("n").get<std::size_t>();
        std::vector<Edge> edges;
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw InvalidInput("each edge must be a pair of vertex indices");
            edges.push_back({e[0].get<Vertex>(), e[1].get<Vertex>()});
        }
        std::vector<std::string> labels;
        if (doc.contains("labels"))
            labels = doc.at("labels").get<std::vector<std::string>>();
        LoadedGraph out{Graph(n, std::move(edges), std::move(labels)), std::nullopt};
        const bool has_u = doc.contains("U"), has_w = doc.contains("W");
        if (has_u != has_w)
            throw InvalidInput("\"U\" and \"W\" must be given together");
        if (has_u)
            out.declared.emplace(out.graph, doc.at("U").get<std::vector<Vertex>>(),
                                 doc.at("W").get<std::vector<Vertex>>());
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("graph document has a wrongly typed field: ") + e.what());
    }
}

inline std::string read_text_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw InvalidInput("cannot read file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline LoadedGraph parse_graph(const std::string& text, GraphFormat format)
{
    if (format == GraphFormat::Auto) {
        const auto first = text.find_first_not_of(" \t\r\n");
        format = (first != std::string::npos && text[first] == '{') ? GraphFormat::Json : GraphFormat::EdgeList;
    }
    if (format == GraphFormat::Json)
        return parse_json_graph(text);
    return LoadedGraph{parse_edge_list(text), std::nullopt};
}

inline LoadedGraph load_graph(const std::string& path, GraphFormat format = GraphFormat::Auto)
{
    return parse_graph(read_text_file(path), format);
}

/// {"tree": [[0,1],...], "bags": [["a","b"],...]}: bag entries name vertices by
/// label (strings) or by index (integers).
inline TreeDecomposition parse_tree_decomposition(const Graph& g, const std::string& text)
{
    std::map<std::string, Vertex> by_label;
    for (Vertex v = 0; v < g.n(); ++v)
        by_label.emplace(g.label(v), v);
    try {
        const auto doc = nlohmann::json::parse(text);
        std::vector<std::vector<Vertex>> bags;
        for (const auto& bag : doc.at("bags")) {
            std::vector<Vertex> b;
            for (const auto& v : bag) {
                if (v.is_number_unsigned()) {
                    b.push_back(v.get<Vertex>());
                    continue;
                }
                auto it = by_label.find(v.get<std::string>());
                if (it == by_label.end())
                    throw InvalidInput("bag names unknown vertex " + v.get<std::string>());
                b.push_back(it->second);
            }
            bags.push_back(std::move(b));
        }
        std::vector<Edge> tree_edges;
        for (const auto& e : doc.at("tree"))
            tree_edges.push_back({e.at(0).get<Vertex>(), e.at(1).get<Vertex>()});
        return TreeDecomposition{Graph(bags.size(), std::move(tree_edges)), std::move(bags)};
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed tree decomposition: ") + e.what());
    }
}

/// Whitespace-separated edge ids.
inline std::vector<EdgeId> parse_ordering(const std::string& text)
{
    std::istringstream in(text);
    std::vector<EdgeId> perm;
    for (std::string tok; in >> tok;) {
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(tok, &used);
            if (used != tok.size())
                throw std::invalid_argument(tok);
            perm.push_back(static_cast<EdgeId>(v));
        } catch (const std::logic_error&) {
            throw InvalidInput("ordering entry \"" + tok + "\" is not an edge id");
        }
    }
    return perm;
}

} // namespace r2poly

#endif // R2POLY_GRAPH_IO_HPP
