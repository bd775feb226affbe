#ifndef R2POLY_GRAPH_HPP
#define R2POLY_GRAPH_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"

namespace r2poly {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
    Vertex a;
    Vertex b;

    Vertex other(Vertex v) const { return v == a ? b : a; }
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// A subset of the edge ids 0..m-1, packed into 64-bit words.
class EdgeSubset {
public:
    EdgeSubset() = default;
    explicit EdgeSubset(std::size_t m) : m_(m), words_((m + 63) / 64, 0) {}

    static EdgeSubset full(std::size_t m)
    {
        EdgeSubset s(m);
        for (std::size_t e = 0; e < m; ++e)
            s.set(e);
        return s;
    }

    static EdgeSubset from_mask(std::uint64_t mask, std::size_t m)
    {
        if (m < 64 && (mask >> m) != 0)
            throw InvalidInput("mask has bits beyond the edge count");
        EdgeSubset s(m);
        if (m > 0)
            s.words_[0] = mask;
        return s;
    }

    static EdgeSubset from_ids(std::size_t m, const std::vector<EdgeId>& ids)
    {
        EdgeSubset s(m);
        for (EdgeId e : ids)
            s.set(e);
        return s;
    }

    std::size_t universe() const { return m_; }

    bool contains(std::size_t e) const { return (words_[e >> 6] >> (e & 63)) & 1u; }

    void set(std::size_t e, bool value = true)
    {
        check(e);
        const std::uint64_t bit = std::uint64_t{1} << (e & 63);
        if (value)
            words_[e >> 6] |= bit;
        else
            words_[e >> 6] &= ~bit;
    }

    void flip(std::size_t e)
    {
        check(e);
        words_[e >> 6] ^= std::uint64_t{1} << (e & 63);
    }

    std::size_t count() const
    {
        std::size_t c = 0;
        for (auto w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool empty() const { return count() == 0; }

    /// Only valid when universe() <= 64.
    std::uint64_t to_mask() const
    {
        if (m_ > 64)
            throw LimitExceeded("edge subset does not fit a 64-bit mask");
        return words_.empty() ? 0 : words_[0];
    }

    std::vector<EdgeId> ids() const
    {
        std::vector<EdgeId> out;
        for (std::size_t e = 0; e < m_; ++e)
            if (contains(e))
                out.push_back(static_cast<EdgeId>(e));
        return out;
    }

    /// Hex with the most significant nibble first; edge 0 is the lowest bit.
    std::string to_hex() const
    {
        static constexpr char digits[] = "0123456789abcdef";
        std::size_t nibbles = std::max<std::size_t>(1, (m_ + 3) / 4);
        std::string out(nibbles, '0');
        for (std::size_t i = 0; i < nibbles; ++i) {
            unsigned v = 0;
            for (std::size_t b = 0; b < 4; ++b) {
                std::size_t e = i * 4 + b;
                if (e < m_ && contains(e))
                    v |= 1u << b;
            }
            out[nibbles - 1 - i] = digits[v];
        }
        return out;
    }

    static EdgeSubset from_hex(std::string_view hex, std::size_t m)
    {
        EdgeSubset s(m);
        std::size_t pos = 0;
        for (auto it = hex.rbegin(); it != hex.rend(); ++it, pos += 4) {
            char c = *it;
            unsigned v;
            if (c >= '0' && c <= '9')
                v = static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f')
                v = static_cast<unsigned>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F')
                v = static_cast<unsigned>(c - 'A' + 10);
            else
                throw InvalidInput("bad hex digit in edge subset");
            for (std::size_t b = 0; b < 4; ++b)
                if ((v >> b) & 1u) {
                    if (pos + b >= m)
                        throw InvalidInput("hex edge subset has bits beyond the edge count");
                    s.set(pos + b);
                }
        }
        return s;
    }

    EdgeSubset& operator^=(const EdgeSubset& o)
    {
        same_universe(o);
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] ^= o.words_[i];
        return *this;
    }
    EdgeSubset& operator&=(const EdgeSubset& o)
    {
        same_universe(o);
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= o.words_[i];
        return *this;
    }
    EdgeSubset& operator|=(const EdgeSubset& o)
    {
        same_universe(o);
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] |= o.words_[i];
        return *this;
    }
    friend EdgeSubset operator^(EdgeSubset a, const EdgeSubset& b) { return a ^= b; }
    friend EdgeSubset operator&(EdgeSubset a, const EdgeSubset& b) { return a &= b; }
    friend EdgeSubset operator|(EdgeSubset a, const EdgeSubset& b) { return a |= b; }
    friend bool operator==(const EdgeSubset&, const EdgeSubset&) = default;

private:
    void check(std::size_t e) const
    {
        if (e >= m_)
            throw InvalidInput("edge id out of range");
    }
    void same_universe(const EdgeSubset& o) const
    {
        if (o.m_ != m_)
            throw InvalidInput("edge subsets over different edge sets");
    }

    std::size_t m_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Simple undirected graph with stable edge ids (input order).
class Graph {
public:
    Graph() = default;

    Graph(std::size_t n, std::vector<Edge> edges, std::vector<std::string> labels = {})
        : n_(n), edges_(std::move(edges)), labels_(std::move(labels)), incident_(n)
    {
        if (!labels_.empty() && labels_.size() != n_)
            throw InvalidInput("label count does not match vertex count");
        std::set<std::pair<Vertex, Vertex>> seen;
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            auto [a, b] = edges_[e];
            if (a >= n_ || b >= n_)
                throw InvalidInput("edge endpoint out of range");
            if (a == b)
                throw InvalidInput("self-loop at vertex " + std::to_string(a));
            if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
                throw InvalidInput("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
            incident_[a].push_back(static_cast<EdgeId>(e));
            incident_[b].push_back(static_cast<EdgeId>(e));
        }
    }

    std::size_t n() const { return n_; }
    std::size_t m() const { return edges_.size(); }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<EdgeId>& incident(Vertex v) const { return incident_[v]; }
    std::size_t degree(Vertex v) const { return incident_[v].size(); }

    std::string label(Vertex v) const { return labels_.empty() ? std::to_string(v) : labels_[v]; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::size_t isolated_count() const
    {
        return static_cast<std::size_t>(
            std::count_if(incident_.begin(), incident_.end(), [](const auto& inc) { return inc.empty(); }));
    }

    EdgeSubset all_edges() const { return EdgeSubset::full(m()); }
    EdgeSubset no_edges() const { return EdgeSubset(m()); }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::string> labels_;
    std::vector<std::vector<EdgeId>> incident_;
};

namespace detail {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), sets_(n)
    {
        std::iota(parent_.begin(), parent_.end(), 0u);
    }
    std::uint32_t find(std::uint32_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool unite(std::uint32_t a, std::uint32_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent_[a] = b;
        --sets_;
        return true;
    }
    std::size_t sets() const { return sets_; }

private:
    std::vector<std::uint32_t> parent_;
    std::size_t sets_;
};

} // namespace detail

/// Proper 2-colouring with the smallest vertex of each component coloured 0.
inline std::optional<std::vector<int>> two_coloring(const Graph& g, const EdgeSubset* subset = nullptr)
{
    std::vector<int> color(g.n(), -1);
    for (Vertex s = 0; s < g.n(); ++s) {
        if (color[s] != -1)
            continue;
        color[s] = 0;
        std::vector<Vertex> stack{s};
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (EdgeId e : g.incident(v)) {
                if (subset && !subset->contains(e))
                    continue;
                Vertex w = g.edge(e).other(v);
                if (color[w] == -1) {
                    color[w] = 1 - color[v];
                    stack.push_back(w);
                } else if (color[w] == color[v]) {
                    return std::nullopt;
                }
            }
        }
    }
    return color;
}

/// A graph with a declared bipartition (U, W).
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    BipartiteGraph(Graph g, std::vector<Vertex> u_side, std::vector<Vertex> w_side)
        : g_(std::move(g)), u_(std::move(u_side)), w_(std::move(w_side)), side_(g_.n(), -1), index_(g_.n(), 0)
    {
        if (u_.size() + w_.size() != g_.n())
            throw InvalidInput("U and W must partition the vertex set");
        for (std::size_t i = 0; i < u_.size(); ++i)
            claim(u_[i], 0, i);
        for (std::size_t i = 0; i < w_.size(); ++i)
            claim(w_[i], 1, i);
        for (const Edge& e : g_.edges())
            if (side_[e.a] == side_[e.b])
                throw InvalidInput("edge " + std::to_string(e.a) + "-" + std::to_string(e.b) +
                                   " lies inside one side of the bipartition");
    }

    /// Bipartition from two_coloring; throws when the graph has an odd cycle.
    static BipartiteGraph from_coloring(Graph g)
    {
        auto color = two_coloring(g);
        if (!color)
            throw InvalidInput("graph is not bipartite");
        std::vector<Vertex> u, w;
        for (Vertex v = 0; v < g.n(); ++v)
            ((*color)[v] == 0 ? u : w).push_back(v);
        return BipartiteGraph(std::move(g), std::move(u), std::move(w));
    }

    const Graph& graph() const { return g_; }
    const std::vector<Vertex>& u_side() const { return u_; }
    const std::vector<Vertex>& w_side() const { return w_; }
    bool in_u(Vertex v) const { return side_[v] == 0; }
    bool in_w(Vertex v) const { return side_[v] == 1; }
    /// Row index for U vertices, column index for W vertices.
    std::size_t side_index(Vertex v) const { return index_[v]; }

    Vertex u_end(EdgeId e) const
    {
        const Edge& ed = g_.edge(e);
        return in_u(ed.a) ? ed.a : ed.b;
    }
    Vertex w_end(EdgeId e) const
    {
        const Edge& ed = g_.edge(e);
        return in_u(ed.a) ? ed.b : ed.a;
    }

    std::size_t n() const { return g_.n(); }
    std::size_t m() const { return g_.m(); }

private:
    void claim(Vertex v, int side, std::size_t idx)
    {
        if (v >= g_.n() || side_[v] != -1)
            throw InvalidInput("U and W must partition the vertex set");
        side_[v] = side;
        index_[v] = idx;
    }

    Graph g_;
    std::vector<Vertex> u_, w_;
    std::vector<int> side_;
    std::vector<std::size_t> index_;
};

struct Component {
    std::vector<Vertex> vertices;
    std::size_t edge_count = 0;
    /// Set only when a W side is declared.
    std::optional<bool> pure;
};

struct ComponentAnalysis {
    std::size_t kappa = 0;
    /// Number of pure components; meaningful only when a W side is declared.
    std::size_t pure_count = 0;
    std::vector<std::uint32_t> component_of;
    std::vector<Component> components;
};

namespace detail {

inline ComponentAnalysis analyse_components(const Graph& g, const EdgeSubset& s, const BipartiteGraph* bip)
{
    DisjointSets ds(g.n());
    std::vector<std::size_t> deg(g.n(), 0);
    for (EdgeId e = 0; e < g.m(); ++e)
        if (s.contains(e)) {
            ds.unite(g.edge(e).a, g.edge(e).b);
            ++deg[g.edge(e).a];
            ++deg[g.edge(e).b];
        }
    ComponentAnalysis out;
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> root_to_comp(g.n(), unset);
    out.component_of.resize(g.n());
    for (Vertex v = 0; v < g.n(); ++v) {
        auto r = ds.find(v);
        if (root_to_comp[r] == unset) {
            root_to_comp[r] = static_cast<std::uint32_t>(out.components.size());
            out.components.emplace_back();
            if (bip)
                out.components.back().pure = true;
        }
        auto c = root_to_comp[r];
        out.component_of[v] = c;
        Component& comp = out.components[c];
        comp.vertices.push_back(v);
        comp.edge_count += deg[v];
        if (bip && bip->in_w(v) && deg[v] != 2)
            comp.pure = false;
    }
    for (auto& c : out.components)
        c.edge_count /= 2;
    out.kappa = out.components.size();
    if (bip)
        out.pure_count = static_cast<std::size_t>(
            std::count_if(out.components.begin(), out.components.end(), [](const Component& c) { return *c.pure; }));
    return out;
}

} // namespace detail

/// Connected components of (V, S); isolated vertices count.
inline ComponentAnalysis components(const Graph& g, const EdgeSubset& s)
{
    return detail::analyse_components(g, s, nullptr);
}

/// Components with pure/mixed flags: pure iff every W vertex has subset-degree 2.
/// Isolated U vertices are pure, isolated W vertices are mixed.
inline ComponentAnalysis components(const BipartiteGraph& g, const EdgeSubset& s)
{
    return detail::analyse_components(g.graph(), s, &g);
}

inline std::size_t count_components(const Graph& g, const EdgeSubset& s)
{
    detail::DisjointSets ds(g.n());
    for (EdgeId e = 0; e < g.m(); ++e)
        if (s.contains(e))
            ds.unite(g.edge(e).a, g.edge(e).b);
    return ds.sets();
}

inline bool is_forest(const Graph& g)
{
    detail::DisjointSets ds(g.n());
    for (const Edge& e : g.edges())
        if (!ds.unite(e.a, e.b))
            return false;
    return true;
}

inline bool is_tree(const Graph& g) { return g.n() > 0 && is_forest(g) && g.m() + 1 == g.n(); }

namespace detail {

/// Hopcroft-Karp on the subgraph (V, S) given a proper 2-colouring.
inline std::size_t hopcroft_karp(const Graph& g, const EdgeSubset& s, const std::vector<int>& color)
{
    constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
    const std::size_t n = g.n();
    std::vector<std::vector<Vertex>> adj(n);
    for (EdgeId e = 0; e < g.m(); ++e)
        if (s.contains(e)) {
            auto [a, b] = g.edge(e);
            if (color[a] == 0)
                adj[a].push_back(b);
            else
                adj[b].push_back(a);
        }
    std::vector<std::uint32_t> mate(n, none), dist(n, 0);
    std::size_t matched = 0;

    auto bfs = [&]() {
        std::queue<Vertex> q;
        bool found = false;
        for (Vertex v = 0; v < n; ++v) {
            if (color[v] != 0)
                continue;
            if (mate[v] == none) {
                dist[v] = 0;
                q.push(v);
            } else {
                dist[v] = none;
            }
        }
        while (!q.empty()) {
            Vertex u = q.front();
            q.pop();
            for (Vertex w : adj[u]) {
                std::uint32_t next = mate[w];
                if (next == none)
                    found = true;
                else if (dist[next] == none) {
                    dist[next] = dist[u] + 1;
                    q.push(next);
                }
            }
        }
        return found;
    };

    std::function<bool(Vertex)> dfs = [&](Vertex u) {
        for (Vertex w : adj[u]) {
            std::uint32_t next = mate[w];
            if (next == none || (dist[next] == dist[u] + 1 && dfs(next))) {
                mate[u] = w;
                mate[w] = u;
                return true;
            }
        }
        dist[u] = none;
        return false;
    };

    while (bfs())
        for (Vertex v = 0; v < n; ++v)
            if (color[v] == 0 && mate[v] == none && dfs(v))
                ++matched;
    return matched;
}

inline std::size_t exhaustive_matching(const Graph& g, const EdgeSubset& s)
{
    std::vector<EdgeId> edges = s.ids();
    std::vector<bool> used(g.n(), false);
    std::size_t best = 0;
    std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t size) {
        if (size + (edges.size() - i) <= best)
            return;
        if (i == edges.size()) {
            best = size;
            return;
        }
        auto [a, b] = g.edge(edges[i]);
        if (!used[a] && !used[b]) {
            used[a] = used[b] = true;
            go(i + 1, size + 1);
            used[a] = used[b] = false;
        }
        go(i + 1, size);
    };
    go(0, 0);
    return best;
}

} // namespace detail

inline constexpr std::size_t kExhaustiveMatchingLimit = 24;

/// Maximum matching size of (V, S): Hopcroft-Karp when (V, S) is bipartite,
/// exhaustive search otherwise (|S| <= 24).
inline std::size_t max_matching(const Graph& g, const EdgeSubset& s)
{
    if (auto color = two_coloring(g, &s))
        return detail::hopcroft_karp(g, s, *color);
    if (s.count() > kExhaustiveMatchingLimit)
        throw LimitExceeded("general maximum matching supports at most 24 edges");
    return detail::exhaustive_matching(g, s);
}

/// Tree decomposition: a tree over bag indices and one vertex set per tree node.
struct TreeDecomposition {
    Graph tree;
    std::vector<std::vector<Vertex>> bags;

    std::size_t width() const
    {
        std::size_t w = 0;
        for (const auto& b : bags)
            w = std::max(w, b.size());
        return w == 0 ? 0 : w - 1;
    }

    /// Empty string when valid, otherwise the first violated property.
    std::string validate(const Graph& g) const
    {
        if (bags.size() != tree.n())
            return "bag count does not match the decomposition tree";
        if (tree.n() == 0)
            return g.m() == 0 ? "" : "empty decomposition for a graph with edges";
        if (!is_tree(tree))
            return "decomposition graph is not a tree";
        std::vector<std::vector<bool>> member(tree.n(), std::vector<bool>(g.n(), false));
        for (std::size_t h = 0; h < bags.size(); ++h)
            for (Vertex v : bags[h]) {
                if (v >= g.n())
                    return "bag vertex out of range";
                member[h][v] = true;
            }
        for (EdgeId e = 0; e < g.m(); ++e) {
            auto [a, b] = g.edge(e);
            bool covered = false;
            for (std::size_t h = 0; h < bags.size() && !covered; ++h)
                covered = member[h][a] && member[h][b];
            if (!covered)
                return "edge " + std::to_string(e) + " is not inside any bag";
        }
        // Running intersection: the bags containing v induce a connected subtree.
        for (Vertex v = 0; v < g.n(); ++v) {
            std::vector<Vertex> holders;
            for (std::size_t h = 0; h < bags.size(); ++h)
                if (member[h][v])
                    holders.push_back(static_cast<Vertex>(h));
            if (holders.size() <= 1)
                continue;
            detail::DisjointSets ds(tree.n());
            std::size_t joins = 0;
            for (const Edge& te : tree.edges())
                if (member[te.a][v] && member[te.b][v]) {
                    ds.unite(te.a, te.b);
                    ++joins;
                }
            if (joins + 1 != holders.size())
                return "bags containing vertex " + std::to_string(v) + " are not connected in the tree";
        }
        return "";
    }
};

/// A bipartite gadget together with its distinguished U vertex.
struct RootedGadget {
    BipartiteGraph graph;
    Vertex root;
};

/// Replaces every edge {a,b} (id e) by the path a - (n+e) - b.
/// Edge 2e is {a, n+e} and edge 2e+1 is {b, n+e}; U = original vertices.
inline BipartiteGraph two_stretch(const Graph& h)
{
    const std::size_t n = h.n();
    std::vector<Edge> edges;
    edges.reserve(2 * h.m());
    std::vector<std::string> labels;
    for (Vertex v = 0; v < n; ++v)
        labels.push_back(h.label(v));
    for (EdgeId e = 0; e < h.m(); ++e) {
        auto [a, b] = h.edge(e);
        Vertex mid = static_cast<Vertex>(n + e);
        edges.push_back({a, mid});
        edges.push_back({b, mid});
        labels.push_back(h.label(a) + "~" + h.label(b));
    }
    std::vector<Vertex> u(n), w(h.m());
    std::iota(u.begin(), u.end(), 0u);
    std::iota(w.begin(), w.end(), static_cast<Vertex>(n));
    return BipartiteGraph(Graph(n + h.m(), std::move(edges), std::move(labels)), std::move(u), std::move(w));
}

/// Image of S' under the 2-stretch edge layout.
inline EdgeSubset stretch_subset(const EdgeSubset& s)
{
    EdgeSubset out(2 * s.universe());
    for (std::size_t e = 0; e < s.universe(); ++e)
        if (s.contains(e)) {
            out.set(2 * e);
            out.set(2 * e + 1);
        }
    return out;
}

/// 2-stretch of h with a copy of upsilon glued at `root` onto every original
/// vertex. Layout: the 2-stretch first (vertices and edges), then copy v for
/// v = 0..n-1, each adding upsilon's non-root vertices and all its edges in order.
inline BipartiteGraph stretch_sum(const Graph& h, const BipartiteGraph& upsilon, Vertex root)
{
    if (root >= upsilon.n() || !upsilon.in_u(root))
        throw InvalidInput("stretch-sum root must be a U vertex of the gadget");
    BipartiteGraph base = two_stretch(h);
    std::vector<Edge> edges = base.graph().edges();
    std::vector<std::string> labels;
    for (Vertex v = 0; v < base.n(); ++v)
        labels.push_back(base.graph().label(v));
    std::vector<Vertex> u = base.u_side(), w = base.w_side();
    Vertex next = static_cast<Vertex>(base.n());
    const Graph& ug = upsilon.graph();
    for (Vertex v = 0; v < h.n(); ++v) {
        std::vector<Vertex> image(ug.n());
        for (Vertex x = 0; x < ug.n(); ++x) {
            if (x == root) {
                image[x] = v;
                continue;
            }
            image[x] = next++;
            labels.push_back(h.label(v) + "." + ug.label(x));
            (upsilon.in_u(x) ? u : w).push_back(image[x]);
        }
        for (const Edge& e : ug.edges())
            edges.push_back({image[e.a], image[e.b]});
    }
    return BipartiteGraph(Graph(next, std::move(edges), std::move(labels)), std::move(u), std::move(w));
}

/// U = {u0, u1}, W = {v0..vk}; edges {u0,v0} then {u1,vi} for i = 0..k. Root u0.
inline RootedGadget gadget_upsilon1(std::size_t k)
{
    std::vector<Edge> edges{{0, 2}};
    std::vector<std::string> labels{"u0", "u1"};
    std::vector<Vertex> w;
    for (std::size_t i = 0; i <= k; ++i) {
        labels.push_back("v" + std::to_string(i));
        w.push_back(static_cast<Vertex>(2 + i));
        edges.push_back({1, static_cast<Vertex>(2 + i)});
    }
    return {BipartiteGraph(Graph(k + 3, std::move(edges), std::move(labels)), {0, 1}, std::move(w)), 0};
}

/// U = {u0, u1, u2}, W = {v0..v2k}; edges {u0,v0}, {u1,v0}, then u1 and u2
/// joined to every vi, i >= 1. Root u0.
inline RootedGadget gadget_upsilon2(std::size_t k)
{
    if (k < 1)
        throw InvalidInput("upsilon2 gadget needs k >= 1");
    std::vector<Edge> edges{{0, 3}, {1, 3}};
    std::vector<std::string> labels{"u0", "u1", "u2", "v0"};
    std::vector<Vertex> w{3};
    for (std::size_t i = 1; i <= 2 * k; ++i) {
        Vertex v = static_cast<Vertex>(3 + i);
        labels.push_back("v" + std::to_string(i));
        w.push_back(v);
        edges.push_back({1, v});
        edges.push_back({2, v});
    }
    return {BipartiteGraph(Graph(3 + 2 * k + 1, std::move(edges), std::move(labels)), {0, 1, 2}, std::move(w)),
            0};
}

inline bool is_prime(std::uint64_t p)
{
    if (p < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

/// Vertex v becomes vertices [v*kp, (v+1)*kp); edge e becomes the cloud
/// n*kp + e*(p-1) + [0, p-1). Each incidence (v, e) is a complete join;
/// edges listed by e, then endpoint a before b, then vertex-cloud index, then
/// edge-cloud index. Vertex clouds form U, edge clouds form W.
inline BipartiteGraph cloud_blowup(const Graph& g, std::uint64_t p, std::uint64_t k)
{
    if (!is_prime(p))
        throw InvalidInput("cloud blow-up needs a prime p");
    if (p <= 2)
        throw InvalidInput("cloud blow-up needs p > 2");
    if (k < 1)
        throw InvalidInput("cloud blow-up needs k >= 1");
    const std::size_t vc = static_cast<std::size_t>(k * p);
    const std::size_t ec = static_cast<std::size_t>(p - 1);
    const std::size_t n = g.n() * vc + g.m() * ec;
    std::vector<Edge> edges;
    std::vector<std::string> labels(n);
    std::vector<Vertex> u, w;
    for (Vertex v = 0; v < g.n(); ++v)
        for (std::size_t i = 0; i < vc; ++i) {
            Vertex x = static_cast<Vertex>(v * vc + i);
            labels[x] = g.label(v) + "#" + std::to_string(i);
            u.push_back(x);
        }
    for (EdgeId e = 0; e < g.m(); ++e) {
        auto [a, b] = g.edge(e);
        const Vertex base = static_cast<Vertex>(g.n() * vc + e * ec);
        for (std::size_t j = 0; j < ec; ++j) {
            labels[base + j] = g.label(a) + "~" + g.label(b) + "#" + std::to_string(j);
            w.push_back(static_cast<Vertex>(base + j));
        }
        for (Vertex end : {a, b})
            for (std::size_t i = 0; i < vc; ++i)
                for (std::size_t j = 0; j < ec; ++j)
                    edges.push_back({static_cast<Vertex>(end * vc + i), static_cast<Vertex>(base + j)});
    }
    return BipartiteGraph(Graph(n, std::move(edges), std::move(labels)), std::move(u), std::move(w));
}

// Small named graphs used by tests, the CLI self-test, and the docs.
namespace graphs {

inline Graph path(std::size_t n)
{
    std::vector<Edge> e;
    for (std::size_t i = 0; i + 1 < n; ++i)
        e.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1)});
    return Graph(n, std::move(e));
}

inline Graph cycle(std::size_t n)
{
    if (n < 3)
        throw InvalidInput("cycle needs at least 3 vertices");
    std::vector<Edge> e;
    for (std::size_t i = 0; i < n; ++i)
        e.push_back({static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n)});
    return Graph(n, std::move(e));
}

inline Graph complete(std::size_t n)
{
    std::vector<Edge> e;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            e.push_back({i, j});
    return Graph(n, std::move(e));
}

/// Centre 0, leaves 1..leaves.
inline Graph star(std::size_t leaves)
{
    std::vector<Edge> e;
    for (std::size_t i = 1; i <= leaves; ++i)
        e.push_back({0, static_cast<Vertex>(i)});
    return Graph(leaves + 1, std::move(e));
}

/// U = 0..a-1, W = a..a+b-1.
inline BipartiteGraph complete_bipartite(std::size_t a, std::size_t b)
{
    std::vector<Edge> e;
    for (Vertex i = 0; i < a; ++i)
        for (Vertex j = 0; j < b; ++j)
            e.push_back({i, static_cast<Vertex>(a + j)});
    std::vector<Vertex> u(a), w(b);
    std::iota(u.begin(), u.end(), 0u);
    std::iota(w.begin(), w.end(), static_cast<Vertex>(a));
    return BipartiteGraph(Graph(a + b, std::move(e)), std::move(u), std::move(w));
}

inline Graph empty(std::size_t n) { return Graph(n, {}); }

/// rows x cols grid, vertex r*cols + c.
inline Graph grid(std::size_t rows, std::size_t cols)
{
    std::vector<Edge> e;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            Vertex v = static_cast<Vertex>(r * cols + c);
            if (c + 1 < cols)
                e.push_back({v, v + 1});
            if (r + 1 < rows)
                e.push_back({v, static_cast<Vertex>(v + cols)});
        }
    return Graph(rows * cols, std::move(e));
}

/// Complete binary tree in heap order: children of v are 2v+1 and 2v+2.
inline Graph complete_binary_tree(std::size_t n)
{
    std::vector<Edge> e;
    for (std::size_t v = 1; v < n; ++v)
        e.push_back({static_cast<Vertex>((v - 1) / 2), static_cast<Vertex>(v)});
    return Graph(n, std::move(e));
}

} // namespace graphs

} // namespace r2poly

#endif // R2POLY_GRAPH_HPP
