#ifndef R2POLY_RANDOM_GRAPHS_HPP
#define R2POLY_RANDOM_GRAPHS_HPP

#include <algorithm>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"

namespace r2poly::graphs {

/// Uniform labelled tree on n vertices from a random Pruefer sequence.
inline Graph random_tree(std::size_t n, Rng& rng)
{
    if (n <= 1)
        return Graph(n, {});
    if (n == 2)
        return Graph(2, {{0, 1}});
    std::vector<Vertex> seq(n - 2);
    for (auto& s : seq)
        s = static_cast<Vertex>(rng.below(n));
    std::vector<std::size_t> degree(n, 1);
    for (Vertex s : seq)
        ++degree[s];
    std::vector<Edge> edges;
    // Linear-time decoding with a moving pointer to the smallest leaf.
    std::size_t ptr = 0;
    while (degree[ptr] != 1)
        ++ptr;
    Vertex leaf = static_cast<Vertex>(ptr);
    for (Vertex s : seq) {
        edges.push_back({leaf, s});
        --degree[leaf];
        if (--degree[s] == 1 && s < ptr) {
            leaf = s;
        } else {
            ++ptr;
            while (degree[ptr] != 1)
                ++ptr;
            leaf = static_cast<Vertex>(ptr);
        }
    }
    // The last two vertices of degree 1.
    std::vector<Vertex> rest;
    for (Vertex v = 0; v < n; ++v)
        if (degree[v] == 1)
            rest.push_back(v);
    edges.push_back({rest[0], rest[1]});
    return Graph(n, std::move(edges));
}

/// Forest: a random tree with each edge kept with probability 1/2.
inline Graph random_forest(std::size_t n, Rng& rng)
{
    const Graph t = random_tree(n, rng);
    std::vector<Edge> kept;
    for (const Edge& e : t.edges())
        if (rng.coin())
            kept.push_back(e);
    return Graph(n, std::move(kept));
}

/// Bipartite graph with |U| = nu (vertices 0..nu-1), |W| = nw, and exactly m
/// distinct edges chosen uniformly (m is clamped to nu * nw).
inline BipartiteGraph random_bipartite(std::size_t nu, std::size_t nw, std::size_t m, Rng& rng)
{
    std::vector<std::pair<Vertex, Vertex>> all;
    for (Vertex u = 0; u < nu; ++u)
        for (Vertex w = 0; w < nw; ++w)
            all.push_back({u, static_cast<Vertex>(nu + w)});
    m = std::min(m, all.size());
    for (std::size_t i = 0; i < m; ++i)
        std::swap(all[i], all[i + rng.below(all.size() - i)]);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < m; ++i)
        edges.push_back({all[i].first, all[i].second});
    std::vector<Vertex> u(nu), w(nw);
    for (std::size_t i = 0; i < nu; ++i)
        u[i] = static_cast<Vertex>(i);
    for (std::size_t i = 0; i < nw; ++i)
        w[i] = static_cast<Vertex>(nu + i);
    return BipartiteGraph(Graph(nu + nw, std::move(edges)), std::move(u), std::move(w));
}

/// Bipartite graph whose W vertices all have degree 1 or 2 (before the optional
/// connectivity filter of the caller). Each W vertex picks one or two U vertices.
inline BipartiteGraph random_w_degree_two(std::size_t nu, std::size_t nw, Rng& rng, double p_degree_one = 0.25)
{
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < nw; ++i) {
        const auto w = static_cast<Vertex>(nu + i);
        const auto a = static_cast<Vertex>(rng.below(nu));
        edges.push_back({a, w});
        if (nu >= 2 && rng.uniform01() >= p_degree_one) {
            auto b = static_cast<Vertex>(rng.below(nu - 1));
            if (b >= a)
                ++b;
            edges.push_back({b, w});
        }
    }
    std::vector<Vertex> u(nu), wv(nw);
    for (std::size_t i = 0; i < nu; ++i)
        u[i] = static_cast<Vertex>(i);
    for (std::size_t i = 0; i < nw; ++i)
        wv[i] = static_cast<Vertex>(nu + i);
    return BipartiteGraph(Graph(nu + nw, std::move(edges)), std::move(u), std::move(wv));
}

/// G(n, m): m distinct edges chosen uniformly.
inline Graph random_graph(std::size_t n, std::size_t m, Rng& rng)
{
    std::vector<std::pair<Vertex, Vertex>> all;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            all.push_back({a, b});
    m = std::min(m, all.size());
    for (std::size_t i = 0; i < m; ++i)
        std::swap(all[i], all[i + rng.below(all.size() - i)]);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < m; ++i)
        edges.push_back({all[i].first, all[i].second});
    return Graph(n, std::move(edges));
}

} // namespace r2poly::graphs

#endif // R2POLY_RANDOM_GRAPHS_HPP
