// Brute-force reference computations shared by the unit tests. Nothing here
// calls the library's evaluators; graphs are plain edge lists.
#ifndef R2POLY_TESTS_ORACLES_HPP
#define R2POLY_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Edges = std::vector<std::pair<int, int>>;

/// Rank over GF(2) of a dense 0/1 matrix by plain row reduction.
inline int gf2_rank(std::vector<std::vector<int>> a)
{
    int r = 0;
    const int rows = static_cast<int>(a.size());
    const int cols = rows ? static_cast<int>(a[0].size()) : 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c]) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(a[piv], a[r]);
        for (int i = 0; i < rows; ++i)
            if (i != r && a[i][c])
                for (int j = 0; j < cols; ++j)
                    a[i][j] ^= a[r][j];
        ++r;
    }
    return r;
}

/// Rows: vertices with side 0, columns: side 1, restricted to edges in mask.
inline int bipartite_rank(int n, const Edges& e, const std::vector<int>& side, std::uint64_t mask)
{
    std::vector<int> row(n, -1), col(n, -1);
    int nr = 0, nc = 0;
    for (int v = 0; v < n; ++v)
        (side[v] == 0 ? row[v] : col[v]) = side[v] == 0 ? nr++ : nc++;
    std::vector<std::vector<int>> a(nr, std::vector<int>(nc, 0));
    for (std::size_t i = 0; i < e.size(); ++i)
        if ((mask >> i) & 1u) {
            auto [x, y] = e[i];
            if (side[x] == 1)
                std::swap(x, y);
            a[row[x]][col[y]] ^= 1;
        }
    return gf2_rank(a);
}

inline int adjacency_rank(int n, const Edges& e, std::uint64_t mask)
{
    std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < e.size(); ++i)
        if ((mask >> i) & 1u) {
            a[e[i].first][e[i].second] ^= 1;
            a[e[i].second][e[i].first] ^= 1;
        }
    return gf2_rank(a);
}

/// Connected components of (V, mask) by repeated relaxation.
inline int kappa(int n, const Edges& e, std::uint64_t mask)
{
    std::vector<int> lab(n);
    std::iota(lab.begin(), lab.end(), 0);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < e.size(); ++i)
            if ((mask >> i) & 1u) {
                int& a = lab[e[i].first];
                int& b = lab[e[i].second];
                if (a != b) {
                    a = b = std::min(a, b);
                    changed = true;
                }
            }
    }
    std::sort(lab.begin(), lab.end());
    return static_cast<int>(std::unique(lab.begin(), lab.end()) - lab.begin());
}

/// Maximum matching inside mask by trying every edge subset.
inline int max_matching(int n, const Edges& e, std::uint64_t mask)
{
    int best = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << e.size()); ++s) {
        if ((s & mask) != s)
            continue;
        std::vector<int> used(n, 0);
        bool ok = true;
        for (std::size_t i = 0; i < e.size() && ok; ++i)
            if ((s >> i) & 1u)
                ok = !used[e[i].first]++ && !used[e[i].second]++;
        if (ok)
            best = std::max(best, __builtin_popcountll(s));
    }
    return best;
}

inline std::uint64_t count_matchings(int n, const Edges& e, bool perfect)
{
    std::uint64_t c = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << e.size()); ++s) {
        std::vector<int> used(n, 0);
        bool ok = true;
        for (std::size_t i = 0; i < e.size() && ok; ++i)
            if ((s >> i) & 1u)
                ok = !used[e[i].first]++ && !used[e[i].second]++;
        if (ok && (!perfect || 2 * __builtin_popcountll(s) == n))
            ++c;
    }
    return c;
}

inline std::uint64_t count_independent_sets(int n, const Edges& e)
{
    std::uint64_t c = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        bool ok = true;
        for (auto [a, b] : e)
            ok = ok && !(((s >> a) & 1u) && ((s >> b) & 1u));
        c += ok;
    }
    return c;
}

/// Sum over labelings of prod_e (1 + eta chi), chi = +1 iff both ends are 1.
inline mpq_class pbis(int n, const Edges& e, const mpq_class& eta)
{
    mpq_class total = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        mpq_class w = 1;
        for (auto [a, b] : e)
            w *= (((s >> a) & 1u) && ((s >> b) & 1u)) ? mpq_class(1 + eta) : mpq_class(1 - eta);
        total += w;
    }
    return total;
}

inline mpq_class qpow(const mpq_class& b, long k)
{
    mpq_class r = 1;
    for (long i = 0; i < std::labs(k); ++i)
        r *= b;
    return k < 0 ? mpq_class(1 / r) : r;
}

/// sum_S f(S) over all edge subsets.
inline mpq_class subset_sum(std::size_t m, const std::function<mpq_class(std::uint64_t)>& f)
{
    mpq_class t = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s)
        t += f(s);
    return t;
}

/// Tutte polynomial by deletion-contraction on a multigraph with loops.
inline mpq_class tutte(int n, Edges e, const mpq_class& x, const mpq_class& y)
{
    if (e.empty())
        return 1;
    auto [a, b] = e.back();
    e.pop_back();
    if (a == b)
        return y * tutte(n, e, x, y);
    // Bridge test: is b reachable from a without this edge?
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : e) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<int> seen(n, 0), stack{a};
    seen[a] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!seen[w]++)
                stack.push_back(w);
    }
    Edges contracted;
    for (auto [u, v] : e)
        contracted.push_back({u == b ? a : u, v == b ? a : v});
    if (!seen[b])
        return x * tutte(n, contracted, x, y);
    return tutte(n, e, x, y) + tutte(n, contracted, x, y);
}

} // namespace oracle

#endif // R2POLY_TESTS_ORACLES_HPP
