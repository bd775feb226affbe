#ifndef R2POLY_EXACT_EVAL_HPP
#define R2POLY_EXACT_EVAL_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "f2.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace r2poly {

struct EnumerationOptions {
    /// Largest edge count enumerated over all 2^m subsets.
    std::size_t limit = 26;
    std::size_t threads = 1;
};

/// Number of subsets S per (statistic, |S|) pair. The statistic is the rank,
/// the component count, or |U| - kappa' depending on the producer.
class CoefficientTable {
public:
    CoefficientTable() = default;
    CoefficientTable(std::size_t max_stat, std::size_t max_size)
        : stats_(max_stat + 1), sizes_(max_size + 1), counts_(stats_ * sizes_, 0)
    {
    }

    void add(std::size_t stat, std::size_t size, std::uint64_t count = 1) { counts_[stat * sizes_ + size] += count; }
    std::uint64_t at(std::size_t stat, std::size_t size) const { return counts_[stat * sizes_ + size]; }
    std::size_t max_stat() const { return stats_ - 1; }
    std::size_t max_size() const { return sizes_ - 1; }

    CoefficientTable& operator+=(const CoefficientTable& o)
    {
        for (std::size_t i = 0; i < counts_.size(); ++i)
            counts_[i] += o.counts_[i];
        return *this;
    }
    friend bool operator==(const CoefficientTable&, const CoefficientTable&) = default;

    std::uint64_t total() const
    {
        std::uint64_t t = 0;
        for (auto c : counts_)
            t += c;
        return t;
    }

    /// Sum of count * x^stat * y^size (0^0 = 1).
    BigRational evaluate(const BigRational& x, const BigRational& y) const
    {
        std::vector<BigRational> xp(stats_), yp(sizes_);
        for (std::size_t i = 0; i < stats_; ++i)
            xp[i] = pow(x, static_cast<long>(i));
        for (std::size_t j = 0; j < sizes_; ++j)
            yp[j] = pow(y, static_cast<long>(j));
        BigRational sum = 0;
        for (std::size_t i = 0; i < stats_; ++i)
            for (std::size_t j = 0; j < sizes_; ++j)
                if (auto c = at(i, j))
                    sum += BigRational(BigInt(std::to_string(c))) * xp[i] * yp[j];
        return sum;
    }

private:
    std::size_t stats_ = 0, sizes_ = 0;
    std::vector<std::uint64_t> counts_;
};

struct EvalResult {
    BigRational value;
    /// Retained when m <= kTermTableLimit.
    std::optional<CoefficientTable> terms;
};

inline constexpr std::size_t kTermTableLimit = 20;

namespace detail {

inline void check_limit(std::size_t m, const EnumerationOptions& opt)
{
    if (m > opt.limit || m > 62)
        throw LimitExceeded("graph has " + std::to_string(m) + " edges; the subset enumeration limit is " +
                            std::to_string(std::min<std::size_t>(opt.limit, 62)));
}

inline std::uint64_t gray(std::uint64_t i) { return i ^ (i >> 1); }

/// Walks subsets of {0..m-1} in Gray-code order, so consecutive subsets
/// differ in one edge. The index range is split into chunks; each chunk builds
/// its own state from its first subset. State: ctor(mask), stat(), flip(e).
template <class MakeState>
CoefficientTable enumerate_gray(std::size_t m, std::size_t max_stat, const EnumerationOptions& opt,
                                MakeState make_state)
{
    check_limit(m, opt);
    const std::uint64_t total = std::uint64_t{1} << m;
    const std::size_t chunks = (opt.threads > 1 && m >= 12) ? opt.threads * 8 : 1;
    CoefficientTable result(max_stat, m);
    std::mutex merge;
    parallel_for(chunks, opt.threads, [&](std::size_t c) {
        const std::uint64_t begin = total / chunks * c;
        const std::uint64_t end = c + 1 == chunks ? total : total / chunks * (c + 1);
        if (begin >= end)
            return;
        CoefficientTable local(max_stat, m);
        std::uint64_t mask = gray(begin);
        auto state = make_state(mask);
        std::size_t size = static_cast<std::size_t>(std::popcount(mask));
        local.add(state.stat(), size);
        for (std::uint64_t i = begin + 1; i < end; ++i) {
            const auto e = static_cast<EdgeId>(std::countr_zero(i));
            mask ^= std::uint64_t{1} << e;
            size = (mask >> e) & 1u ? size + 1 : size - 1;
            local.add(state.flip(e), size);
        }
        std::lock_guard lock(merge);
        result += local;
    });
    return result;
}

class BipartiteRankState {
public:
    BipartiteRankState(const BipartiteGraph& g, std::uint64_t mask)
        : profile_(bipartite_adjacency(g, EdgeSubset::from_mask(mask, g.m())))
    {
        for (EdgeId e = 0; e < g.m(); ++e)
            cells_.push_back({g.side_index(g.u_end(e)), g.side_index(g.w_end(e))});
    }
    std::size_t stat() const { return profile_.rank(); }
    std::size_t flip(EdgeId e) { return profile_.flip_entry(cells_[e].first, cells_[e].second); }

private:
    RankProfile profile_;
    std::vector<std::pair<std::size_t, std::size_t>> cells_;
};

class SymmetricRankState {
public:
    SymmetricRankState(const Graph& g, std::uint64_t mask)
        : g_(&g), profile_(adjacency(g, EdgeSubset::from_mask(mask, g.m())))
    {
    }
    std::size_t stat() const { return profile_.rank(); }
    std::size_t flip(EdgeId e)
    {
        auto [a, b] = g_->edge(e);
        profile_.flip_entry(a, b);
        return profile_.flip_entry(b, a);
    }

private:
    const Graph* g_;
    RankProfile profile_;
};

/// Recomputes kappa (or |U| - kappa') with a small union-find per subset.
class ComponentState {
public:
    ComponentState(const Graph& g, std::uint64_t mask, const BipartiteGraph* bip)
        : g_(&g), bip_(bip), mask_(mask), parent_(g.n()), deg_(g.n()), pure_(g.n())
    {
        recompute();
    }
    std::size_t stat() const { return stat_; }
    std::size_t flip(EdgeId e)
    {
        mask_ ^= std::uint64_t{1} << e;
        recompute();
        return stat_;
    }

private:
    std::uint32_t find(std::uint32_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void recompute()
    {
        const std::size_t n = g_->n();
        for (std::uint32_t v = 0; v < n; ++v) {
            parent_[v] = v;
            deg_[v] = 0;
        }
        std::size_t kappa = n;
        for (std::uint64_t bits = mask_; bits; bits &= bits - 1) {
            auto [a, b] = g_->edge(static_cast<EdgeId>(std::countr_zero(bits)));
            ++deg_[a];
            ++deg_[b];
            auto ra = find(a), rb = find(b);
            if (ra != rb) {
                parent_[ra] = rb;
                --kappa;
            }
        }
        if (!bip_) {
            stat_ = kappa;
            return;
        }
        for (std::uint32_t v = 0; v < n; ++v)
            pure_[v] = 1;
        for (std::uint32_t v = 0; v < n; ++v)
            if (bip_->in_w(v) && deg_[v] != 2)
                pure_[find(v)] = 0;
        std::size_t pure_count = 0;
        for (std::uint32_t v = 0; v < n; ++v)
            if (find(v) == v && pure_[v])
                ++pure_count;
        stat_ = bip_->u_side().size() - pure_count;
    }

    const Graph* g_;
    const BipartiteGraph* bip_;
    std::uint64_t mask_;
    std::vector<std::uint32_t> parent_, deg_;
    std::vector<std::uint8_t> pure_;
    std::size_t stat_ = 0;
};

inline void require_w_degree_at_most_two(const BipartiteGraph& g)
{
    for (Vertex w : g.w_side())
        if (g.graph().degree(w) > 2)
            throw PreconditionFailed("W vertex " + g.graph().label(w) + " has degree " +
                                     std::to_string(g.graph().degree(w)) + " > 2");
}

inline EvalResult make_result(CoefficientTable table, const BigRational& x, const BigRational& y)
{
    EvalResult r{table.evaluate(x, y), std::nullopt};
    if (table.max_size() <= kTermTableLimit)
        r.terms = std::move(table);
    return r;
}

} // namespace detail

/// Counts by (rank of the bipartite adjacency, |S|).
inline CoefficientTable bipartite_rank_table(const BipartiteGraph& g, const EnumerationOptions& opt = {})
{
    const std::size_t max_rank = std::min(g.u_side().size(), g.w_side().size());
    return detail::enumerate_gray(g.m(), max_rank, opt,
                                  [&](std::uint64_t mask) { return detail::BipartiteRankState(g, mask); });
}

/// Counts by (rank of the full adjacency, |S|).
inline CoefficientTable adjacency_rank_table(const Graph& g, const EnumerationOptions& opt = {})
{
    return detail::enumerate_gray(g.m(), g.n(), opt,
                                  [&](std::uint64_t mask) { return detail::SymmetricRankState(g, mask); });
}

/// Counts by (kappa(S), |S|).
inline CoefficientTable component_table(const Graph& g, const EnumerationOptions& opt = {})
{
    return detail::enumerate_gray(g.m(), g.n(), opt,
                                  [&](std::uint64_t mask) { return detail::ComponentState(g, mask, nullptr); });
}

/// Counts by (|U| - kappa'(S), |S|), kappa' = number of pure components.
inline CoefficientTable pure_component_table(const BipartiteGraph& g, const EnumerationOptions& opt = {})
{
    return detail::enumerate_gray(g.m(), g.u_side().size(), opt, [&](std::uint64_t mask) {
        return detail::ComponentState(g.graph(), mask, &g);
    });
}

/// R'_2(G; lambda, mu): sum over S of lambda^rk(B_S) mu^|S|, B_S the bipartite adjacency.
inline EvalResult eval_r2_prime(const BipartiteGraph& g, const BigRational& lambda, const BigRational& mu,
                                const EnumerationOptions& opt = {})
{
    return detail::make_result(bipartite_rank_table(g, opt), lambda, mu);
}

/// R_2(G; lambda, mu) with the full symmetric adjacency.
inline EvalResult eval_r2(const Graph& g, const BigRational& lambda, const BigRational& mu,
                          const EnumerationOptions& opt = {})
{
    return detail::make_result(adjacency_rank_table(g, opt), lambda, mu);
}

/// Random cluster partition function Z(G; q, mu) = sum q^kappa(S) mu^|S|.
inline EvalResult eval_z_rc(const Graph& g, const BigRational& q, const BigRational& mu,
                            const EnumerationOptions& opt = {})
{
    return detail::make_result(component_table(g, opt), q, mu);
}

/// Tutte polynomial from its subset expansion.
inline BigRational eval_tutte(const Graph& g, const BigRational& x, const BigRational& y,
                              const EnumerationOptions& opt = {})
{
    const CoefficientTable t = component_table(g, opt);
    const long kappa_e = static_cast<long>(count_components(g, g.all_edges()));
    const long n = static_cast<long>(g.n());
    BigRational sum = 0;
    for (std::size_t k = 0; k <= t.max_stat(); ++k)
        for (std::size_t s = 0; s <= t.max_size(); ++s)
            if (auto c = t.at(k, s))
                sum += BigRational(BigInt(std::to_string(c))) * pow(x - 1, static_cast<long>(k) - kappa_e) *
                       pow(y - 1, static_cast<long>(s) - n + static_cast<long>(k));
    return sum;
}

/// R'_2 through pure-component counting (W-degrees <= 2 only).
inline EvalResult eval_r2_prime_pure(const BipartiteGraph& g, const BigRational& lambda, const BigRational& mu,
                                     const EnumerationOptions& opt = {})
{
    detail::require_w_degree_at_most_two(g);
    return detail::make_result(pure_component_table(g, opt), lambda, mu);
}

/// Number of independent sets by direct backtracking (n <= 64).
inline BigInt count_independent_sets(const Graph& g)
{
    if (g.n() > 64)
        throw LimitExceeded("independent-set enumeration supports at most 64 vertices");
    std::vector<std::uint64_t> adj(g.n(), 0);
    for (const Edge& e : g.edges()) {
        adj[e.a] |= std::uint64_t{1} << e.b;
        adj[e.b] |= std::uint64_t{1} << e.a;
    }
    std::uint64_t count = 0;
    // Vertices below i are decided; `blocked` are neighbours of chosen ones.
    auto go = [&](auto&& self, std::size_t i, std::uint64_t blocked) -> void {
        if (i == g.n()) {
            ++count;
            return;
        }
        self(self, i + 1, blocked);
        if (!((blocked >> i) & 1u))
            self(self, i + 1, blocked | adj[i]);
    };
    go(go, 0, 0);
    return BigInt(std::to_string(count));
}

inline constexpr std::size_t kBisOracleVertexLimit = 30;
inline constexpr std::size_t kPbisOracleVertexLimit = 24;

/// Independent sets counted by enumeration (n <= 30).
inline BigInt count_bis_oracle(const BipartiteGraph& g)
{
    if (g.n() > kBisOracleVertexLimit)
        throw LimitExceeded("independent-set oracle supports at most 30 vertices");
    return count_independent_sets(g.graph());
}

/// #BIS as 2^(|U|+|W|-|E|) R'_2(G; 1/2, 1).
inline BigInt count_bis(const BipartiteGraph& g, const EnumerationOptions& opt = {})
{
    const BigRational r = eval_r2_prime(g, make_rational(1, 2), 1, opt).value;
    const BigRational v = pow(BigRational(2), static_cast<long>(g.n()) - static_cast<long>(g.m())) * r;
    if (!is_integer(v))
        throw InternalInconsistency("independent-set count is not an integer: " + to_fraction_string(v));
    return v.get_num();
}

/// #PBIS(G; eta) as 2^|V| R'_2(G; 1/2, -eta).
inline BigRational count_pbis(const BipartiteGraph& g, const BigRational& eta, const EnumerationOptions& opt = {})
{
    return pow(BigRational(2), static_cast<long>(g.n())) * eval_r2_prime(g, make_rational(1, 2), -eta, opt).value;
}

/// #PBIS by summing over all 2^n labelings (n <= 24), tallied by w(sigma).
inline BigRational count_pbis_oracle(const BipartiteGraph& g, const BigRational& eta)
{
    const std::size_t n = g.n();
    if (n > kPbisOracleVertexLimit)
        throw LimitExceeded("labeling oracle supports at most 24 vertices");
    std::vector<std::uint64_t> adj(n, 0);
    for (const Edge& e : g.graph().edges()) {
        adj[e.a] |= std::uint64_t{1} << e.b;
        adj[e.b] |= std::uint64_t{1} << e.a;
    }
    std::vector<std::uint64_t> by_w(g.m() + 1, 0);
    std::uint64_t labels = 0;
    std::size_t w = 0;
    by_w[0] = 1;
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
        const auto v = static_cast<std::size_t>(std::countr_zero(i));
        const auto touched = static_cast<std::size_t>(std::popcount(adj[v] & labels));
        labels ^= std::uint64_t{1} << v;
        w = (labels >> v) & 1u ? w + touched : w - touched;
        ++by_w[w];
    }
    BigRational sum = 0;
    for (std::size_t k = 0; k <= g.m(); ++k)
        if (by_w[k])
            sum += BigRational(BigInt(std::to_string(by_w[k]))) * pow(1 + eta, static_cast<long>(k)) *
                   pow(1 - eta, static_cast<long>(g.m() - k));
    return sum;
}

/// #PBIS exactly, exploiting twin vertices (equal neighbourhoods) on one side.
/// Only the number of 1-labels inside each twin class matters; every vertex on
/// the other side then contributes (1-eta)^d + (1+eta)^s (1-eta)^(d-s), where
/// s counts its 1-labelled neighbours. Polynomial in the class sizes.
inline BigRational count_pbis_by_twin_classes(const BipartiteGraph& g, const BigRational& eta)
{
    const Graph& graph = g.graph();
    auto build_classes = [&](const std::vector<Vertex>& side) {
        std::map<std::vector<Vertex>, std::size_t> classes;
        for (Vertex v : side) {
            std::vector<Vertex> nbrs;
            for (EdgeId e : graph.incident(v))
                nbrs.push_back(graph.edge(e).other(v));
            std::sort(nbrs.begin(), nbrs.end());
            ++classes[nbrs];
        }
        return classes;
    };
    auto combos = [](const std::map<std::vector<Vertex>, std::size_t>& cls) {
        double c = 1;
        for (auto& [k, size] : cls)
            c *= static_cast<double>(size + 1);
        return c;
    };
    auto cu = build_classes(g.u_side()), cw = build_classes(g.w_side());
    const bool sum_over_u = combos(cu) <= combos(cw);
    const auto& classes_map = sum_over_u ? cu : cw;
    const auto& other_side = sum_over_u ? g.w_side() : g.u_side();

    std::vector<std::size_t> class_size;
    std::vector<std::size_t> class_of(graph.n(), static_cast<std::size_t>(-1));
    for (const auto& [nbrs, size] : classes_map) {
        (void)nbrs;
        class_size.push_back(size);
    }
    {
        std::size_t idx = 0;
        for (const auto& [nbrs, size] : classes_map) {
            (void)size;
            // Members are exactly the summed-side vertices with this neighbourhood.
            for (Vertex v : sum_over_u ? g.u_side() : g.w_side()) {
                std::vector<Vertex> mine;
                for (EdgeId e : graph.incident(v))
                    mine.push_back(graph.edge(e).other(v));
                std::sort(mine.begin(), mine.end());
                if (mine == nbrs)
                    class_of[v] = idx;
            }
            ++idx;
        }
    }
    // Group other-side vertices by the multiset of adjacent classes.
    std::map<std::vector<std::size_t>, std::size_t> groups;
    for (Vertex y : other_side) {
        std::vector<std::size_t> adj_classes(class_size.size(), 0);
        for (EdgeId e : graph.incident(y))
            ++adj_classes[class_of[graph.edge(e).other(y)]];
        ++groups[adj_classes];
    }
    // adj_classes[c] counts neighbours of y in class c; since class members
    // share neighbourhoods this is either 0 or the full class size.
    const std::size_t k = class_size.size();
    std::vector<std::vector<BigInt>> binom(k);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t h = 0; h <= class_size[c]; ++h) {
            BigInt b;
            mpz_bin_uiui(b.get_mpz_t(), class_size[c], h);
            binom[c].push_back(b);
        }
    const std::size_t max_deg = graph.n();
    std::vector<BigRational> plus(max_deg + 1), minus(max_deg + 1);
    for (std::size_t d = 0; d <= max_deg; ++d) {
        plus[d] = pow(1 + eta, static_cast<long>(d));
        minus[d] = pow(1 - eta, static_cast<long>(d));
    }
    std::vector<std::size_t> h(k, 0);
    BigRational total = 0;
    while (true) {
        BigRational term = 1;
        for (std::size_t c = 0; c < k; ++c)
            term *= binom[c][h[c]];
        for (const auto& [adj_classes, count] : groups) {
            std::size_t d = 0, s = 0;
            for (std::size_t c = 0; c < k; ++c)
                if (adj_classes[c]) {
                    d += class_size[c];
                    s += h[c];
                }
            const BigRational factor = minus[d] + plus[s] * minus[d - s];
            term *= pow(factor, static_cast<long>(count));
            if (term == 0)
                break;
        }
        total += term;
        std::size_t c = 0;
        while (c < k && h[c] == class_size[c])
            h[c++] = 0;
        if (c == k)
            break;
        ++h[c];
    }
    return total;
}

/// Matchings: subsets whose adjacency rank is 2|S|.
inline BigInt count_matchings(const Graph& g, const EnumerationOptions& opt = {})
{
    const CoefficientTable t = adjacency_rank_table(g, opt);
    std::uint64_t c = 0;
    for (std::size_t s = 0; 2 * s <= t.max_stat() && s <= t.max_size(); ++s)
        c += t.at(2 * s, s);
    return BigInt(std::to_string(c));
}

/// Perfect matchings: full-rank subsets of size n/2.
inline BigInt count_perfect_matchings(const Graph& g, const EnumerationOptions& opt = {})
{
    if (g.n() % 2 == 1) {
        detail::check_limit(g.m(), opt);
        return 0;
    }
    if (g.n() == 0)
        return 1;
    const CoefficientTable t = adjacency_rank_table(g, opt);
    const std::size_t half = g.n() / 2;
    if (half > t.max_size())
        return 0;
    return BigInt(std::to_string(t.at(g.n(), half)));
}

struct PurityPartition {
    /// Sum over S with the root in a pure component of lambda^-kappa' mu^|S|.
    BigRational pure;
    /// Same sum over S with the root in a mixed component.
    BigRational mixed;
};

/// Z'_p and Z'_m of a rooted gadget (W-degrees <= 2).
inline PurityPartition eval_zp_zm(const BipartiteGraph& upsilon, Vertex root, const BigRational& lambda,
                                  const BigRational& mu, const EnumerationOptions& opt = {})
{
    detail::require_w_degree_at_most_two(upsilon);
    detail::check_limit(upsilon.m(), opt);
    if (root >= upsilon.n() || !upsilon.in_u(root))
        throw InvalidInput("gadget root must be a U vertex");
    if (lambda == 0)
        throw PreconditionFailed("lambda must be nonzero");
    const std::size_t m = upsilon.m();
    const std::size_t max_k = upsilon.n();
    // tallies[pure?][kappa'][|S|]
    std::vector<std::uint64_t> tally(2 * (max_k + 1) * (m + 1), 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        const auto info = components(upsilon, EdgeSubset::from_mask(mask, m));
        const bool root_pure = *info.components[info.component_of[root]].pure;
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        ++tally[((root_pure ? 1 : 0) * (max_k + 1) + info.pure_count) * (m + 1) + size];
    }
    PurityPartition out{0, 0};
    for (int p = 0; p < 2; ++p)
        for (std::size_t k = 0; k <= max_k; ++k)
            for (std::size_t s = 0; s <= m; ++s)
                if (auto c = tally[(static_cast<std::size_t>(p) * (max_k + 1) + k) * (m + 1) + s]) {
                    BigRational term = BigRational(BigInt(std::to_string(c))) * pow(lambda, -static_cast<long>(k)) *
                                       pow(mu, static_cast<long>(s));
                    (p ? out.pure : out.mixed) += term;
                }
    return out;
}

} // namespace r2poly

#endif // R2POLY_EXACT_EVAL_HPP
