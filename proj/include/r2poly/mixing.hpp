#ifndef R2POLY_MIXING_HPP
#define R2POLY_MIXING_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "chains.hpp"
#include "error.hpp"
#include "exact_eval.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace r2poly {

// ---------------------------------------------------------------------------
// Linear width

/// An edge ordering with its dangerous-vertex profile. profile[i] = |D_i| for
/// the cut before position i: vertices with an incident edge strictly before
/// i and one at or after i. profile[0] is always 0.
struct EdgeOrdering {
    std::vector<EdgeId> perm;
    std::vector<std::size_t> profile;
    std::size_t width = 0;
};

inline EdgeOrdering linear_width_of_ordering(const Graph& g, std::vector<EdgeId> perm)
{
    const std::size_t m = g.m();
    if (perm.size() != m)
        throw InvalidInput("ordering has " + std::to_string(perm.size()) + " entries for " + std::to_string(m) +
                           " edges");
    std::vector<char> seen(m, 0);
    for (EdgeId e : perm) {
        if (e >= m || seen[e])
            throw InvalidInput("ordering is not a permutation of the edge ids");
        seen[e] = 1;
    }
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> first(g.n(), none), last(g.n(), 0);
    for (std::size_t i = 0; i < m; ++i)
        for (Vertex v : {g.edge(perm[i]).a, g.edge(perm[i]).b}) {
            first[v] = std::min(first[v], i);
            last[v] = std::max(last[v], i);
        }
    // v is dangerous at cuts first[v]+1 .. last[v]; accumulate with a difference array.
    std::vector<long> diff(m + 1, 0);
    for (Vertex v = 0; v < g.n(); ++v)
        if (first[v] != none && first[v] < last[v]) {
            ++diff[first[v] + 1];
            --diff[last[v] + 1];
        }
    EdgeOrdering out{std::move(perm), std::vector<std::size_t>(m, 0), 0};
    long run = 0;
    for (std::size_t i = 0; i < m; ++i) {
        run += diff[i];
        out.profile[i] = static_cast<std::size_t>(run);
        out.width = std::max(out.width, out.profile[i]);
    }
    return out;
}

inline EdgeOrdering natural_ordering(const Graph& g)
{
    std::vector<EdgeId> perm(g.m());
    std::iota(perm.begin(), perm.end(), EdgeId{0});
    return linear_width_of_ordering(g, std::move(perm));
}

namespace detail {

/// Preorder of a forest where children are visited by increasing subtree size
/// (ties by vertex id). Each component is rooted at its smallest vertex.
/// Returns the tree edges in discovery order and the vertex preorder.
inline std::pair<std::vector<EdgeId>, std::vector<Vertex>> small_first_dfs(const Graph& t)
{
    const std::size_t n = t.n();
    std::vector<Vertex> parent(n, static_cast<Vertex>(-1));
    std::vector<EdgeId> parent_edge(n, 0);
    std::vector<std::size_t> size(n, 1);
    std::vector<char> visited(n, 0);
    std::vector<EdgeId> edges;
    std::vector<Vertex> preorder;
    for (Vertex root = 0; root < n; ++root) {
        if (visited[root])
            continue;
        // First pass: parents and a postorder for subtree sizes.
        std::vector<Vertex> stack{root}, comp;
        visited[root] = 1;
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (EdgeId e : t.incident(v)) {
                Vertex w = t.edge(e).other(v);
                if (visited[w])
                    continue;
                visited[w] = 1;
                parent[w] = v;
                parent_edge[w] = e;
                stack.push_back(w);
            }
        }
        for (auto it = comp.rbegin(); it != comp.rend(); ++it)
            if (*it != root)
                size[parent[*it]] += size[*it];
        // Second pass: ordered DFS.
        std::vector<Vertex> dfs{root};
        while (!dfs.empty()) {
            Vertex v = dfs.back();
            dfs.pop_back();
            preorder.push_back(v);
            if (v != root)
                edges.push_back(parent_edge[v]);
            std::vector<Vertex> kids;
            for (EdgeId e : t.incident(v)) {
                Vertex w = t.edge(e).other(v);
                if (parent[w] == v && parent_edge[w] == e)
                    kids.push_back(w);
            }
            std::sort(kids.begin(), kids.end(),
                      [&](Vertex x, Vertex y) { return size[x] != size[y] ? size[x] < size[y] : x < y; });
            for (auto it = kids.rbegin(); it != kids.rend(); ++it)
                dfs.push_back(*it);
        }
    }
    return {edges, preorder};
}

} // namespace detail

/// Edge discovery order of a smallest-subtree-first DFS. Width <= floor(log2 n).
inline EdgeOrdering dfs_tree_ordering(const Graph& t)
{
    if (!is_forest(t))
        throw InvalidInput("dfs_tree_ordering needs an acyclic graph");
    return linear_width_of_ordering(t, detail::small_first_dfs(t).first);
}

/// floor(log2 n) for n >= 1, and 0 for n = 0.
inline std::size_t floor_log2(std::size_t n) { return n ? static_cast<std::size_t>(std::bit_width(n)) - 1 : 0; }

/// Bags visited in smallest-subtree-first DFS order; each edge goes to the
/// first bag containing both endpoints, ties inside a bag by edge id.
inline EdgeOrdering treedec_ordering(const Graph& g, const TreeDecomposition& td)
{
    if (auto why = td.validate(g); !why.empty())
        throw InvalidInput("invalid tree decomposition: " + why);
    const auto bag_order = detail::small_first_dfs(td.tree).second;
    std::vector<char> placed(g.m(), 0);
    std::vector<EdgeId> perm;
    std::vector<char> in_bag(g.n(), 0);
    for (Vertex h : bag_order) {
        for (Vertex v : td.bags[h])
            in_bag[v] = 1;
        for (EdgeId e = 0; e < g.m(); ++e)
            if (!placed[e] && in_bag[g.edge(e).a] && in_bag[g.edge(e).b]) {
                placed[e] = 1;
                perm.push_back(e);
            }
        for (Vertex v : td.bags[h])
            in_bag[v] = 0;
    }
    return linear_width_of_ordering(g, std::move(perm));
}

inline std::size_t treedec_width_bound(const Graph& g, const TreeDecomposition& td)
{
    return (td.width() + 1) * (floor_log2(g.n()) + 1);
}

inline constexpr std::size_t kOptimalWidthLimit = 22;

/// Exact linear width by dynamic programming over prefix sets: the width of a
/// cut depends only on which edges precede it, so the best ordering of a
/// prefix set is independent of how the rest is ordered. O(2^m (m + n)).
inline EdgeOrdering optimal_linear_width(const Graph& g)
{
    const std::size_t m = g.m();
    if (m > kOptimalWidthLimit)
        throw LimitExceeded("optimal linear width supports at most " + std::to_string(kOptimalWidthLimit) +
                            " edges");
    if (m == 0)
        return linear_width_of_ordering(g, {});
    std::vector<std::uint32_t> inc;
    for (Vertex v = 0; v < g.n(); ++v) {
        std::uint32_t mask = 0;
        for (EdgeId e : g.incident(v))
            mask |= std::uint32_t{1} << e;
        if (std::popcount(mask) >= 2)
            inc.push_back(mask);
    }
    const std::uint32_t full = static_cast<std::uint32_t>((std::uint64_t{1} << m) - 1);
    auto cut = [&](std::uint32_t prefix) {
        std::uint8_t c = 0;
        for (auto mask : inc)
            if ((mask & prefix) && (mask & ~prefix & full))
                ++c;
        return c;
    };
    std::vector<std::uint8_t> best(std::size_t{1} << m, 0xff), choice(std::size_t{1} << m, 0);
    best[0] = 0;
    for (std::uint32_t s = 1; s <= full; ++s) {
        for (std::uint32_t bits = s; bits; bits &= bits - 1) {
            const auto e = static_cast<std::uint8_t>(std::countr_zero(bits));
            const std::uint32_t prev = s & ~(std::uint32_t{1} << e);
            const std::uint8_t w = std::max(best[prev], cut(prev));
            if (w < best[s]) {
                best[s] = w;
                choice[s] = e;
            }
        }
    }
    std::vector<EdgeId> perm(m);
    std::uint32_t s = full;
    for (std::size_t i = m; i-- > 0;) {
        perm[i] = choice[s];
        s &= ~(std::uint32_t{1} << choice[s]);
    }
    return linear_width_of_ordering(g, std::move(perm));
}

// ---------------------------------------------------------------------------
// Canonical paths

struct CanonicalPath {
    std::vector<EdgeSubset> states;
    std::size_t length() const { return states.empty() ? 0 : states.size() - 1; }
};

/// I = H_0, ..., H_k = F, flipping the edges of I xor F in the order sigma.
inline CanonicalPath canonical_path(const EdgeSubset& from, const EdgeSubset& to, const EdgeOrdering& sigma)
{
    const EdgeSubset diff = from ^ to;
    CanonicalPath path{{from}};
    EdgeSubset cur = from;
    for (EdgeId e : sigma.perm)
        if (diff.contains(e)) {
            cur.flip(e);
            path.states.push_back(cur);
        }
    return path;
}

// ---------------------------------------------------------------------------
// Exact chain on all 2^m states

namespace detail {

/// Rank (Rws, bipartite adjacency) or kappa (Rc) of every subset, by mask.
inline std::vector<std::uint16_t> state_statistics(const Graph& g, ChainFamily family)
{
    const std::size_t m = g.m();
    std::vector<std::uint16_t> stat(std::size_t{1} << m);
    auto walk = [&](auto state) {
        std::uint64_t mask = 0;
        stat[0] = static_cast<std::uint16_t>(state.stat());
        for (std::uint64_t i = 1; i < (std::uint64_t{1} << m); ++i) {
            const auto e = static_cast<EdgeId>(std::countr_zero(i));
            mask ^= std::uint64_t{1} << e;
            stat[mask] = static_cast<std::uint16_t>(state.flip(e));
        }
    };
    if (family == ChainFamily::Rws) {
        const BipartiteGraph b = BipartiteGraph::from_coloring(g);
        walk(BipartiteRankState(b, 0));
    } else {
        walk(ComponentState(g, 0, nullptr));
    }
    return stat;
}

inline std::size_t max_statistic(const Graph& g, ChainFamily family)
{
    if (family == ChainFamily::Rc)
        return g.n();
    auto color = two_coloring(g);
    if (!color)
        throw InvalidInput("rank-weighted chain needs a bipartite graph");
    const auto zeros = static_cast<std::size_t>(std::count(color->begin(), color->end(), 0));
    return std::min(zeros, g.n() - zeros);
}

} // namespace detail

inline constexpr std::size_t kExactChainLimit = 16;

struct DetailedBalanceReport {
    bool holds = true;
    bool lazy = true;
    std::size_t pairs_checked = 0;
};

/// Transition structure of the single bond flip chain on all 2^m subsets.
/// Weights and pi are exact; the operator used for TV curves runs in doubles.
class ExactChain {
public:
    ExactChain(const Graph& g, ChainParams params) : g_(&g), params_(std::move(params))
    {
        m_ = g.m();
        if (m_ > kExactChainLimit)
            throw LimitExceeded("exact chain supports at most " + std::to_string(kExactChainLimit) + " edges");
        if (m_ == 0)
            throw InvalidInput("chain needs at least one edge");
        stat_ = detail::state_statistics(g, params_.family);
        const std::size_t count = std::size_t{1} << m_;
        weight_.resize(count);
        partition_ = 0;
        for (std::size_t s = 0; s < count; ++s) {
            weight_[s] = stationary_weight(params_, stat_[s], static_cast<std::size_t>(std::popcount(s)));
            partition_ += weight_[s];
        }
        pi_.resize(count);
        for (std::size_t s = 0; s < count; ++s)
            pi_[s] = to_double(weight_[s] / partition_);
        // Move probabilities depend only on (dstat, dsize).
        double table[3][2];
        for (int ds = -1; ds <= 1; ++ds)
            for (int dz = 0; dz < 2; ++dz)
                table[ds + 1][dz] = to_double(acceptance_ratio(params_, ds, dz ? 1 : -1)) / (2.0 * double(m_));
        move_.resize(count * m_);
        hold_.resize(count);
        for (std::size_t s = 0; s < count; ++s) {
            double out = 0;
            for (std::size_t e = 0; e < m_; ++e) {
                const std::size_t t = s ^ (std::size_t{1} << e);
                const int ds = int(stat_[t]) - int(stat_[s]);
                const double p = table[ds + 1][(t >> e) & 1u];
                move_[s * m_ + e] = p;
                out += p;
            }
            hold_[s] = 1.0 - out;
        }
    }

    const Graph& graph() const { return *g_; }
    const ChainParams& params() const { return params_; }
    std::size_t m() const { return m_; }
    std::size_t states() const { return std::size_t{1} << m_; }
    std::uint16_t statistic(std::size_t s) const { return stat_[s]; }
    const BigRational& weight(std::size_t s) const { return weight_[s]; }
    const BigRational& partition() const { return partition_; }
    BigRational pi_exact(std::size_t s) const { return weight_[s] / partition_; }
    double pi(std::size_t s) const { return pi_[s]; }
    const std::vector<double>& pi() const { return pi_; }

    /// Exact P(s, s xor {e}) from the step rule.
    BigRational transition(std::size_t s, EdgeId e) const
    {
        const std::size_t t = s ^ (std::size_t{1} << e);
        const int ds = int(stat_[t]) - int(stat_[s]);
        const int dz = (t >> e) & 1u ? 1 : -1;
        return acceptance_ratio(params_, ds, dz) / BigRational(2 * static_cast<long>(m_));
    }

    /// Exact check of pi(s) P(s,t) = pi(t) P(t,s) on every adjacent pair, and
    /// of P(s,s) >= 1/2 on every state.
    DetailedBalanceReport check_detailed_balance() const
    {
        DetailedBalanceReport r;
        const BigRational half(1, 2);
        for (std::size_t s = 0; s < states(); ++s) {
            BigRational out = 0;
            for (EdgeId e = 0; e < m_; ++e) {
                const std::size_t t = s ^ (std::size_t{1} << e);
                const BigRational p = transition(s, e);
                out += p;
                if (s < t) {
                    ++r.pairs_checked;
                    if (weight_[s] * p != weight_[t] * transition(t, e))
                        r.holds = false;
                }
            }
            if (out > half)
                r.lazy = false;
        }
        return r;
    }

    std::size_t argmin_pi() const
    {
        std::size_t best = 0;
        for (std::size_t s = 1; s < states(); ++s)
            if (weight_[s] < weight_[best])
                best = s;
        return best;
    }

    /// out = in P for `width` interleaved distributions (in[s * width + j]).
    void apply(const std::vector<double>& in, std::vector<double>& out, std::size_t width) const
    {
        const std::size_t count = states();
        for (std::size_t t = 0; t < count; ++t) {
            double* o = &out[t * width];
            const double h = hold_[t];
            const double* it = &in[t * width];
            for (std::size_t j = 0; j < width; ++j)
                o[j] = it[j] * h;
            for (std::size_t e = 0; e < m_; ++e) {
                const std::size_t s = t ^ (std::size_t{1} << e);
                const double p = move_[s * m_ + e];
                const double* is = &in[s * width];
                for (std::size_t j = 0; j < width; ++j)
                    o[j] += is[j] * p;
            }
        }
    }

private:
    const Graph* g_;
    ChainParams params_;
    std::size_t m_ = 0;
    std::vector<std::uint16_t> stat_;
    std::vector<BigRational> weight_;
    BigRational partition_;
    std::vector<double> pi_, move_, hold_;
};

namespace detail {

/// Total variation with compensated summation.
inline double tv_column(const std::vector<double>& dist, std::size_t width, std::size_t col,
                        const std::vector<double>& pi)
{
    double sum = 0, comp = 0;
    for (std::size_t s = 0; s < pi.size(); ++s) {
        const double y = std::fabs(dist[s * width + col] - pi[s]) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return 0.5 * sum;
}

} // namespace detail

/// ||P^t(start, .) - pi||_TV for t = 0..t_max. Double precision; the error
/// per step is a few ulps per state, far below any tolerance used here.
inline std::vector<double> tv_curve(const ExactChain& chain, std::size_t start, std::size_t t_max)
{
    std::vector<double> cur(chain.states(), 0.0), next(chain.states());
    cur[start] = 1.0;
    std::vector<double> out{detail::tv_column(cur, 1, 0, chain.pi())};
    for (std::size_t t = 1; t <= t_max; ++t) {
        chain.apply(cur, next, 1);
        cur.swap(next);
        out.push_back(detail::tv_column(cur, 1, 0, chain.pi()));
    }
    return out;
}

struct MixingReport {
    double eps = 0.25;
    /// Max over the evaluated starts of tau_H(eps).
    std::size_t tau = 0;
    std::size_t worst_start = 0;
    std::vector<std::size_t> starts;
    std::vector<std::size_t> tau_per_start;
    bool all_starts = false;
};

inline constexpr std::size_t kAllStartsLimit = 12;

/// tau(eps) by stepping distributions until TV <= eps (TV from a fixed start
/// never increases). All starts when m <= 12, else {empty, E, argmin pi}.
/// Starts are advanced in interleaved blocks of eight.
inline MixingReport mixing_time_exact(const ExactChain& chain, double eps, std::size_t t_cap = 1'000'000,
                                      std::size_t threads = 1)
{
    if (!(eps > 0 && eps < 1))
        throw InvalidInput("eps must lie in (0, 1)");
    MixingReport r;
    r.eps = eps;
    r.all_starts = chain.m() <= kAllStartsLimit;
    if (r.all_starts) {
        r.starts.resize(chain.states());
        std::iota(r.starts.begin(), r.starts.end(), std::size_t{0});
    } else {
        r.starts = {0, chain.states() - 1, chain.argmin_pi()};
        std::sort(r.starts.begin(), r.starts.end());
        r.starts.erase(std::unique(r.starts.begin(), r.starts.end()), r.starts.end());
    }
    r.tau_per_start.assign(r.starts.size(), 0);
    constexpr std::size_t width = 8;
    const std::size_t blocks = (r.starts.size() + width - 1) / width;
    parallel_for(blocks, threads, [&](std::size_t b) {
        const std::size_t lo = b * width, hi = std::min(r.starts.size(), lo + width);
        std::vector<double> cur(chain.states() * width, 0.0), next(chain.states() * width);
        std::vector<char> done(width, 1);
        for (std::size_t j = lo; j < hi; ++j) {
            cur[r.starts[j] * width + (j - lo)] = 1.0;
            done[j - lo] = 0;
        }
        std::size_t remaining = hi - lo;
        for (std::size_t t = 0;; ++t) {
            for (std::size_t j = lo; j < hi; ++j)
                if (!done[j - lo] && detail::tv_column(cur, width, j - lo, chain.pi()) <= eps) {
                    done[j - lo] = 1;
                    r.tau_per_start[j] = t;
                    --remaining;
                }
            if (remaining == 0)
                break;
            if (t == t_cap)
                throw LimitExceeded("mixing time exceeds the step cap " + std::to_string(t_cap));
            chain.apply(cur, next, width);
            cur.swap(next);
        }
    });
    for (std::size_t j = 0; j < r.starts.size(); ++j)
        if (j == 0 || r.tau_per_start[j] > r.tau) {
            r.tau = r.tau_per_start[j];
            r.worst_start = r.starts[j];
        }
    return r;
}

// ---------------------------------------------------------------------------
// Congestion

inline constexpr std::size_t kCongestionLimit = 13;

struct CongestionReport {
    /// max over transitions (H, H') of the canonical-path congestion.
    BigRational rho;
    EdgeSubset from, to;
    EdgeId edge = 0;
    std::size_t ell = 0;
    /// 2 |E|^2 max(w, 1/w)^ell with w = lambda or q.
    BigRational bound;
    bool bound_holds() const { return rho <= bound; }
};

inline BigRational congestion_bound(const Graph& g, const ChainParams& params, std::size_t ell)
{
    const BigRational bar = params.weight >= 1 ? params.weight : BigRational(1 / params.weight);
    const long m = static_cast<long>(g.m());
    return BigRational(2 * m * m) * pow(bar, static_cast<long>(ell));
}

/// Exact congestion of the canonical paths for sigma.
///
/// rho(H,H') = 2m sum_{(I,F)} w(I) w(F) |gamma_IF| / (Z min(w(H), w(H'))).
/// Work in position space (bit p = edge sigma[p]). A transition flipping
/// position p from H is used by exactly the pairs with I = a | H[>=p] and
/// F = H[<p] | !H_p | b for free low bits a and high bits b, and
/// |gamma| = |a xor H[<p]| + 1 + |b xor H[>p]|. The sum factors into
/// per-high-part sums over a and per-low-part sums over b, with per-bit
/// marginals for the Hamming terms: O(m^2 2^m) big-integer operations.
inline CongestionReport congestion(const Graph& g, const EdgeOrdering& sigma, const ChainParams& params)
{
    const std::size_t m = g.m();
    if (m > kCongestionLimit)
        throw LimitExceeded("congestion supports at most " + std::to_string(kCongestionLimit) + " edges");
    if (m == 0)
        throw InvalidInput("chain needs at least one edge");
    if (sigma.perm.size() != m)
        throw InvalidInput("ordering does not match the graph");
    const auto stat = detail::state_statistics(g, params.family);
    const std::size_t smax = detail::max_statistic(g, params.family);
    // Integer weights a^s b^(smax-s) c^z d^(m-z), proportional to the rational ones.
    const BigInt a = params.weight.get_num(), b = params.weight.get_den();
    const BigInt c = params.mu.get_num(), d = params.mu.get_den();
    std::vector<BigInt> wtab((smax + 1) * (m + 1));
    for (std::size_t s = 0; s <= smax; ++s)
        for (std::size_t z = 0; z <= m; ++z)
            wtab[s * (m + 1) + z] = pow(a, s) * pow(b, smax - s) * pow(c, z) * pow(d, m - z);

    const std::size_t count = std::size_t{1} << m;
    std::vector<std::uint64_t> edge_mask(count, 0);
    std::vector<const BigInt*> w(count);
    BigInt total_weight = 0;
    for (std::size_t pm = 0; pm < count; ++pm) {
        if (pm)
            edge_mask[pm] = edge_mask[pm & (pm - 1)] |
                            (std::uint64_t{1} << sigma.perm[static_cast<std::size_t>(std::countr_zero(pm))]);
        w[pm] = &wtab[stat[edge_mask[pm]] * (m + 1) + static_cast<std::size_t>(std::popcount(pm))];
        total_weight += *w[pm];
    }

    BigInt best_num = -1, best_den = 1;
    std::size_t best_h = 0, best_p = 0;
    for (std::size_t p = 0; p < m; ++p) {
        const std::size_t low_count = std::size_t{1} << p;
        const std::size_t high_count = count >> p;           // patterns of positions >= p
        const std::size_t upper = m - p - 1;                  // positions > p
        // A[h], A1[h][i]: sums over low parts a with I = a | h << p.
        std::vector<BigInt> A(high_count), A1(high_count * p);
        for (std::size_t h = 0; h < high_count; ++h)
            for (std::size_t lo = 0; lo < low_count; ++lo) {
                const BigInt& x = *w[lo | (h << p)];
                A[h] += x;
                for (std::size_t i = 0; i < p; ++i)
                    if ((lo >> i) & 1u)
                        A1[h * p + i] += x;
            }
        // B[key], B1[key][j]: sums over high parts with F = key | hi << (p+1).
        const std::size_t keys = low_count << 1;
        std::vector<BigInt> B(keys), B1(keys * upper);
        for (std::size_t key = 0; key < keys; ++key)
            for (std::size_t hi = 0; hi < (std::size_t{1} << upper); ++hi) {
                const BigInt& x = *w[key | (hi << (p + 1))];
                B[key] += x;
                for (std::size_t j = 0; j < upper; ++j)
                    if ((hi >> j) & 1u)
                        B1[key * upper + j] += x;
            }
        BigInt sa, sbd, tot;
        for (std::size_t hm = 0; hm < count; ++hm) {
            const std::size_t l = hm & (low_count - 1);
            const std::size_t h = hm >> p;
            const std::size_t hi = hm >> (p + 1);
            const std::size_t key = l | ((((hm >> p) & 1u) ^ 1u) << p);
            sa = A[h];
            for (std::size_t i = 0; i < p; ++i)
                sa += (l >> i) & 1u ? BigInt(A[h] - A1[h * p + i]) : A1[h * p + i];
            sbd = 0;
            for (std::size_t j = 0; j < upper; ++j)
                sbd += (hi >> j) & 1u ? BigInt(B[key] - B1[key * upper + j]) : B1[key * upper + j];
            tot = sa * B[key] + A[h] * sbd;
            const BigInt& den = std::min(*w[hm], *w[hm ^ (std::size_t{1} << p)]);
            if (tot * best_den > best_num * den) {
                best_num = tot;
                best_den = den;
                best_h = hm;
                best_p = p;
            }
        }
    }
    CongestionReport r;
    r.rho = BigRational(BigInt(2 * static_cast<long>(m)) * best_num, total_weight * best_den);
    r.rho.canonicalize();
    r.from = EdgeSubset::from_mask(edge_mask[best_h], m);
    r.to = EdgeSubset::from_mask(edge_mask[best_h ^ (std::size_t{1} << best_p)], m);
    r.edge = sigma.perm[best_p];
    r.ell = sigma.width;
    r.bound = congestion_bound(g, params, sigma.width);
    return r;
}

/// Right-hand side of tau_H(eps) <= rho (log(1/pi(H)) + log(1/eps)).
inline double mixing_bound(const BigRational& rho, double pi_h, double eps)
{
    return to_double(rho) * (std::log(1.0 / pi_h) + std::log(1.0 / eps));
}

/// For each transition, the pairs routed through it map injectively under
/// (I, F) -> I xor F xor H-hat. Exhaustive; m <= 10 in practice.
inline bool encoding_is_injective(std::size_t m, const EdgeOrdering& sigma, const ExactChain* chain = nullptr)
{
    if (m > 14)
        throw LimitExceeded("injectivity check supports at most 14 edges");
    const std::size_t count = std::size_t{1} << m;
    std::vector<std::uint64_t> pos_to_edge(count, 0);
    for (std::size_t pm = 1; pm < count; ++pm)
        pos_to_edge[pm] = pos_to_edge[pm & (pm - 1)] |
                          (std::uint64_t{1} << sigma.perm[static_cast<std::size_t>(std::countr_zero(pm))]);
    std::vector<std::uint32_t> stamp(count, 0);
    std::uint32_t epoch = 0;
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t hm = 0; hm < count; ++hm) {
            ++epoch;
            const std::size_t other = hm ^ (std::size_t{1} << p);
            std::size_t hat = hm;
            if (chain && chain->weight(pos_to_edge[other]) < chain->weight(pos_to_edge[hm]))
                hat = other;
            const std::size_t low = (std::size_t{1} << p) - 1;
            for (std::size_t a = 0; a <= low; ++a)
                for (std::size_t b = 0; b < (count >> (p + 1)); ++b) {
                    const std::size_t i = a | (hm & ~low);
                    const std::size_t f = (hm & low) | ((((hm >> p) & 1u) ^ 1u) << p) | (b << (p + 1));
                    const std::size_t j = i ^ f ^ hat;
                    if (stamp[j] == epoch)
                        return false;
                    stamp[j] = epoch;
                }
        }
    return true;
}

} // namespace r2poly

#endif // R2POLY_MIXING_HPP
