#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "test_util.hpp"

using namespace r2poly;
using testutil::q;

namespace {

/// Width of an ordering straight from the definition of the dangerous sets.
std::size_t width_oracle(const oracle::Edges& e, int n, const std::vector<EdgeId>& perm)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < perm.size(); ++i) {
        std::vector<int> before(n, 0), after(n, 0);
        for (std::size_t j = 0; j < perm.size(); ++j) {
            auto& side = j < i ? before : after;
            side[e[perm[j]].first] = side[e[perm[j]].second] = 1;
        }
        std::size_t d = 0;
        for (int v = 0; v < n; ++v)
            d += before[v] && after[v];
        best = std::max(best, d);
    }
    return best;
}

std::size_t optimal_width_oracle(const Graph& g)
{
    const auto e = testutil::edges_of(g);
    std::vector<EdgeId> perm(g.m());
    std::iota(perm.begin(), perm.end(), EdgeId{0});
    std::size_t best = g.n();
    do
        best = std::min(best, width_oracle(e, int(g.n()), perm));
    while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Statistic used by the chain: bipartite rank for RWS, components for RC.
struct Weights {
    std::vector<int> stat;
    std::vector<BigRational> w;
    BigRational z;
};

Weights weights_oracle(const Graph& g, const ChainParams& p)
{
    const auto e = testutil::edges_of(g);
    std::vector<int> side;
    if (p.family == ChainFamily::Rws)
        side = testutil::sides_of(BipartiteGraph::from_coloring(g));
    Weights out;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << g.m()); ++s) {
        const int st = p.family == ChainFamily::Rws ? oracle::bipartite_rank(int(g.n()), e, side, s)
                                                    : oracle::kappa(int(g.n()), e, s);
        out.stat.push_back(st);
        out.w.push_back(oracle::qpow(p.weight, st) * oracle::qpow(p.mu, __builtin_popcountll(s)));
        out.z += out.w.back();
    }
    return out;
}

/// Congestion over all (I, F) pairs, routing each along its path edge by edge.
BigRational congestion_oracle(const Graph& g, const std::vector<EdgeId>& perm, const ChainParams& p)
{
    const std::size_t m = g.m(), count = std::size_t{1} << m;
    const Weights wt = weights_oracle(g, p);
    std::map<std::pair<std::uint64_t, std::uint64_t>, BigRational> load;
    for (std::uint64_t i = 0; i < count; ++i)
        for (std::uint64_t f = 0; f < count; ++f) {
            const long len = __builtin_popcountll(i ^ f);
            const BigRational contrib = wt.w[i] * wt.w[f] * len;
            std::uint64_t h = i;
            for (EdgeId e : perm)
                if (((i ^ f) >> e) & 1u) {
                    const std::uint64_t next = h ^ (std::uint64_t{1} << e);
                    load[{h, next}] += contrib;
                    h = next;
                }
        }
    BigRational rho = 0;
    for (const auto& [tr, l] : load) {
        const BigRational c = BigRational(2 * long(m)) * l / (wt.z * std::min(wt.w[tr.first], wt.w[tr.second]));
        rho = std::max(rho, c);
    }
    return rho;
}

} // namespace

TEST(LinearWidth, PathsAndCycles)
{
    for (std::size_t n = 2; n <= 10; ++n)
        EXPECT_EQ(natural_ordering(graphs::path(n)).width, n == 2 ? 0u : 1u);
    Rng rng(3);
    for (std::size_t n = 3; n <= 9; ++n) {
        const Graph c = graphs::cycle(n);
        std::vector<EdgeId> perm(n);
        std::iota(perm.begin(), perm.end(), EdgeId{0});
        for (int t = 0; t < 5; ++t) {
            for (std::size_t i = n - 1; i > 0; --i)
                std::swap(perm[i], perm[rng.below(i + 1)]);
            EXPECT_GE(linear_width_of_ordering(c, perm).width, 2u);
        }
        EXPECT_EQ(natural_ordering(c).width, 2u);
    }
    EXPECT_EQ(natural_ordering(graphs::complete(2)).width, 0u);
}

TEST(LinearWidth, ProfileMatchesDefinition)
{
    Rng rng(4);
    for (int c = 0; c < 50; ++c) {
        const Graph g = graphs::random_graph(2 + rng.below(7), 1 + rng.below(12), rng);
        std::vector<EdgeId> perm(g.m());
        std::iota(perm.begin(), perm.end(), EdgeId{0});
        for (std::size_t i = perm.size(); i-- > 1;)
            std::swap(perm[i], perm[rng.below(i + 1)]);
        EXPECT_EQ(linear_width_of_ordering(g, perm).width, width_oracle(testutil::edges_of(g), int(g.n()), perm));
    }
    EXPECT_THROW(linear_width_of_ordering(graphs::path(4), {0, 0, 1}), InvalidInput);
    EXPECT_THROW(linear_width_of_ordering(graphs::path(4), {0, 1}), InvalidInput);
}

TEST(LinearWidth, OptimalAgreesWithPermutationSearch)
{
    EXPECT_EQ(optimal_linear_width(graphs::path(5)).width, 1u);
    EXPECT_EQ(optimal_linear_width(graphs::cycle(4)).width, 2u);
    Rng rng(5);
    std::vector<Graph> cases{graphs::complete(4), graphs::complete_bipartite(2, 3).graph(), graphs::star(5)};
    for (int c = 0; c < 12; ++c)
        cases.push_back(graphs::random_graph(3 + rng.below(4), 2 + rng.below(7), rng));
    for (const Graph& g : cases) {
        const EdgeOrdering o = optimal_linear_width(g);
        EXPECT_EQ(o.width, optimal_width_oracle(g));
        EXPECT_EQ(linear_width_of_ordering(g, o.perm).width, o.width);
    }
}

TEST(LinearWidth, DfsOrderingOnTrees)
{
    EXPECT_EQ(dfs_tree_ordering(graphs::star(5)).width, 1u);
    EXPECT_EQ(dfs_tree_ordering(graphs::path(8)).width, 1u);
    const EdgeOrdering bt = dfs_tree_ordering(graphs::complete_binary_tree(15));
    EXPECT_LE(bt.width, 3u);
    EXPECT_EQ(bt.width, width_oracle(testutil::edges_of(graphs::complete_binary_tree(15)), 15, bt.perm));
    Rng rng(6);
    for (int c = 0; c < 500; ++c) {
        const std::size_t n = 1 + rng.below(1000);
        EXPECT_LE(dfs_tree_ordering(graphs::random_tree(n, rng)).width, floor_log2(n));
    }
    for (int c = 0; c < 50; ++c) {
        const std::size_t n = 1 + rng.below(300);
        EXPECT_LE(dfs_tree_ordering(graphs::random_forest(n, rng)).width, floor_log2(n));
    }
    EXPECT_THROW(dfs_tree_ordering(graphs::cycle(4)), InvalidInput);
}

TEST(LinearWidth, TreeDecompositionOrdering)
{
    const Graph c6 = graphs::cycle(6);
    const TreeDecomposition td6{Graph(4, {{0, 1}, {1, 2}, {2, 3}}), {{0, 1, 5}, {1, 2, 5}, {2, 4, 5}, {2, 3, 4}}};
    const EdgeOrdering o6 = treedec_ordering(c6, td6);
    EXPECT_EQ(treedec_width_bound(c6, td6), 9u);
    EXPECT_LE(o6.width, 2u);

    // 3x3 grid, row-major ids; path decomposition sliding along rows.
    const Graph grid = graphs::grid(3, 3);
    std::vector<std::vector<Vertex>> bags;
    for (Vertex v = 0; v + 3 < 9; ++v)
        bags.push_back({v, Vertex(v + 1), Vertex(v + 2), Vertex(v + 3)});
    std::vector<Edge> path;
    for (std::size_t i = 0; i + 1 < bags.size(); ++i)
        path.push_back({Vertex(i), Vertex(i + 1)});
    const TreeDecomposition tdg{Graph(bags.size(), path), bags};
    EXPECT_EQ(tdg.validate(grid), "");
    EXPECT_EQ(tdg.width(), 3u);
    const EdgeOrdering og = treedec_ordering(grid, tdg);
    EXPECT_EQ(treedec_width_bound(grid, tdg), 16u);
    EXPECT_EQ(og.width, width_oracle(testutil::edges_of(grid), 9, og.perm));
    EXPECT_LE(og.width, 16u);
}

TEST(CanonicalPath, Examples)
{
    const EdgeOrdering sigma = natural_ordering(graphs::path(5));
    const EdgeSubset a = EdgeSubset::from_mask(0b1010, 4), e1 = EdgeSubset::from_mask(0b0001, 4);
    EXPECT_EQ(canonical_path(a, a, sigma).length(), 0u);
    EXPECT_EQ(canonical_path(a, a, sigma).states.size(), 1u);
    const auto single = canonical_path(EdgeSubset(4), e1, sigma);
    ASSERT_EQ(single.states.size(), 2u);
    EXPECT_EQ(single.states[1], e1);
    const EdgeOrdering rev = linear_width_of_ordering(graphs::path(5), {3, 2, 1, 0});
    const auto p = canonical_path(EdgeSubset::from_mask(0b0011, 4), EdgeSubset::from_mask(0b1100, 4), rev);
    ASSERT_EQ(p.length(), 4u);
    EXPECT_EQ(p.states[1].to_mask(), 0b1011u);
    EXPECT_EQ(p.states[2].to_mask(), 0b1111u);
    EXPECT_EQ(p.states[3].to_mask(), 0b1101u);
}

TEST(CanonicalPath, StatisticDifferenceBoundedByWidth)
{
    Rng rng(7);
    for (int c = 0; c < 30; ++c) {
        // Rank difference on forests, component difference on any graph.
        const bool forest = c % 2 == 0;
        const Graph g = forest ? graphs::random_forest(2 + rng.below(9), rng)
                               : graphs::random_graph(3 + rng.below(5), 1 + rng.below(10), rng);
        if (g.m() == 0)
            continue;
        const auto e = testutil::edges_of(g);
        const int n = int(g.n());
        const EdgeOrdering sigma = forest ? dfs_tree_ordering(g) : natural_ordering(g);
        auto w = [&](std::uint64_t s) { return forest ? oracle::max_matching(n, e, s) : oracle::kappa(n, e, s); };
        for (int t = 0; t < 300; ++t) {
            const std::uint64_t full = (std::uint64_t{1} << g.m()) - 1;
            const std::uint64_t i = rng.below(full + 1), f = rng.below(full + 1);
            const auto path = canonical_path(EdgeSubset::from_mask(i, g.m()), EdgeSubset::from_mask(f, g.m()), sigma);
            EXPECT_EQ(path.length(), std::size_t(__builtin_popcountll(i ^ f)));
            for (const auto& hs : path.states) {
                const std::uint64_t h = hs.to_mask(), cc = i ^ f ^ h;
                EXPECT_LE(std::abs(w(i) + w(f) - w(h) - w(cc)), int(sigma.width));
            }
        }
    }
}

TEST(Congestion, MatchesPairEnumeration)
{
    Rng rng(8);
    std::vector<std::pair<Graph, ChainParams>> cases{
        {graphs::complete(2), ChainParams::rws(1, 1)},
        {graphs::path(4), ChainParams::rws(q(1, 2), 1)},
        {graphs::star(4), ChainParams::rc(2, 1)},
        {graphs::cycle(4), ChainParams::rws(q(3, 2), q(1, 3))},
        {graphs::complete(3), ChainParams::rc(q(1, 3), q(5, 2))},
    };
    for (int c = 0; c < 6; ++c)
        cases.push_back({graphs::random_tree(3 + rng.below(5), rng), ChainParams::rws(q(1 + long(rng.below(3)), 3), 1)});
    for (const auto& [g, p] : cases) {
        const EdgeOrdering sigma = natural_ordering(g);
        const CongestionReport r = congestion(g, sigma, p);
        EXPECT_EQ(r.rho, congestion_oracle(g, sigma.perm, p));
        EXPECT_EQ(r.ell, sigma.width);
    }
}

TEST(Congestion, WithinWidthBound)
{
    const CongestionReport k2 = congestion(graphs::complete(2), natural_ordering(graphs::complete(2)),
                                           ChainParams::rws(1, 1));
    EXPECT_EQ(k2.bound, 2);
    EXPECT_TRUE(k2.bound_holds());

    const Graph p4 = graphs::path(4);
    const CongestionReport rp = congestion(p4, dfs_tree_ordering(p4), ChainParams::rws(q(1, 2), 1));
    EXPECT_EQ(rp.ell, 1u);
    EXPECT_EQ(rp.bound, 36);
    EXPECT_LE(rp.rho, 36);

    const Graph s4 = graphs::star(4);
    const CongestionReport rs = congestion(s4, natural_ordering(s4), ChainParams::rc(2, 1));
    EXPECT_EQ(rs.bound, 32 * pow(BigRational(2), long(rs.ell)));
    EXPECT_TRUE(rs.bound_holds());

    Rng rng(9);
    for (int c = 0; c < 20; ++c) {
        const Graph t = graphs::random_tree(2 + rng.below(10), rng);
        EXPECT_TRUE(congestion(t, dfs_tree_ordering(t), ChainParams::rws(q(1, 3), q(2))).bound_holds());
        const Graph g = graphs::random_graph(4, 2 + rng.below(5), rng);
        EXPECT_TRUE(congestion(g, natural_ordering(g), ChainParams::rc(q(3), q(1, 2))).bound_holds());
    }
    EXPECT_THROW(congestion(graphs::path(15), natural_ordering(graphs::path(15)), ChainParams::rws(1, 1)),
                 LimitExceeded);
}

TEST(ExactChainTest, KernelAndBalance)
{
    Rng rng(10);
    for (int c = 0; c < 10; ++c) {
        const Graph t = graphs::random_tree(2 + rng.below(8), rng);
        const Graph g = graphs::random_graph(4, 1 + rng.below(6), rng);
        for (const ExactChain& ch : {ExactChain(t, ChainParams::rws(q(1, 2), q(3, 2))), ExactChain(g, ChainParams::rc(2, q(1, 3)))}) {
            const auto r = ch.check_detailed_balance();
            EXPECT_TRUE(r.holds);
            EXPECT_TRUE(r.lazy);
            EXPECT_EQ(r.pairs_checked, ch.m() << (ch.m() - 1));
            BigRational total = 0;
            for (std::size_t s = 0; s < ch.states(); ++s)
                total += ch.pi_exact(s);
            EXPECT_EQ(total, 1);
        }
    }
}

TEST(ExactChainTest, TwoStateMixesInOneStep)
{
    const ExactChain k2(graphs::complete(2), ChainParams::rws(1, 1));
    for (std::size_t s = 0; s < 2; ++s) {
        const auto tv = tv_curve(k2, s, 3);
        EXPECT_DOUBLE_EQ(tv[0], 0.5);
        EXPECT_DOUBLE_EQ(tv[1], 0.0);
    }
    EXPECT_EQ(mixing_time_exact(k2, 0.25).tau, 1u);
}

TEST(ExactChainTest, PathMixingWithinBound)
{
    const Graph p7 = graphs::path(7);
    const ChainParams params = ChainParams::rws(q(1, 2), 1);
    const ExactChain chain(p7, params);
    const MixingReport mr = mixing_time_exact(chain, 0.25, 1'000'000, 2);
    const CongestionReport cr = congestion(p7, dfs_tree_ordering(p7), params);
    EXPECT_TRUE(mr.all_starts);
    const double pmin = chain.pi(chain.argmin_pi());
    EXPECT_LE(double(mr.tau), mixing_bound(cr.rho, pmin, 0.25));
    // TV from a fixed start never increases.
    const auto tv = tv_curve(chain, mr.worst_start, mr.tau + 5);
    for (std::size_t t = 1; t < tv.size(); ++t)
        EXPECT_LE(tv[t], tv[t - 1] + 1e-12);
    EXPECT_GT(tv[mr.tau - 1], 0.25);
    EXPECT_LE(tv[mr.tau], 0.25);
    EXPECT_THROW(mixing_time_exact(chain, 0.0), InvalidInput);
}

TEST(Encoding, InjectivePerTransition)
{
    Rng rng(11);
    for (int c = 0; c < 10; ++c) {
        const Graph t = graphs::random_tree(2 + rng.below(10), rng);
        const ExactChain chain(t, ChainParams::rws(q(1, 2), 1));
        EXPECT_TRUE(encoding_is_injective(t.m(), dfs_tree_ordering(t), &chain));
        EXPECT_TRUE(encoding_is_injective(t.m(), natural_ordering(t)));
    }
}
