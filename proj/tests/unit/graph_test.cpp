#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace r2poly;
using testutil::edges_of;

TEST(EdgeSubset, HexAndMaskRoundTrip)
{
    Rng rng(1);
    for (std::size_t m : {1u, 5u, 63u, 64u, 65u, 130u}) {
        EdgeSubset s(m);
        for (std::size_t e = 0; e < m; ++e)
            s.set(e, rng.coin());
        EXPECT_EQ(EdgeSubset::from_hex(s.to_hex(), m), s);
        if (m <= 64) {
            EXPECT_EQ(EdgeSubset::from_mask(s.to_mask(), m), s);
        }
    }
    EXPECT_THROW(EdgeSubset::from_mask(0b100, 2), InvalidInput);
    EXPECT_THROW(EdgeSubset::from_hex("zz", 8), InvalidInput);
}

TEST(Graph, RejectsLoopsAndDuplicates)
{
    EXPECT_THROW(Graph(2, {{0, 0}}), InvalidInput);
    EXPECT_THROW(Graph(2, {{0, 1}, {1, 0}}), InvalidInput);
    EXPECT_THROW(Graph(2, {{0, 2}}), InvalidInput);
}

TEST(Components, KnownValues)
{
    const Graph k3 = graphs::complete(3);
    EXPECT_EQ(components(k3, k3.no_edges()).kappa, 3u);

    // Bipartite P3 with U = {u1, u2}, W = {w}.
    const BipartiteGraph p3(Graph(3, {{0, 2}, {1, 2}}), {0, 1}, {2});
    const auto full = components(p3, p3.graph().all_edges());
    EXPECT_EQ(full.kappa, 1u);
    EXPECT_EQ(full.pure_count, 1u);
    EXPECT_EQ(p3.u_side().size() - full.pure_count, 1u);

    const auto none = components(p3, p3.graph().no_edges());
    EXPECT_EQ(none.kappa, 3u);
    EXPECT_EQ(none.pure_count, 2u);
    EXPECT_FALSE(*none.components[none.component_of[2]].pure);
}

TEST(Components, MatchesRelaxationOracle)
{
    Rng rng(2);
    for (int c = 0; c < 200; ++c) {
        const Graph g = graphs::random_graph(1 + rng.below(9), rng.below(14), rng);
        const std::uint64_t mask = rng() & ((std::uint64_t{1} << g.m()) - 1);
        const EdgeSubset s = EdgeSubset::from_mask(mask, g.m());
        const int expect = oracle::kappa(static_cast<int>(g.n()), edges_of(g), mask);
        EXPECT_EQ(components(g, s).kappa, static_cast<std::size_t>(expect));
        EXPECT_EQ(count_components(g, s), static_cast<std::size_t>(expect));
    }
}

TEST(MaxMatching, KnownValues)
{
    const Graph p4 = graphs::path(4), c4 = graphs::cycle(4);
    EXPECT_EQ(max_matching(p4, p4.no_edges()), 0u);
    EXPECT_EQ(max_matching(p4, p4.all_edges()), 2u);
    EXPECT_EQ(max_matching(c4, c4.all_edges()), 2u);
}

TEST(MaxMatching, MatchesSubsetOracle)
{
    Rng rng(3);
    for (int c = 0; c < 300; ++c) {
        // Mix bipartite and general graphs so both code paths run.
        const Graph g = c % 2 ? graphs::random_graph(2 + rng.below(7), rng.below(13), rng)
                              : graphs::random_bipartite(1 + rng.below(5), 1 + rng.below(5), rng.below(13), rng).graph();
        const std::uint64_t mask = rng() & ((std::uint64_t{1} << g.m()) - 1);
        EXPECT_EQ(max_matching(g, EdgeSubset::from_mask(mask, g.m())),
                  static_cast<std::size_t>(oracle::max_matching(static_cast<int>(g.n()), edges_of(g), mask)));
    }
}

TEST(Forest, Recognition)
{
    EXPECT_TRUE(is_tree(graphs::path(5)));
    EXPECT_FALSE(is_tree(graphs::cycle(5)));
    EXPECT_TRUE(is_forest(graphs::empty(4)));
    EXPECT_FALSE(is_tree(graphs::empty(4)));
    Rng rng(4);
    for (int c = 0; c < 100; ++c) {
        const std::size_t n = 1 + rng.below(60);
        const Graph t = graphs::random_tree(n, rng);
        EXPECT_TRUE(is_tree(t)) << n;
        EXPECT_TRUE(is_forest(graphs::random_forest(n, rng)));
    }
}

TEST(TwoStretch, Shapes)
{
    const BipartiteGraph k2 = two_stretch(graphs::complete(2));
    EXPECT_EQ(k2.n(), 3u);
    EXPECT_EQ(k2.m(), 2u);
    EXPECT_TRUE(k2.in_w(2));

    const BipartiteGraph c6 = two_stretch(graphs::complete(3));
    EXPECT_EQ(c6.n(), 6u);
    EXPECT_EQ(c6.m(), 6u);
    for (Vertex w : c6.w_side())
        EXPECT_EQ(c6.graph().degree(w), 2u);
    EXPECT_EQ(count_components(c6.graph(), c6.graph().all_edges()), 1u);

    const BipartiteGraph e4 = two_stretch(graphs::empty(4));
    EXPECT_EQ(e4.n(), 4u);
    EXPECT_EQ(e4.m(), 0u);
    EXPECT_TRUE(e4.w_side().empty());
}

TEST(StretchSum, Shapes)
{
    const BipartiteGraph edge(Graph(2, {{0, 1}}), {0}, {1});
    const BipartiteGraph p = stretch_sum(graphs::complete(2), edge, 0);
    EXPECT_EQ(p.m(), 4u);
    EXPECT_EQ(p.n(), 5u);
    EXPECT_TRUE(is_tree(p.graph()));
    for (Vertex v = 0; v < p.n(); ++v)
        EXPECT_LE(p.graph().degree(v), 2u);

    const RootedGadget g2 = gadget_upsilon1(2);
    const BipartiteGraph s = stretch_sum(graphs::complete(3), g2.graph, g2.root);
    EXPECT_EQ(s.u_side().size(), 6u);
    EXPECT_EQ(s.w_side().size(), 12u);
    EXPECT_EQ(s.m(), 2 * 3 + 3 * g2.graph.m());
    EXPECT_EQ(s.m(), 18u);

    const BipartiteGraph one = stretch_sum(graphs::empty(1), g2.graph, g2.root);
    EXPECT_EQ(one.n(), g2.graph.n());
    EXPECT_EQ(one.m(), g2.graph.m());
}

TEST(Gadgets, Shapes)
{
    const RootedGadget a0 = gadget_upsilon1(0);
    EXPECT_EQ(a0.graph.n(), 3u);
    EXPECT_EQ(a0.graph.m(), 2u);
    const RootedGadget a1 = gadget_upsilon1(1);
    EXPECT_EQ(a1.graph.w_side().size(), 2u);
    EXPECT_EQ(a1.graph.graph().edges(), (std::vector<Edge>{{0, 2}, {1, 2}, {1, 3}}));
    const RootedGadget a2 = gadget_upsilon1(2);
    EXPECT_EQ(a2.graph.n(), 5u);
    EXPECT_EQ(a2.graph.m(), 4u);

    const RootedGadget b1 = gadget_upsilon2(1);
    EXPECT_EQ(b1.graph.u_side().size(), 3u);
    EXPECT_EQ(b1.graph.w_side().size(), 3u);
    EXPECT_EQ(b1.graph.m(), 6u);
    const RootedGadget b2 = gadget_upsilon2(2);
    EXPECT_EQ(b2.graph.w_side().size(), 5u);
    EXPECT_EQ(b2.graph.m(), 10u);
    EXPECT_THROW(gadget_upsilon2(0), InvalidInput);
    for (Vertex w : b2.graph.w_side())
        EXPECT_LE(b2.graph.graph().degree(w), 2u);
}

TEST(CloudBlowup, Counts)
{
    const BipartiteGraph k2 = cloud_blowup(graphs::complete(2), 3, 1);
    EXPECT_EQ(k2.n(), 8u);
    EXPECT_EQ(k2.m(), 12u);
    const BipartiteGraph v = cloud_blowup(graphs::empty(1), 5, 2);
    EXPECT_EQ(v.n(), 10u);
    EXPECT_EQ(v.m(), 0u);
    EXPECT_EQ(cloud_blowup(graphs::path(3), 3, 1).n(), 13u);
    EXPECT_THROW(cloud_blowup(graphs::complete(2), 4, 1), InvalidInput);
    EXPECT_THROW(cloud_blowup(graphs::complete(2), 2, 1), InvalidInput);
}

TEST(TreeDecomposition, Validation)
{
    const Graph c4 = graphs::cycle(4);
    TreeDecomposition td{Graph(2, {{0, 1}}), {{0, 1, 2}, {0, 2, 3}}};
    EXPECT_EQ(td.validate(c4), "");
    EXPECT_EQ(td.width(), 2u);
    TreeDecomposition missing{Graph(2, {{0, 1}}), {{0, 1, 2}, {0, 3}}};
    EXPECT_NE(missing.validate(c4), "");
    TreeDecomposition broken{Graph(3, {{0, 1}, {1, 2}}), {{0, 1, 2}, {2, 3}, {0, 3}}};
    EXPECT_NE(broken.validate(c4), "");
}

TEST(Primes, SmallValues)
{
    std::vector<std::uint64_t> got;
    for (std::uint64_t p = 0; p < 40; ++p)
        if (is_prime(p))
            got.push_back(p);
    EXPECT_EQ(got, (std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}));
    EXPECT_TRUE(is_prime(1'000'003));
    EXPECT_FALSE(is_prime(1'000'001));
}
