#ifndef R2POLY_SELFTEST_HPP
#define R2POLY_SELFTEST_HPP

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "chains.hpp"
#include "exact_eval.hpp"
#include "f2.hpp"
#include "graph.hpp"
#include "mixing.hpp"
#include "random_graphs.hpp"
#include "reductions.hpp"

namespace r2poly {

struct SelftestGroup {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

namespace detail {

inline std::string check_rank_consistency(bool quick)
{
    Rng rng(11);
    const std::size_t flips = quick ? 5'000 : 200'000;
    for (std::size_t shape = 0; shape < 4; ++shape) {
        const std::size_t rows = 3 + 5 * shape, cols = 4 + 19 * shape;
        F2Matrix a(rows, cols);
        RankProfile rp(a);
        for (std::size_t t = 0; t < flips / 4; ++t) {
            const std::size_t i = rng.below(rows), j = rng.below(cols);
            a.flip(i, j);
            if (rp.flip_entry(i, j) != rank(a))
                return "rank after flip " + std::to_string(t) + " on " + std::to_string(rows) + "x" +
                       std::to_string(cols) + " differs from elimination";
        }
    }
    return {};
}

inline std::string check_bis_identity(bool quick)
{
    Rng rng(12);
    const std::size_t cases = quick ? 20 : 120;
    for (std::size_t c = 0; c < cases; ++c) {
        const BipartiteGraph g = graphs::random_bipartite(1 + rng.below(5), 1 + rng.below(5), rng.below(11), rng);
        if (count_bis(g) != count_bis_oracle(g))
            return "independent-set identity fails on case " + std::to_string(c);
        const BigRational eta = make_rational(static_cast<long>(rng.below(5)) - 2, 2);
        if (count_pbis(g, eta) != count_pbis_oracle(g, eta))
            return "permissive identity fails on case " + std::to_string(c);
    }
    return {};
}

inline std::string check_tutte_rc(bool quick)
{
    Rng rng(13);
    const std::size_t cases = quick ? 10 : 60;
    for (std::size_t c = 0; c < cases; ++c) {
        const Graph g = graphs::random_graph(2 + rng.below(5), rng.below(9), rng);
        const BigRational x(3), y(2);
        const long kappa = static_cast<long>(count_components(g, g.all_edges()));
        const BigRational lhs = eval_tutte(g, x, y) * pow(x - 1, kappa) * pow(y - 1, static_cast<long>(g.n()));
        if (lhs != eval_z_rc(g, (x - 1) * (y - 1), y - 1).value)
            return "Tutte and random cluster forms disagree on case " + std::to_string(c);
        if (eval_r2(g, 1, 1).value != pow(BigRational(2), static_cast<long>(g.m())))
            return "R2 at lambda = mu = 1 is not 2^m";
    }
    return {};
}

inline std::string check_gadgets(bool)
{
    for (const BigRational& lambda : {make_rational(1, 3), make_rational(2, 5)})
        for (const BigRational& mu : {BigRational(1), BigRational(3), BigRational(-2)}) {
            for (std::size_t k = 0; k <= 3; ++k) {
                const auto [x, y] = gadget_xy_exact(GadgetKind::Upsilon1, k, lambda, mu);
                const BigRational li = 1 / lambda, m1 = mu + 1;
                if (x != pow(m1, static_cast<long>(k + 1)) + mu * mu + li - 1 ||
                    y != m1 * (pow(m1, static_cast<long>(k + 1)) + li - 1))
                    return "first gadget closed form fails at k=" + std::to_string(k);
            }
        }
    const BigRational lambda(1, 3), li(3);
    const auto [x, y] = gadget_xy_exact(GadgetKind::Upsilon2, 1, lambda, -2);
    if (x != li * li + 25 * li - 3 + 75 + li || y != -li * li - 25 * li - 1 + 25 + 3 * li)
        return "second gadget closed form fails at k=1";
    return {};
}

inline std::string check_chains(bool quick)
{
    const Graph p4 = graphs::path(4), k3 = graphs::complete(3);
    for (const auto& [g, params] : {std::pair{p4, ChainParams::rws(make_rational(1, 2), 1)},
                                    std::pair{k3, ChainParams::rc(2, make_rational(1, 3))}}) {
        const ExactChain chain(g, params);
        const auto db = chain.check_detailed_balance();
        if (!db.holds || !db.lazy)
            return std::string("detailed balance fails for the ") + family_name(params.family) + " chain";
        RunOptions opt;
        opt.steps = quick ? 2'000 : 20'000;
        opt.audit = true;
        run(g, params, g.no_edges(), opt, 5);
    }
    return {};
}

inline std::string check_mixing(bool quick)
{
    Rng rng(14);
    for (std::size_t c = 0; c < (quick ? 20 : 200); ++c) {
        const Graph t = graphs::random_tree(2 + rng.below(200), rng);
        if (dfs_tree_ordering(t).width > floor_log2(t.n()))
            return "DFS ordering exceeds floor(log2 n) on tree case " + std::to_string(c);
    }
    if (natural_ordering(graphs::path(8)).width != 1 || optimal_linear_width(graphs::cycle(6)).width != 2)
        return "path or cycle width is wrong";
    const Graph t = graphs::path(5);
    const auto r = congestion(t, dfs_tree_ordering(t), ChainParams::rws(make_rational(1, 2), 1));
    if (!r.bound_holds())
        return "congestion bound fails on the 5-vertex path";
    return {};
}

inline std::string check_reductions(bool quick)
{
    Rng rng(15);
    std::vector<std::uint64_t> primes{1'000'003, 1'000'033, 1'000'037};
    for (int c = 0; c < 200; ++c) {
        const long long v = static_cast<long long>(rng.below(2'000'001)) - 1'000'000;
        std::vector<ModP> res;
        for (auto p : primes)
            res.push_back(ModP::from_signed(p, v));
        if (crt_reconstruct(res, 1'000'000) != BigInt(std::to_string(v)))
            return "CRT round trip fails for " + std::to_string(v);
    }
    if (!quick) {
        const auto cert = tutte_via_oracle(graphs::complete(2), 4, 2);
        if (cert.value != 4)
            return "Tutte reduction does not recover T(K2; 4, 2) = 4";
        if (bis_via_pbis_oracle(graphs::complete(2), 8).value != 3)
            return "independent-set reduction does not recover 3 on K2";
    }
    return {};
}

} // namespace detail

/// Runs the identity groups; `quick` keeps the whole run well under a second.
inline std::vector<SelftestGroup> run_selftest(bool quick)
{
    const std::vector<std::pair<std::string, std::function<std::string(bool)>>> groups{
        {"rank-consistency", detail::check_rank_consistency},
        {"counting-identities", detail::check_bis_identity},
        {"tutte-random-cluster", detail::check_tutte_rc},
        {"gadget-closed-forms", detail::check_gadgets},
        {"chain-balance", detail::check_chains},
        {"linear-width-congestion", detail::check_mixing},
        {"modular-reductions", detail::check_reductions},
    };
    std::vector<SelftestGroup> out;
    for (const auto& [name, fn] : groups) {
        const auto t0 = std::chrono::steady_clock::now();
        SelftestGroup g;
        g.name = name;
        try {
            g.detail = fn(quick);
            g.passed = g.detail.empty();
        } catch (const std::exception& e) {
            g.detail = std::string("exception: ") + e.what();
        }
        g.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(g));
    }
    return out;
}

} // namespace r2poly

#endif // R2POLY_SELFTEST_HPP
