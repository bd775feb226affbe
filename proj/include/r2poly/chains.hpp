#ifndef R2POLY_CHAINS_HPP
#define R2POLY_CHAINS_HPP

#include <array>
#include <cmath>
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
#include "rng.hpp"

namespace r2poly {

enum class ChainFamily {
    /// Rank-weighted subgraphs: pi(S) ~ lambda^rk(S) mu^|S|, bipartite rank.
    Rws,
    /// Random cluster: pi(S) ~ q^kappa(S) mu^|S|.
    Rc,
};

inline const char* family_name(ChainFamily f) { return f == ChainFamily::Rws ? "rws" : "rc"; }

struct ChainParams {
    ChainFamily family = ChainFamily::Rws;
    /// lambda for Rws, q for Rc.
    BigRational weight = 1;
    BigRational mu = 1;

    static ChainParams rws(BigRational lambda, BigRational mu) { return make(ChainFamily::Rws, lambda, mu); }
    static ChainParams rc(BigRational q, BigRational mu) { return make(ChainFamily::Rc, q, mu); }

    static ChainParams make(ChainFamily f, BigRational w, BigRational mu)
    {
        if (w <= 0 || mu <= 0)
            throw InvalidInput("chain parameters must be strictly positive");
        return ChainParams{f, std::move(w), std::move(mu)};
    }
};

/// min(1, weight^dstat mu^dsize): the Metropolis ratio before laziness.
inline BigRational acceptance_ratio(const ChainParams& p, int dstat, int dsize)
{
    BigRational r = pow(p.weight, dstat) * pow(p.mu, dsize);
    return r < 1 ? r : BigRational(1);
}

/// Unnormalised stationary weight of a state with the given statistic and size.
inline BigRational stationary_weight(const ChainParams& p, std::size_t stat, std::size_t size)
{
    return pow(p.weight, static_cast<long>(stat)) * pow(p.mu, static_cast<long>(size));
}

/// Single bond flip chain: pick e uniformly, propose X xor {e}, accept with
/// probability (1/2) min{1, ratio}. Rejected mass stays on X.
///
/// One 64-bit draw u decides each step: the move is taken iff u < T, where
/// T = floor(2^63 min{1, ratio}) is precomputed exactly for each of the six
/// (dstat, dsize) pairs. Laziness is the top bit, so the draw never needs a
/// second uniform and the per-step bias is below 2^-64.
class SingleBondFlipChain {
public:
    SingleBondFlipChain(const Graph& g, ChainParams params, const EdgeSubset& initial)
        : g_(&g), params_(std::move(params)), state_(initial)
    {
        if (initial.universe() != g.m())
            throw InvalidInput("initial subset has the wrong edge universe");
        if (g.m() == 0)
            throw InvalidInput("chain needs at least one edge");
        for (int ds = -1; ds <= 1; ++ds)
            for (int dz = -1; dz <= 1; dz += 2)
                threshold_[index(ds, dz)] = threshold(acceptance_ratio(params_, ds, dz));
        size_ = initial.count();
        if (params_.family == ChainFamily::Rws) {
            auto color = two_coloring(g);
            if (!color)
                throw InvalidInput("rank-weighted chain needs a bipartite graph");
            // Rank is invariant under transposition, so either colour class may be U.
            std::vector<std::size_t> index_of(g.n());
            std::size_t nu = 0, nw = 0;
            for (Vertex v = 0; v < g.n(); ++v)
                index_of[v] = (*color)[v] == 0 ? nu++ : nw++;
            F2Matrix b(nu, nw);
            for (EdgeId e = 0; e < g.m(); ++e) {
                auto [x, y] = g.edge(e);
                if ((*color)[x] != 0)
                    std::swap(x, y);
                cells_.push_back({index_of[x], index_of[y]});
                if (initial.contains(e))
                    b.set(index_of[x], index_of[y], true);
            }
            profile_.emplace(std::move(b));
            stat_ = profile_->rank();
        } else {
            stat_ = count_components(g, initial);
            seen_.assign(g.n(), 0);
        }
    }

    /// One step; returns true when the proposal was accepted.
    bool step(Rng& rng)
    {
        ++steps_;
        const auto e = static_cast<EdgeId>(rng.below(g_->m()));
        const std::uint64_t u = rng();
        if (u >> 63)
            return false;
        const bool adding = !state_.contains(e);
        const int dz = adding ? 1 : -1;
        int ds = 0;
        if (profile_) {
            const std::size_t r = profile_->flip_entry(cells_[e].first, cells_[e].second);
            ds = static_cast<int>(r) - static_cast<int>(stat_);
            if (u >= threshold_[index(ds, dz)]) {
                profile_->flip_entry(cells_[e].first, cells_[e].second);
                return false;
            }
        } else {
            ds = component_delta(e, adding);
            if (u >= threshold_[index(ds, dz)])
                return false;
        }
        state_.flip(e);
        stat_ = static_cast<std::size_t>(static_cast<long>(stat_) + ds);
        size_ = adding ? size_ + 1 : size_ - 1;
        ++accepted_;
        return true;
    }

    const EdgeSubset& state() const { return state_; }
    /// Cached rank (Rws) or component count (Rc).
    std::size_t statistic() const { return stat_; }
    std::size_t size() const { return size_; }
    std::uint64_t steps() const { return steps_; }
    std::uint64_t accepted() const { return accepted_; }
    const ChainParams& params() const { return params_; }

    /// Cached statistic against a from-scratch recomputation.
    bool audit() const
    {
        if (profile_)
            return stat_ == rank(profile_->source()) && profile_->consistent() && size_ == state_.count();
        return stat_ == count_components(*g_, state_) && size_ == state_.count();
    }

private:
    static std::size_t index(int ds, int dz) { return static_cast<std::size_t>((ds + 1) * 2 + (dz + 1) / 2); }

    static std::uint64_t threshold(const BigRational& p)
    {
        if (p >= 1)
            return std::uint64_t{1} << 63;
        if (bit_length(p.get_num()) <= 256 && bit_length(p.get_den()) <= 256) {
            BigInt scaled = p.get_num();
            scaled <<= 63;
            scaled /= p.get_den();
            return scaled.get_ui();
        }
        const long double approx = static_cast<long double>(to_double(p));
        return static_cast<std::uint64_t>(std::ldexp(approx, 63));
    }

    /// Change in kappa from flipping e, by a search in (V, X) that skips e.
    int component_delta(EdgeId e, bool adding)
    {
        auto [a, b] = g_->edge(e);
        ++epoch_;
        if (epoch_ == 0) {
            std::fill(seen_.begin(), seen_.end(), 0);
            epoch_ = 1;
        }
        stack_.clear();
        stack_.push_back(a);
        seen_[a] = epoch_;
        bool reached = false;
        while (!stack_.empty() && !reached) {
            const Vertex v = stack_.back();
            stack_.pop_back();
            for (EdgeId f : g_->incident(v)) {
                if (f == e || !state_.contains(f))
                    continue;
                const Vertex w = g_->edge(f).other(v);
                if (seen_[w] == epoch_)
                    continue;
                if (w == b) {
                    reached = true;
                    break;
                }
                seen_[w] = epoch_;
                stack_.push_back(w);
            }
        }
        if (reached)
            return 0;
        return adding ? -1 : 1;
    }

    const Graph* g_;
    ChainParams params_;
    EdgeSubset state_;
    std::size_t stat_ = 0, size_ = 0;
    std::uint64_t steps_ = 0, accepted_ = 0;
    std::array<std::uint64_t, 6> threshold_{};
    std::optional<RankProfile> profile_;
    std::vector<std::pair<std::size_t, std::size_t>> cells_;
    std::vector<std::uint32_t> seen_;
    std::uint32_t epoch_ = 0;
    std::vector<Vertex> stack_;
};

struct RunOptions {
    std::uint64_t steps = 0;
    std::uint64_t burnin = 0;
    /// Keep every thin-th state after burn-in.
    std::uint64_t thin = 1;
    /// Recompute the statistic from scratch after every step.
    bool audit = false;
};

struct Trace {
    std::vector<EdgeSubset> samples;
    std::vector<std::size_t> statistics;
    EdgeSubset final_state;
    std::size_t final_statistic = 0;
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;

    double acceptance_rate() const
    {
        return proposals ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0;
    }
};

/// Deterministic run: burnin + steps transitions from one seeded stream.
inline Trace run(const Graph& g, const ChainParams& params, const EdgeSubset& initial, const RunOptions& opt,
                 std::uint64_t seed, std::uint64_t stream = 0)
{
    if (opt.thin == 0)
        throw InvalidInput("thin must be positive");
    SingleBondFlipChain chain(g, params, initial);
    Rng rng(seed, stream);
    Trace t;
    for (std::uint64_t i = 0; i < opt.burnin + opt.steps; ++i) {
        chain.step(rng);
        if (opt.audit && !chain.audit())
            throw InternalInconsistency("cached chain statistic diverged at step " + std::to_string(i));
        if (i >= opt.burnin && (i - opt.burnin + 1) % opt.thin == 0) {
            t.samples.push_back(chain.state());
            t.statistics.push_back(chain.statistic());
        }
    }
    t.final_state = chain.state();
    t.final_statistic = chain.statistic();
    t.proposals = chain.steps();
    t.accepted = chain.accepted();
    return t;
}

/// Histogram of sampled states (as masks, m <= 64) over independent replicas.
/// Replica r uses stream r of `seed`; the result does not depend on `threads`.
inline std::map<std::uint64_t, std::uint64_t> sample_histogram(const Graph& g, const ChainParams& params,
                                                               const EdgeSubset& initial, const RunOptions& opt,
                                                               std::uint64_t seed, std::size_t replicas,
                                                               std::size_t threads = 1)
{
    if (g.m() > 64)
        throw LimitExceeded("histograms key states by 64-bit masks");
    std::map<std::uint64_t, std::uint64_t> hist;
    std::mutex mu;
    parallel_for(replicas, threads, [&](std::size_t r) {
        Trace t = run(g, params, initial, opt, seed, r);
        std::map<std::uint64_t, std::uint64_t> local;
        for (const auto& s : t.samples)
            ++local[s.to_mask()];
        std::lock_guard lock(mu);
        for (auto [k, v] : local)
            hist[k] += v;
    });
    return hist;
}

struct IndependentSetSample {
    /// Membership per vertex of the underlying graph.
    std::vector<bool> members;
};

/// Turns an RWS(1/2, 1) sample S into an independent set: the U part is a
/// uniform vector of the left null space of B_S, then each W vertex with no
/// neighbour in that U part joins independently with probability 1/2.
template <class Urbg>
IndependentSetSample bis_sample_bridge(const BipartiteGraph& g, const EdgeSubset& rwm_sample, Urbg& rng)
{
    const std::vector<bool> beta = sample_left_nullspace(bipartite_adjacency(g, rwm_sample), rng);
    IndependentSetSample out{std::vector<bool>(g.n(), false)};
    for (std::size_t i = 0; i < g.u_side().size(); ++i)
        out.members[g.u_side()[i]] = beta[i];
    for (Vertex w : g.w_side()) {
        bool blocked = false;
        for (EdgeId e : g.graph().incident(w))
            blocked = blocked || out.members[g.graph().edge(e).other(w)];
        if (!blocked)
            out.members[w] = (rng() >> 63) != 0;
    }
    return out;
}

} // namespace r2poly

#endif // R2POLY_CHAINS_HPP
