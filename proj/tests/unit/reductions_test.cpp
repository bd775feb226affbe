#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace r2poly;
using testutil::q;

namespace {

long long mod_inverse_by_search(long long a, long long p)
{
    a = ((a % p) + p) % p;
    for (long long x = 1; x < p; ++x)
        if (a * x % p == 1)
            return x;
    return -1;
}

long long power_mod(long long b, long long e, long long p)
{
    long long r = 1;
    b = ((b % p) + p) % p;
    for (long long i = 0; i < e; ++i)
        r = r * b % p;
    return r;
}

bool prime_by_division(long long n)
{
    if (n < 2)
        return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

} // namespace

TEST(ModularArithmetic, RationalResidues)
{
    EXPECT_EQ(rational_mod_p(q(1, 2), 5).value(), 3u);
    EXPECT_THROW(rational_mod_p(q(1, 3), 3), PreconditionFailed);
    EXPECT_THROW(rational_mod_p(q(1, 3), 9), InvalidInput);
    const long long inv7 = mod_inverse_by_search(7, 11);
    EXPECT_EQ(rational_mod_p(q(-2, 7), 11).value(), std::uint64_t(((-2 * inv7) % 11 + 11) % 11));
    Rng rng(1);
    for (int c = 0; c < 200; ++c) {
        const long num = long(rng.below(2001)) - 1000, den = 1 + long(rng.below(500));
        for (long long p : {7, 101, 997})
            if (den % p != 0) {
                const long long expect = ((num % p + p) % p) * mod_inverse_by_search(den, p) % p;
                EXPECT_EQ(rational_mod_p(q(num, den), std::uint64_t(p)).value(), std::uint64_t(expect));
            }
    }
}

TEST(ModularArithmetic, ChineseRemainder)
{
    EXPECT_EQ(crt_reconstruct({ModP(3, 1), ModP(5, 1)}, 5), 1);
    EXPECT_EQ(crt_reconstruct({ModP(3, 2), ModP(5, 3)}, 7), -7);
    EXPECT_THROW(crt_reconstruct({ModP(3, 2), ModP(5, 3)}, 10), PreconditionFailed);
    EXPECT_THROW(crt_reconstruct({ModP(3, 2), ModP(3, 2)}, 1), PreconditionFailed);
    Rng rng(2);
    const std::vector<std::uint64_t> primes{1009, 1013, 1019};
    for (int c = 0; c < 500; ++c) {
        const long long v = static_cast<long long>(rng.below(2'000'001)) - 1'000'000;
        std::vector<ModP> res;
        for (auto p : primes)
            res.push_back(ModP::from_signed(p, v));
        EXPECT_EQ(crt_reconstruct(res, 1'000'000), BigInt(std::to_string(v)));
    }
}

TEST(GadgetSearch, ConditionAndExclusions)
{
    // p = 3 divides the denominator of lambda and is skipped.
    const auto params = find_gadget_params(q(1, 3), 1, 2, 5);
    ASSERT_EQ(params.size(), 2u);
    EXPECT_EQ(params[0].p, 2u);
    EXPECT_EQ(params[1].p, 5u);
    EXPECT_EQ(params[1].k, 2u);
    // Direct check of 2^(k+1) + 3 - 1 = 0 mod 5 for the first gadget at mu = 1.
    EXPECT_EQ((power_mod(2, 3, 5) + 2) % 5, 0);
    EXPECT_TRUE(gadget_closed_form_mod_p(GadgetKind::Upsilon1, q(1, 3), 1, 5, 2).satisfied());
    EXPECT_FALSE(gadget_closed_form_mod_p(GadgetKind::Upsilon1, q(1, 3), 1, 5, 1).satisfied());

    // mu = -1: (mu + 1) = 0, so Y = 0 always and X = 1/lambda.
    for (std::uint64_t p : {5, 7, 11, 13})
        for (std::uint64_t k = 1; k < p; ++k)
            EXPECT_TRUE(gadget_closed_form_mod_p(GadgetKind::Upsilon1, q(2, 3), -1, p, k).satisfied());
    EXPECT_THROW(find_gadget_params(1, 2, 1, 100), ExcludedPoint);
    EXPECT_THROW(find_gadget_params(q(1, 3), 0, 1, 100), ExcludedPoint);
    EXPECT_THROW(find_gadget_params(q(1, 3), 1, 50, 20), PreconditionFailed);
}

TEST(GadgetSearch, ClosedFormMatchesEnumeration)
{
    for (const auto& [l, m] : {std::pair{q(1, 3), q(1)}, {q(2, 5), q(3)}, {q(1, 4), q(-2)}})
        for (std::uint64_t p : {7, 11, 13})
            for (std::size_t k = 1; k <= 3; ++k) {
                const GadgetKind kind = gadget_for(m);
                const auto [x, y] = gadget_xy_exact(kind, k, l, m);
                const auto r = gadget_closed_form_mod_p(kind, l, m, p, k);
                EXPECT_EQ(rational_mod_p(x, p), r.x);
                EXPECT_EQ(rational_mod_p(y, p), r.y);
            }
}

TEST(Congruence, StretchSums)
{
    const Graph p3 = graphs::path(3), k3 = graphs::complete(3);
    const CongruenceCheck a = verify_zz_congruence(p3, q(1, 3), 1, 5, 2);
    EXPECT_TRUE(a.holds);
    const CongruenceCheck b = verify_zz_congruence(k3, q(1, 3), 1, 5, 2);
    EXPECT_TRUE(b.holds);
    EXPECT_EQ(b.stretch_sum_edges, 18u);
    EXPECT_THROW(verify_zz_congruence(k3, q(1, 3), 1, 5, 1), PreconditionFailed);
    EXPECT_THROW(verify_zz_congruence(k3, 1, 1, 5, 2), ExcludedPoint);
    for (const auto& gp : find_gadget_params(q(2, 5), 3, 3, 200, 3))
        EXPECT_TRUE(verify_zz_congruence(p3, q(2, 5), 3, gp.p, gp.k).holds);
}

TEST(TutteReduction, RecoversDirectEvaluation)
{
    EXPECT_EQ(tutte_via_oracle(graphs::complete(2), 4, 2).value, 4);
    EXPECT_EQ(tutte_via_oracle(graphs::complete(2), 3, 5).value, 3);
    const Graph p3 = graphs::path(3);
    const ReductionCert c = tutte_via_oracle(p3, 4, 2);
    EXPECT_EQ(c.value, oracle::tutte(3, testutil::edges_of(p3), 4, 2));
    EXPECT_EQ(c.value, 16);
    for (const auto& qr : c.queries)
        EXPECT_EQ(qr.oracle, "r2prime");
    const Graph k3 = graphs::complete(3);
    EXPECT_EQ(tutte_via_oracle(k3, q(1, 2), 2).value, oracle::tutte(3, testutil::edges_of(k3), q(1, 2), 2));
    ReductionOptions two;
    two.threads = 2;
    EXPECT_EQ(tutte_via_oracle(k3, q(1, 2), 2, two).value, q(11, 4));
}

TEST(TutteReduction, RefusedPoints)
{
    const Graph k3 = graphs::complete(3);
    EXPECT_THROW(tutte_via_oracle(k3, 2, 4), PreconditionFailed);
    EXPECT_THROW(tutte_via_oracle(k3, 2, 2), ExcludedPoint);
    EXPECT_THROW(tutte_via_oracle(k3, 5, 1), ExcludedPoint);
    EXPECT_THROW(tutte_point(1, 2), ExcludedPoint);
    const TuttePoint pt = tutte_point(4, 2);
    EXPECT_EQ(pt.lambda, q(1, 4));
    EXPECT_EQ(pt.mu, 1);
}

TEST(PbisSearch, MatchesBruteForce)
{
    // eta = 3: (1 + eta) / (1 - eta) = -2 and 4^k = -1 mod p.
    std::vector<std::pair<long long, long long>> expect;
    for (long long p = 3; p <= 200 && expect.size() < 6; p += 2) {
        if (!prime_by_division(p) || p == 3 || 3 % p == 1 || (3 + 1) % p == 0)
            continue;
        for (long long k = 1; k < p; ++k)
            if (power_mod(4, k, p) == p - 1) {
                expect.push_back({p, k});
                break;
            }
    }
    const auto got = find_pbis_params(3, expect.size(), 200);
    ASSERT_EQ(got.size(), expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].p, std::uint64_t(expect[i].first));
        EXPECT_EQ(got[i].k, std::uint64_t(expect[i].second));
    }
    EXPECT_EQ(got[0].p, 5u);
    EXPECT_THROW(find_pbis_params(1, 1, 200), ExcludedPoint);
    EXPECT_THROW(find_pbis_params(-1, 1, 200), ExcludedPoint);
}

TEST(PbisSearch, EdgeCloudFactor)
{
    // Psi is 0 on (1, 1) and 1 elsewhere once eta^2 = -1 mod p.
    for (std::uint64_t p : {5, 13})
        for (int x = 0; x <= 1; ++x)
            for (int y = 0; y <= 1; ++y)
                EXPECT_EQ(psi_mod_p(x, y, 8, p, 1).value(), x && y ? 0u : 1u);
}

TEST(BisReduction, CloudCollapse)
{
    // K2 has 3 independent sets; eta = 8 squares to -1 modulo 5 and 13.
    const BipartiteGraph c5 = cloud_blowup(graphs::complete(2), 5, 1);
    EXPECT_EQ(rational_mod_p(count_pbis_by_twin_classes(c5, 8), 5).value(), 3u);
    const BipartiteGraph c13 = cloud_blowup(graphs::complete(2), 13, 1);
    EXPECT_EQ(rational_mod_p(count_pbis_by_twin_classes(c13, 8), 13).value(), 3u);
}

TEST(BisReduction, LargerCloudsDoNotCollapse)
{
    // eta = 3, p = 13, k = 3 meets the cloud condition, yet the residue is not
    // #BIS(K2) = 3: the non-uniform cloud labelings survive modulo p.
    EXPECT_TRUE(pbis_condition(3, 13, 3));
    const BipartiteGraph c = cloud_blowup(graphs::complete(2), 13, 3);
    EXPECT_EQ(rational_mod_p(count_pbis_by_twin_classes(c, 3), 13).value(), 11u);
}

TEST(BisReduction, Pipeline)
{
    const ReductionCert k2 = bis_via_pbis_oracle(graphs::complete(2), 8);
    EXPECT_EQ(k2.value, 3);
    ASSERT_EQ(k2.queries.size(), 2u);
    EXPECT_EQ(k2.queries[0].p, 5u);
    EXPECT_EQ(k2.queries[1].p, 13u);
    const Graph p3 = graphs::path(3);
    EXPECT_EQ(bis_via_pbis_oracle(p3, 8).value,
              BigRational(oracle::count_independent_sets(3, testutil::edges_of(p3))));
    // eta = 3 has no prime with eta^2 = -1: 3^2 + 1 = 10 = 2 * 5 and 5 divides 1 + eta.
    EXPECT_THROW(bis_via_pbis_oracle(graphs::complete(2), 3), PreconditionFailed);
    EXPECT_THROW(bis_via_pbis_oracle(graphs::complete(2), 1), ExcludedPoint);
}
