#ifndef R2POLY_REDUCTIONS_HPP
#define R2POLY_REDUCTIONS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "exact_eval.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace r2poly {

/// Residue modulo a prime below 2^32.
class ModP {
public:
    ModP(std::uint64_t p, std::uint64_t v) : p_(p), v_(v % p) {}
    static ModP from_signed(std::uint64_t p, long long v)
    {
        long long r = v % static_cast<long long>(p);
        return ModP(p, static_cast<std::uint64_t>(r < 0 ? r + static_cast<long long>(p) : r));
    }

    std::uint64_t p() const { return p_; }
    std::uint64_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    friend ModP operator+(ModP a, ModP b) { return ModP(a.p_, a.v_ + b.v_); }
    friend ModP operator-(ModP a, ModP b) { return ModP(a.p_, a.v_ + a.p_ - b.v_); }
    friend ModP operator*(ModP a, ModP b)
    {
        return ModP(a.p_, static_cast<std::uint64_t>(static_cast<unsigned __int128>(a.v_) * b.v_ % a.p_));
    }
    ModP operator-() const { return ModP(p_, p_ - v_); }
    friend bool operator==(ModP a, ModP b) { return a.p_ == b.p_ && a.v_ == b.v_; }

    /// Inverse by the extended Euclidean algorithm.
    ModP inverse() const
    {
        if (v_ == 0)
            throw PreconditionFailed("0 has no inverse modulo " + std::to_string(p_));
        long long r0 = static_cast<long long>(p_), r1 = static_cast<long long>(v_), s0 = 0, s1 = 1;
        while (r1 != 0) {
            const long long q = r0 / r1;
            r0 -= q * r1;
            std::swap(r0, r1);
            s0 -= q * s1;
            std::swap(s0, s1);
        }
        return from_signed(p_, s0);
    }

    /// Power with a signed exponent; negative exponents invert first.
    ModP pow(long long e) const
    {
        ModP base = e < 0 ? inverse() : *this;
        unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
        ModP acc(p_, 1);
        while (n) {
            if (n & 1u)
                acc = acc * base;
            base = base * base;
            n >>= 1;
        }
        return acc;
    }

private:
    std::uint64_t p_, v_;
};

inline ModP bigint_mod_p(const BigInt& x, std::uint64_t p)
{
    BigInt r = x % BigInt(std::to_string(p));
    if (r < 0)
        r += BigInt(std::to_string(p));
    return ModP(p, r.get_ui());
}

/// num * den^-1 mod p.
inline ModP rational_mod_p(const BigRational& r, std::uint64_t p)
{
    if (!is_prime(p))
        throw InvalidInput(std::to_string(p) + " is not prime");
    const ModP den = bigint_mod_p(r.get_den(), p);
    if (den.is_zero())
        throw PreconditionFailed("denominator of " + to_fraction_string(r) + " is divisible by " + std::to_string(p));
    return bigint_mod_p(r.get_num(), p) * den.inverse();
}

/// The unique L in (-M/2, M/2] with L = r_i mod p_i, M the product of the
/// moduli. Requires M > 2 * bound so that every |L| <= bound is representable.
inline BigInt crt_reconstruct(const std::vector<ModP>& residues, const BigInt& bound)
{
    BigInt modulus = 1, value = 0;
    for (const ModP& r : residues) {
        const BigInt p(std::to_string(r.p()));
        BigInt g;
        mpz_gcd(g.get_mpz_t(), modulus.get_mpz_t(), p.get_mpz_t());
        if (g != 1)
            throw PreconditionFailed("CRT moduli are not pairwise coprime");
        // value + modulus * t = r (mod p)
        const ModP cur = bigint_mod_p(value, r.p());
        const ModP t = (r - cur) * bigint_mod_p(modulus, r.p()).inverse();
        value += modulus * BigInt(std::to_string(t.value()));
        modulus *= p;
    }
    if (modulus <= 2 * bound)
        throw PreconditionFailed("product of moduli " + modulus.get_str() + " does not exceed twice the bound " +
                                 bound.get_str());
    if (2 * value > modulus)
        value -= modulus;
    if (abs(value) > bound)
        throw InternalInconsistency("reconstructed value " + value.get_str() + " exceeds the bound");
    for (const ModP& r : residues)
        if (!(bigint_mod_p(value, r.p()) == r))
            throw InternalInconsistency("reconstructed value does not match its residues");
    return value;
}

// ---------------------------------------------------------------------------
// Gadget parameters

enum class GadgetKind { Upsilon1, Upsilon2 };

struct GadgetParams {
    std::uint64_t p = 0;
    std::uint64_t k = 0;
    GadgetKind kind = GadgetKind::Upsilon1;
};

/// Upsilon_2 exactly when mu = -2, Upsilon_1 otherwise.
inline GadgetKind gadget_for(const BigRational& mu) { return mu == -2 ? GadgetKind::Upsilon2 : GadgetKind::Upsilon1; }

inline RootedGadget make_gadget(GadgetKind kind, std::size_t k)
{
    return kind == GadgetKind::Upsilon1 ? gadget_upsilon1(k) : gadget_upsilon2(k);
}

inline std::size_t gadget_edges(GadgetKind kind, std::size_t k) { return kind == GadgetKind::Upsilon1 ? k + 2 : 4 * k + 2; }
inline std::size_t gadget_u_size(GadgetKind kind) { return kind == GadgetKind::Upsilon1 ? 2 : 3; }

struct GadgetResidues {
    ModP x;
    ModP y;
    bool satisfied() const { return !x.is_zero() && y.is_zero(); }
};

/// X = lambda Z'_p and Y = Z'_m + lambda Z'_p modulo p, from the closed forms
/// (Upsilon_1 at any mu; Upsilon_2 at mu = -2 only).
inline GadgetResidues gadget_closed_form_mod_p(GadgetKind kind, const BigRational& lambda, const BigRational& mu,
                                               std::uint64_t p, std::uint64_t k)
{
    const ModP li = rational_mod_p(lambda, p).inverse();
    const ModP one(p, 1);
    if (kind == GadgetKind::Upsilon1) {
        const ModP m1 = rational_mod_p(mu, p) + one;
        const ModP mu2 = rational_mod_p(mu * mu, p);
        const ModP pk = m1.pow(static_cast<long long>(k + 1));
        return {pk + mu2 + li - one, m1 * (pk + li - one)};
    }
    if (mu != -2)
        throw PreconditionFailed("the second gadget's closed form holds at mu = -2 only");
    const ModP t = ModP(p, 25).pow(static_cast<long long>(k));
    const ModP three(p, 3);
    const ModP x = li * li + t * li - three + three * t + li;
    const ModP y = -(li * li) - t * li - one + t + three * li;
    return {x, y};
}

/// Exact lambda Z'_p and Z'_m + lambda Z'_p of a gadget by enumeration.
inline std::pair<BigRational, BigRational> gadget_xy_exact(GadgetKind kind, std::size_t k, const BigRational& lambda,
                                                           const BigRational& mu)
{
    const RootedGadget gad = make_gadget(kind, k);
    const PurityPartition z = eval_zp_zm(gad.graph, gad.root, lambda, mu);
    return {lambda * z.pure, z.mixed + lambda * z.pure};
}

/// Smallest valid k in [1, min(p-1, max_k)] or nothing.
inline std::optional<std::uint64_t> gadget_k_for_prime(const BigRational& lambda, const BigRational& mu,
                                                       std::uint64_t p, std::uint64_t max_k)
{
    for (const BigRational* r : {&lambda, &mu})
        if (bigint_mod_p(r->get_num(), p).is_zero() || bigint_mod_p(r->get_den(), p).is_zero())
            return std::nullopt;
    const GadgetKind kind = gadget_for(mu);
    for (std::uint64_t k = 1; k < p && k <= max_k; ++k)
        if (gadget_closed_form_mod_p(kind, lambda, mu, p, k).satisfied())
            return k;
    return std::nullopt;
}

/// Direct search over primes p <= cap (p must not divide the numerators or
/// denominators of lambda and mu) for the first `count` primes admitting a k.
inline std::vector<GadgetParams> find_gadget_params(const BigRational& lambda, const BigRational& mu,
                                                    std::size_t count, std::uint64_t prime_cap,
                                                    std::uint64_t max_k = ~std::uint64_t{0})
{
    if (lambda == 0 || lambda == 1)
        throw ExcludedPoint("lambda must not be 0 or 1");
    if (mu == 0)
        throw ExcludedPoint("mu must be nonzero");
    std::vector<GadgetParams> out;
    for (std::uint64_t p = 2; p <= prime_cap && out.size() < count; ++p)
        if (is_prime(p))
            if (auto k = gadget_k_for_prime(lambda, mu, p, max_k))
                out.push_back({p, *k, gadget_for(mu)});
    if (out.size() < count)
        throw PreconditionFailed("found " + std::to_string(out.size()) + " of " + std::to_string(count) +
                                 " gadget primes below " + std::to_string(prime_cap));
    return out;
}

struct CongruenceCheck {
    bool holds = false;
    ModP lhs{2, 0};
    ModP rhs{2, 0};
    std::size_t stretch_sum_edges = 0;
};

/// R'_2(G) = lambda^(|V_H| |U|) X^|V_H| Z(H; 1/lambda - 1, mu^2) mod p for the
/// stretch-sum G of h and the gadget. The gadget condition is checked first,
/// from exact Z'_p and Z'_m, and its failure is a PreconditionFailed.
inline CongruenceCheck verify_zz_congruence(const Graph& h, const BigRational& lambda, const BigRational& mu,
                                            std::uint64_t p, std::uint64_t k, const EnumerationOptions& opt = {})
{
    if (!is_prime(p))
        throw InvalidInput(std::to_string(p) + " is not prime");
    if (lambda == 0 || lambda == 1 || mu == 0)
        throw ExcludedPoint("lambda must avoid {0, 1} and mu must be nonzero");
    const GadgetKind kind = gadget_for(mu);
    const auto [x_exact, y_exact] = gadget_xy_exact(kind, k, lambda, mu);
    const ModP x = rational_mod_p(x_exact, p), y = rational_mod_p(y_exact, p);
    if (x.is_zero() || !y.is_zero())
        throw PreconditionFailed("gadget condition fails at p=" + std::to_string(p) + ", k=" + std::to_string(k) +
                                 ": need X != 0 and Y == 0 mod p, got X=" + std::to_string(x.value()) +
                                 ", Y=" + std::to_string(y.value()));
    const RootedGadget gad = make_gadget(kind, k);
    const BipartiteGraph g = stretch_sum(h, gad.graph, gad.root);
    CongruenceCheck c;
    c.stretch_sum_edges = g.m();
    c.lhs = rational_mod_p(eval_r2_prime(g, lambda, mu, opt).value, p);
    const BigRational z = eval_z_rc(h, 1 / lambda - 1, mu * mu, opt).value;
    const long nh = static_cast<long>(h.n());
    c.rhs = rational_mod_p(lambda, p).pow(nh * static_cast<long>(gad.graph.u_side().size())) * x.pow(nh) *
            rational_mod_p(z, p);
    c.holds = c.lhs == c.rhs;
    return c;
}

// ---------------------------------------------------------------------------
// Tutte via R'_2 residues

struct PrimeQuery {
    std::uint64_t p = 0;
    std::uint64_t k = 0;
    std::uint64_t residue = 0;
    std::size_t query_vertices = 0;
    std::size_t query_edges = 0;
    std::string oracle;
};

struct ReductionCert {
    std::string kind;
    std::vector<PrimeQuery> queries;
    BigInt bound;
    BigInt L;
    /// The target value: T(h; x, y) or #BIS(g).
    BigRational value;
};

struct ReductionOptions {
    std::uint64_t prime_cap = 1000;
    EnumerationOptions enumeration;
    /// Workers for independent per-prime queries.
    std::size_t threads = 1;
};

struct TuttePoint {
    BigRational lambda, mu;
};

/// lambda and mu with (x-1)(y-1) = 1/lambda - 1 and y - 1 = mu^2 (mu > 0).
inline TuttePoint tutte_point(const BigRational& x, const BigRational& y)
{
    if (y == 1)
        throw ExcludedPoint("y = 1 forces mu = 0");
    BigRational mu;
    if (!rational_sqrt(y - 1, mu))
        throw PreconditionFailed("y - 1 = " + to_fraction_string(BigRational(y - 1)) + " is not a rational square");
    const BigRational prod = (x - 1) * (y - 1);
    if (prod == -1)
        throw ExcludedPoint("(x-1)(y-1) = -1 has no finite lambda");
    const BigRational lambda = 1 / (prod + 1);
    if (lambda == 1)
        throw ExcludedPoint("x = 1 gives lambda = 1");
    if (lambda == BigRational(1, 2))
        throw ExcludedPoint("(x-1)(y-1) = 1 gives lambda = 1/2, where the reduction does not apply");
    return {lambda, mu};
}

/// Recovers T(h; x, y) from residues of R'_2 on stretch-sums of h.
///
/// Z(h; 1/lambda - 1, mu^2) = L / (a^n d^2m) for lambda = a/b, mu = c/d and an
/// integer |L| <= 2^m |b-a|^n |a|^n c^2m d^2m. Each prime p gives
/// L = a^n d^2m lambda^(-n|U|) X^-n R'_2(G_p) mod p; CRT over the smallest
/// usable primes whose product exceeds twice the bound recovers L. A prime is
/// usable when its smallest valid k keeps the stretch-sum within the
/// enumeration limit.
inline ReductionCert tutte_via_oracle(const Graph& h, const BigRational& x, const BigRational& y,
                                      const ReductionOptions& opt = {})
{
    const TuttePoint pt = tutte_point(x, y);
    const BigInt a = pt.lambda.get_num(), b = pt.lambda.get_den();
    const BigInt c = pt.mu.get_num(), d = pt.mu.get_den();
    const std::size_t n = h.n(), m = h.m();
    const GadgetKind kind = gadget_for(pt.mu);

    ReductionCert cert;
    cert.kind = "tutte";
    cert.bound = pow(BigInt(2), m) * pow(BigInt(abs(b - a)), n) * pow(BigInt(abs(a)), n) * pow(c, 2 * m) *
                 pow(d, 2 * m);
    // Largest k whose stretch-sum fits the enumeration limit.
    std::uint64_t max_k = 0;
    while (2 * m + n * gadget_edges(kind, max_k + 1) <= opt.enumeration.limit)
        ++max_k;
    if (max_k == 0)
        throw LimitExceeded("even the smallest gadget makes the stretch-sum exceed the enumeration limit");

    std::vector<GadgetParams> chosen;
    BigInt product = 1;
    for (std::uint64_t p = 2; p <= opt.prime_cap && product <= 2 * cert.bound; ++p)
        if (is_prime(p))
            if (auto k = gadget_k_for_prime(pt.lambda, pt.mu, p, max_k)) {
                chosen.push_back({p, *k, kind});
                product *= BigInt(std::to_string(p));
            }
    if (product <= 2 * cert.bound)
        throw PreconditionFailed("not enough usable primes below " + std::to_string(opt.prime_cap) +
                                 " to exceed twice the bound " + cert.bound.get_str());

    cert.queries.resize(chosen.size());
    std::vector<ModP> residues(chosen.size(), ModP(2, 0));
    parallel_for(chosen.size(), opt.threads, [&](std::size_t i) {
        const auto [p, k, kd] = chosen[i];
        const auto [x_exact, y_exact] = gadget_xy_exact(kd, k, pt.lambda, pt.mu);
        const ModP xm = rational_mod_p(x_exact, p);
        if (xm.is_zero() || !rational_mod_p(y_exact, p).is_zero())
            throw InternalInconsistency("closed form and enumeration disagree on the gadget condition at p=" +
                                        std::to_string(p));
        const RootedGadget gad = make_gadget(kd, k);
        const BipartiteGraph g = stretch_sum(h, gad.graph, gad.root);
        EnumerationOptions eo = opt.enumeration;
        eo.threads = 1;
        const ModP r = rational_mod_p(eval_r2_prime(g, pt.lambda, pt.mu, eo).value, p);
        const long nl = static_cast<long>(n);
        const ModP lp = bigint_mod_p(a, p).pow(nl) * bigint_mod_p(d, p).pow(2 * static_cast<long>(m)) *
                        rational_mod_p(pt.lambda, p).pow(-nl * static_cast<long>(gadget_u_size(kd))) *
                        xm.pow(-nl) * r;
        residues[i] = lp;
        cert.queries[i] = {p, k, lp.value(), g.n(), g.m(), "r2prime"};
    });
    cert.L = crt_reconstruct(residues, cert.bound);
    const BigRational z = BigRational(cert.L) / BigRational(pow(a, n) * pow(d, 2 * m));
    const long kappa_e = static_cast<long>(count_components(h, h.all_edges()));
    cert.value = pow(x - 1, -kappa_e) * pow(y - 1, -static_cast<long>(n)) * z;
    return cert;
}

// ---------------------------------------------------------------------------
// #BIS via #PBIS residues

struct PbisParams {
    std::uint64_t p = 0;
    std::uint64_t k = 0;
};

/// ((1+eta)/(1-eta))^(2k) + 1 = 0 mod p with eta != 1 mod p, and p odd with
/// eta's numerator and denominator invertible.
inline bool pbis_condition(const BigRational& eta, std::uint64_t p, std::uint64_t k)
{
    if (p <= 2)
        return false;
    const ModP e = rational_mod_p(eta, p), one(p, 1);
    if (e.is_zero() || (e - one).is_zero() || (e + one).is_zero())
        return false;
    const ModP r = (one + e) * (one - e).inverse();
    return (r.pow(2 * static_cast<long long>(k)) + one).is_zero();
}

inline std::vector<PbisParams> find_pbis_params(const BigRational& eta, std::size_t count, std::uint64_t prime_cap)
{
    if (eta == 0 || eta == 1 || eta == -1)
        throw ExcludedPoint("eta must avoid {-1, 0, 1}");
    std::vector<PbisParams> out;
    for (std::uint64_t p = 3; p <= prime_cap && out.size() < count; p += 2) {
        if (!is_prime(p) || bigint_mod_p(eta.get_num(), p).is_zero() || bigint_mod_p(eta.get_den(), p).is_zero())
            continue;
        for (std::uint64_t k = 1; k < p; ++k)
            if (pbis_condition(eta, p, k)) {
                out.push_back({p, k});
                break;
            }
    }
    if (out.size() < count)
        throw PreconditionFailed("found " + std::to_string(out.size()) + " of " + std::to_string(count) +
                                 " primes for eta below " + std::to_string(prime_cap));
    return out;
}

/// Psi(x, y) mod p: the contribution of one edge cloud once both endpoint
/// vertex clouds carry the uniform labels x and y.
inline ModP psi_mod_p(int x, int y, const BigRational& eta, std::uint64_t p, std::uint64_t k)
{
    const ModP e = rational_mod_p(eta, p), one(p, 1);
    auto factor = [&](int a, int b) { return (a == 1 && b == 1) ? one + e : one - e; };
    const long long kp = static_cast<long long>(k * p);
    const ModP inner = factor(x, 0).pow(kp) * factor(y, 0).pow(kp) + factor(x, 1).pow(kp) * factor(y, 1).pow(kp);
    return inner.pow(static_cast<long long>(p - 1));
}

/// #PBIS of a query graph: the rank-polynomial route when it fits the
/// enumeration limit, otherwise the twin-class sum.
inline std::pair<BigRational, std::string> pbis_oracle(const BipartiteGraph& g, const BigRational& eta,
                                                       const EnumerationOptions& opt)
{
    if (g.m() <= opt.limit)
        return {count_pbis(g, eta, opt), "r2prime"};
    return {count_pbis_by_twin_classes(g, eta), "twin-classes"};
}

/// Recovers #BIS(g) (0 <= #BIS <= 2^n) from #PBIS residues on cloud blow-ups.
///
/// Only k = 1 is used. A vertex cloud of kp vertices with h ones has
/// C(kp, h) = C(k, h/p) mod p when p divides h, which is nonzero for k > 1, so
/// the non-uniform cloud labelings do not cancel and the congruence with #BIS
/// fails in general (K2 at eta = 3, p = 13, k = 3 gives 11, not 3). With k = 1
/// the condition reads eta^2 = -1 mod p, so the usable primes are the odd
/// prime factors of a^2 + b^2 for eta = a/b.
inline ReductionCert bis_via_pbis_oracle(const Graph& g, const BigRational& eta, const ReductionOptions& opt = {})
{
    if (eta == 0 || eta == 1 || eta == -1)
        throw ExcludedPoint("eta must avoid {-1, 0, 1}");
    ReductionCert cert;
    cert.kind = "bis";
    cert.bound = pow(BigInt(2), g.n());
    std::vector<PbisParams> chosen;
    BigInt product = 1;
    for (std::uint64_t p = 3; p <= opt.prime_cap && product <= 2 * cert.bound; p += 2) {
        if (!is_prime(p))
            continue;
        if (pbis_condition(eta, p, 1)) {
            chosen.push_back({p, 1});
            product *= BigInt(std::to_string(p));
        }
    }
    if (product <= 2 * cert.bound)
        throw PreconditionFailed("primes p <= " + std::to_string(opt.prime_cap) +
                                 " with eta^2 = -1 mod p have product " + product.get_str() +
                                 ", need more than twice " + cert.bound.get_str());
    cert.queries.resize(chosen.size());
    std::vector<ModP> residues(chosen.size(), ModP(2, 0));
    parallel_for(chosen.size(), opt.threads, [&](std::size_t i) {
        const auto [p, k] = chosen[i];
        const BipartiteGraph blown = cloud_blowup(g, p, k);
        EnumerationOptions eo = opt.enumeration;
        eo.threads = 1;
        const auto [value, route] = pbis_oracle(blown, eta, eo);
        residues[i] = rational_mod_p(value, p);
        cert.queries[i] = {p, k, residues[i].value(), blown.n(), blown.m(), route};
    });
    cert.L = crt_reconstruct(residues, cert.bound);
    cert.value = BigRational(cert.L);
    return cert;
}

} // namespace r2poly

#endif // R2POLY_REDUCTIONS_HPP
