#ifndef R2POLY_RATIONAL_HPP
#define R2POLY_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "error.hpp"

namespace r2poly {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigRational make_rational(long num, long den = 1)
{
    if (den == 0)
        throw InvalidInput("zero denominator");
    BigRational r(num, den);
    r.canonicalize();
    return r;
}

inline BigRational make_rational(const BigInt& num, const BigInt& den = 1)
{
    if (den == 0)
        throw InvalidInput("zero denominator");
    BigRational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "a", "a/b", "-a/b" (whitespace-free). Integers only, no decimals.
inline BigRational parse_rational(std::string_view text)
{
    auto is_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+'))
            s.remove_prefix(1);
        if (s.empty())
            return false;
        for (char c : s)
            if (c < '0' || c > '9')
                return false;
        return true;
    };
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_int(num) || !is_int(den) || den.front() == '-' || den.front() == '+')
        throw InvalidInput("malformed fraction '" + std::string(text) + "'");
    auto strip_plus = [](std::string_view s) { return std::string(s.front() == '+' ? s.substr(1) : s); };
    BigInt n(strip_plus(num)), d(strip_plus(den));
    if (d == 0)
        throw InvalidInput("zero denominator in '" + std::string(text) + "'");
    return make_rational(n, d);
}

/// Canonical "num/den" form; integers print without a denominator.
inline std::string to_fraction_string(const BigRational& r)
{
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double to_double(const BigRational& r) { return r.get_d(); }

/// Integer power with 0^0 = 1 and negative exponents for nonzero bases.
inline BigRational pow(const BigRational& base, long exponent)
{
    if (exponent == 0)
        return 1;
    if (exponent < 0) {
        if (base == 0)
            throw PreconditionFailed("zero raised to a negative power");
        BigRational inv = 1 / base;
        return pow(inv, -exponent);
    }
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    return BigRational(num, den);
}

inline BigInt pow(const BigInt& base, unsigned long exponent)
{
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

inline BigRational abs(const BigRational& r) { return r < 0 ? BigRational(-r) : r; }

inline bool is_integer(const BigRational& r) { return r.get_den() == 1; }

/// Exact square root when r is the square of a rational.
inline bool rational_sqrt(const BigRational& r, BigRational& out)
{
    if (r < 0)
        return false;
    if (!mpz_perfect_square_p(r.get_num_mpz_t()) || !mpz_perfect_square_p(r.get_den_mpz_t()))
        return false;
    BigInt n, d;
    mpz_sqrt(n.get_mpz_t(), r.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), r.get_den_mpz_t());
    out = make_rational(n, d);
    return true;
}

inline std::size_t bit_length(const BigInt& v)
{
    return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

} // namespace r2poly

#endif // R2POLY_RATIONAL_HPP
