#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace asaw {

using Rational = mpq_class;
using BigInt = mpz_class;

// Accepts "p", "p/q", and optional leading '-'; result is canonicalized.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto valid = [](const std::string& part) {
        if (part.empty()) return false;
        std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') return false;
        return true;
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!num.empty() && num[0] == '+') num.erase(0, 1);
    if (!valid(num) || !valid(den) || den[0] == '-' || den[0] == '+')
        throw std::invalid_argument("malformed rational: " + s);
    BigInt p(num, 10), q(den, 10);
    if (q == 0) throw std::invalid_argument("zero denominator: " + s);
    Rational r(p, q);
    r.canonicalize();
    return r;
}

// Always "p/q", including q = 1.
inline std::string to_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline Rational pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (e < 0) {
        if (base == 0) throw std::domain_error("zero to a negative power");
        Rational inv = 1 / base;
        return pow(inv, -e);
    }
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(e));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline BigInt ceil(const Rational& r) {
    BigInt out;
    mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return out;
}

inline BigInt floor(const Rational& r) {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return out;
}

inline long ceil_long(const Rational& r) {
    BigInt c = ceil(r);
    if (!c.fits_slong_p()) throw std::overflow_error("ceil out of range");
    return c.get_si();
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline double to_double(const Rational& r) { return r.get_d(); }

inline BigInt binomial(unsigned long n, unsigned long k) {
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

inline Rational dyadic(const BigInt& k, unsigned long j) {
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, j);
    Rational r(k, den);
    r.canonicalize();
    return r;
}

}  // namespace asaw
