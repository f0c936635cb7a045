#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace hermfactor {

using Rational = mpq_class;
using Integer = mpz_class;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class NotHermitianError : public Error {
public:
    using Error::Error;
};

class BidegreeError : public Error {
public:
    using Error::Error;
};

/// Canonical "p/q" (or "p" for integers) string of a reduced rational.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "p", "-p" or "p/q"; throws Error on anything else or a zero
/// denominator.
inline Rational parse_rational(std::string_view text)
{
    std::string s(text);
    auto bad = [&] { return Error("invalid rational literal '" + s + "'"); };
    if (s.empty()) throw bad();
    std::size_t k = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    bool seen_digit = false, seen_slash = false, digit_after_slash = false;
    for (; k < s.size(); ++k) {
        char c = s[k];
        if (c >= '0' && c <= '9') {
            seen_digit = true;
            if (seen_slash) digit_after_slash = true;
        } else if (c == '/' && !seen_slash && seen_digit) {
            seen_slash = true;
        } else {
            throw bad();
        }
    }
    if (!seen_digit || (seen_slash && !digit_after_slash)) throw bad();
    if (s[0] == '+') s.erase(0, 1);
    Rational q;
    if (q.set_str(s, 10) != 0) throw bad();
    if (q.get_den() == 0) throw Error("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

/// Exact complex number with rational real and imaginary parts.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(const Rational& r) : re(r), im(0) { re.canonicalize(); }  // NOLINT
    GaussianRational(long v) : re(v), im(0) {}             // NOLINT
    GaussianRational(int v) : re(v), im(0) {}              // NOLINT
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i))
    {
        re.canonicalize();
        im.canonicalize();
    }

    static GaussianRational i_unit() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    GaussianRational conj() const { return {re, -im}; }
    /// |x|^2, always a nonnegative rational.
    Rational norm2() const { return re * re + im * im; }

    GaussianRational& operator+=(const GaussianRational& o)
    {
        re += o.re;
        if (sgn(o.im) != 0) im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o)
    {
        re -= o.re;
        if (sgn(o.im) != 0) im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o)
    {
        *this = *this * o;
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o)
    {
        *this = *this / o;
        return *this;
    }

    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }

    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b)
    {
        // Most coefficient data is real; skip the cross terms when it is.
        const bool ar = a.is_real(), br = b.is_real();
        if (ar && br) return {Rational(a.re * b.re), Rational(0)};
        if (br) return {Rational(a.re * b.re), Rational(a.im * b.re)};
        if (ar) return {Rational(a.re * b.re), Rational(a.re * b.im)};
        return {Rational(a.re * b.re - a.im * b.im), Rational(a.re * b.im + a.im * b.re)};
    }

    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b)
    {
        if (b.is_zero()) throw Error("division by zero");
        if (b.is_real()) return {Rational(a.re / b.re), Rational(a.im / b.re)};
        const Rational den = b.norm2();
        return {Rational((a.re * b.re + a.im * b.im) / den), Rational((a.im * b.re - a.re * b.im) / den)};
    }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b)
    {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

/// Expression-grammar rendering: "3/4", "-i", "(1/2+3/4*i)".
inline std::string to_string(const GaussianRational& g)
{
    if (g.is_real()) return to_string(g.re);
    if (sgn(g.re) == 0) {
        if (g.im == 1) return "i";
        if (g.im == -1) return "-i";
        return to_string(g.im) + "*i";
    }
    std::string s = "(" + to_string(g.re);
    if (sgn(g.im) > 0) s += "+";
    if (g.im == 1) s += "i";
    else if (g.im == -1) s += "-i";
    else s += to_string(g.im) + "*i";
    return s + ")";
}

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& g) { return os << to_string(g); }

}  // namespace hermfactor
