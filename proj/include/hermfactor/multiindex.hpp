#pragma once

// Multi-indices, canonical monomial bases and the exact combinatorial
// constants of the unit ball (monomial L2 norms, Bergman coefficients).
//
// All constants are "reduced": the common transcendental factor pi^n/n! is
// dropped, so p_alpha = (pi^n/n!) * monomial_norm_reduced(alpha) and the
// Bergman coefficient C_d = (n!/pi^n) * bergman_coefficient_reduced(n, d).

#include "hermfactor/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace hermfactor {

class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t n) : e_(n, 0) {}
    MultiIndex(std::initializer_list<unsigned> il) : e_(il) {}
    explicit MultiIndex(std::vector<unsigned> e) : e_(std::move(e)) {}

    static MultiIndex unit(std::size_t n, std::size_t k)
    {
        MultiIndex a(n);
        a.e_.at(k) = 1;
        return a;
    }

    std::size_t size() const { return e_.size(); }
    unsigned degree() const { return std::accumulate(e_.begin(), e_.end(), 0u); }
    unsigned operator[](std::size_t k) const { return e_[k]; }
    unsigned& operator[](std::size_t k) { return e_[k]; }
    const std::vector<unsigned>& exponents() const { return e_; }

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b)
    {
        if (a.size() != b.size()) throw DimensionError("multi-index length mismatch");
        MultiIndex c = a;
        for (std::size_t k = 0; k < a.size(); ++k) c.e_[k] += b.e_[k];
        return c;
    }

    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<unsigned> e_;
};

inline std::string to_string(const MultiIndex& a)
{
    std::string s = "(";
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(a[k]);
    }
    return s + ")";
}

inline Integer binomial(unsigned long top, unsigned long bottom)
{
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), top, bottom);
    return b;
}

inline Integer factorial(unsigned long k)
{
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), k);
    return f;
}

/// binom(n+m-1, m): number of monomials of degree m in n variables.
inline std::size_t dim_homogeneous(std::size_t n, std::size_t m)
{
    if (n == 0) throw DimensionError("ambient dimension must be positive");
    return binomial(n + m - 1, m).get_ui();
}

namespace detail {
inline void enumerate_rec(std::vector<unsigned>& cur, std::size_t pos, unsigned left,
                          std::vector<MultiIndex>& out)
{
    if (pos + 1 == cur.size()) {
        cur[pos] = left;
        out.emplace_back(cur);
        return;
    }
    for (unsigned v = left + 1; v-- > 0;) {
        cur[pos] = v;
        enumerate_rec(cur, pos + 1, left - v, out);
    }
}
}  // namespace detail

/// All multi-indices of degree m in n variables, lexicographically
/// descending (z1-major). This is the canonical basis order.
inline std::vector<MultiIndex> enumerate_degree(std::size_t n, unsigned m)
{
    if (n == 0) throw DimensionError("ambient dimension must be positive");
    std::vector<MultiIndex> out;
    out.reserve(dim_homogeneous(n, m));
    std::vector<unsigned> cur(n, 0);
    detail::enumerate_rec(cur, 0, m, out);
    return out;
}

/// d!/gamma!, the weight of z^gamma wbar^gamma in <z,w>^d.
inline Rational multinomial(unsigned d, const MultiIndex& gamma)
{
    if (gamma.degree() != d)
        throw DimensionError("multinomial: |gamma| = " + std::to_string(gamma.degree()) +
                             " differs from d = " + std::to_string(d));
    Integer num = factorial(d);
    for (std::size_t k = 0; k < gamma.size(); ++k) num /= factorial(gamma[k]);
    return Rational(num);
}

/// alpha! * n! / (n + |alpha|)!: squared L2 norm of z^alpha on the unit
/// ball with pi^n/n! factored out.
inline Rational monomial_norm_reduced(const MultiIndex& alpha)
{
    const std::size_t n = alpha.size();
    if (n == 0) throw DimensionError("ambient dimension must be positive");
    Integer num = factorial(n);
    for (std::size_t k = 0; k < n; ++k) num *= factorial(alpha[k]);
    Rational q(num, factorial(n + alpha.degree()));
    q.canonicalize();
    return q;
}

/// binom(n+d, n): coefficient of <z,w>^d in (1 - <z,w>)^{-(n+1)}.
inline Rational bergman_coefficient_reduced(std::size_t n, unsigned d)
{
    if (n == 0) throw DimensionError("ambient dimension must be positive");
    return Rational(binomial(n + d, n));
}

/// An ordered monomial basis with position lookup. Either homogeneous of a
/// single degree or graded (all degrees 0..m, each block lex-descending).
class MonomialBasis {
public:
    MonomialBasis() = default;

    static MonomialBasis homogeneous(std::size_t n, unsigned m)
    {
        MonomialBasis b;
        b.n_ = n;
        b.max_degree_ = m;
        b.graded_ = false;
        b.monomials_ = enumerate_degree(n, m);
        b.index();
        return b;
    }

    static MonomialBasis up_to(std::size_t n, unsigned m)
    {
        MonomialBasis b;
        b.n_ = n;
        b.max_degree_ = m;
        b.graded_ = true;
        for (unsigned k = 0; k <= m; ++k) {
            auto block = enumerate_degree(n, k);
            b.monomials_.insert(b.monomials_.end(), block.begin(), block.end());
        }
        b.index();
        return b;
    }

    std::size_t n() const { return n_; }
    unsigned max_degree() const { return max_degree_; }
    bool graded() const { return graded_; }
    std::size_t size() const { return monomials_.size(); }
    const MultiIndex& operator[](std::size_t k) const { return monomials_[k]; }
    const std::vector<MultiIndex>& monomials() const { return monomials_; }

    bool contains(const MultiIndex& a) const { return pos_.count(a) != 0; }
    std::size_t position(const MultiIndex& a) const
    {
        auto it = pos_.find(a);
        if (it == pos_.end()) throw DimensionError("monomial " + to_string(a) + " not in basis");
        return it->second;
    }

private:
    void index()
    {
        for (std::size_t k = 0; k < monomials_.size(); ++k) pos_.emplace(monomials_[k], k);
    }

    std::size_t n_ = 0;
    unsigned max_degree_ = 0;
    bool graded_ = false;
    std::vector<MultiIndex> monomials_;
    std::map<MultiIndex, std::size_t> pos_;
};

}  // namespace hermfactor
