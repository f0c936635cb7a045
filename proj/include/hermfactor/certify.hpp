#pragma once

// Exact inertia of Hermitian matrices over the Gaussian rationals.
//
// ldl_signature computes S M S^* = L D L^* with L unit lower triangular, D real
// diagonal and S invertible. Pivots are diagonal, chosen by largest |D|
// (ties to the lowest index). S is the pivoting permutation except when the
// remaining diagonal is all zero while an off-diagonal entry a = W(t, t+1) is
// not: then row t += a * row t+1 is folded into S, which makes the pivot
// 2|a|^2 > 0 and exposes the negative direction of that 2x2 block.

#include "hermfactor/matrix.hpp"
#include "hermfactor/rational.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace hermfactor {

struct Inertia {
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t zero = 0;

    friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Sparse row of the congruence transform: (column, value) pairs.
using SparseRow = std::vector<std::pair<std::size_t, GaussianRational>>;

struct SignatureCertificate {
    Matrix source;                     // the certified matrix M
    std::vector<std::size_t> permutation;  // permutation[t] = original index pivoted at step t
    std::vector<SparseRow> transform;  // rows of S
    Matrix lower;                      // L
    std::vector<Rational> diagonal;    // D
    Inertia inertia;
    std::optional<Vector> witness;     // v with v^* M v < 0
    std::size_t mixing_steps = 0;      // number of zero-diagonal shortcuts taken

    std::size_t size() const { return diagonal.size(); }
    bool positive_definite() const { return inertia.positive == size(); }
    bool positive_semidefinite() const { return inertia.negative == 0; }

    Matrix transform_matrix() const
    {
        const std::size_t n = size();
        Matrix s(n, n);
        for (std::size_t t = 0; t < transform.size(); ++t)
            for (const auto& [c, v] : transform[t]) s(t, c) = v;
        return s;
    }
};

namespace detail {

inline void sparse_axpy(SparseRow& dst, const SparseRow& src, const GaussianRational& a)
{
    for (const auto& [c, v] : src) {
        auto it = std::find_if(dst.begin(), dst.end(), [&](const auto& e) { return e.first == c; });
        if (it == dst.end()) dst.emplace_back(c, a * v);
        else it->second += a * v;
    }
    std::erase_if(dst, [](const auto& e) { return e.second.is_zero(); });
    std::sort(dst.begin(), dst.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
}

/// Multiply by the lcm of denominators, then fix the sign so the first
/// nonzero real part is positive.
inline Vector clear_denominators(Vector v)
{
    Integer l = 1;
    for (const auto& x : v) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.re.get_den_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.im.get_den_mpz_t());
    }
    GaussianRational scale{Rational(l), Rational(0)};
    for (const auto& x : v)
        if (!x.is_zero()) {
            if (sgn(x.re) < 0 || (sgn(x.re) == 0 && sgn(x.im) < 0)) scale = -scale;
            break;
        }
    for (auto& x : v) x *= scale;
    return v;
}

}  // namespace detail

inline SignatureCertificate ldl_signature(const Matrix& m)
{
    if (!m.is_hermitian()) throw NotHermitianError("ldl_signature: matrix is not Hermitian");
    const std::size_t n = m.rows();
    SignatureCertificate cert;
    cert.source = m;
    cert.lower = Matrix::identity(n);
    cert.diagonal.assign(n, Rational(0));
    cert.transform.resize(n);
    cert.permutation.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        cert.transform[k] = {{k, GaussianRational(1)}};
        cert.permutation[k] = k;
    }

    Matrix w = m;
    Matrix& l = cert.lower;

    auto swap_positions = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < n; ++j) std::swap(w(a, j), w(b, j));
        for (std::size_t i = 0; i < n; ++i) std::swap(w(i, a), w(i, b));
        for (std::size_t j = 0; j < a && j < b; ++j) std::swap(l(a, j), l(b, j));
        std::swap(cert.transform[a], cert.transform[b]);
        std::swap(cert.permutation[a], cert.permutation[b]);
    };

    std::size_t t = 0;
    for (; t < n; ++t) {
        std::size_t p = t;
        Rational best = abs(w(t, t).re);
        for (std::size_t k = t + 1; k < n; ++k) {
            Rational v = abs(w(k, k).re);
            if (v > best) {
                best = v;
                p = k;
            }
        }
        if (sgn(best) == 0) {
            std::size_t pk = n, pl = n;
            for (std::size_t k = t; k < n && pk == n; ++k)
                for (std::size_t j = k + 1; j < n; ++j)
                    if (!w(k, j).is_zero()) {
                        pk = k;
                        pl = j;
                        break;
                    }
            if (pk == n) break;  // trailing block is exactly zero
            swap_positions(t, pk);
            swap_positions(t + 1, pl);
            const GaussianRational a = w(t, t + 1);
            // row t += a * row t+1, column t += conj(a) * column t+1
            for (std::size_t j = t; j < n; ++j) w(t, j) += a * w(t + 1, j);
            for (std::size_t i = t; i < n; ++i) w(i, t) += a.conj() * w(i, t + 1);
            for (std::size_t j = 0; j < t; ++j) l(t, j) += a * l(t + 1, j);
            detail::sparse_axpy(cert.transform[t], cert.transform[t + 1], a);
            ++cert.mixing_steps;
        } else {
            swap_positions(t, p);
        }

        const Rational d = w(t, t).re;
        cert.diagonal[t] = d;
        for (std::size_t i = t + 1; i < n; ++i) l(i, t) = w(i, t) / d;
        for (std::size_t i = t + 1; i < n; ++i) {
            if (w(i, t).is_zero()) continue;
            for (std::size_t j = t + 1; j <= i; ++j) {
                if (w(j, t).is_zero()) continue;
                w(i, j) -= l(i, t) * w(t, j);
                if (j != i) w(j, i) = w(i, j).conj();
            }
            w(i, i).im = 0;
        }
    }

    for (const auto& d : cert.diagonal) {
        if (sgn(d) > 0) ++cert.inertia.positive;
        else if (sgn(d) < 0) ++cert.inertia.negative;
        else ++cert.inertia.zero;
    }

    if (cert.inertia.negative > 0) {
        std::size_t step = 0;
        while (sgn(cert.diagonal[step]) >= 0) ++step;
        // y solves L^* y = e_step; v = S^* y.
        Vector y(n);
        y[step] = 1;
        for (std::size_t k = step; k-- > 0;) {
            GaussianRational acc;
            for (std::size_t j = k + 1; j <= step; ++j)
                if (!l(j, k).is_zero() && !y[j].is_zero()) acc += l(j, k).conj() * y[j];
            y[k] = -acc;
        }
        Vector v(n);
        for (std::size_t r = 0; r < n; ++r) {
            if (y[r].is_zero()) continue;
            for (const auto& [c, s] : cert.transform[r]) v[c] += s.conj() * y[r];
        }
        v = detail::clear_denominators(std::move(v));
        const GaussianRational q = quadratic_form(m, v);
        if (!q.is_real() || sgn(q.re) >= 0) throw Error("internal error: indefiniteness witness failed");
        cert.witness = std::move(v);
    }
    return cert;
}

inline std::pair<bool, SignatureCertificate> is_positive_definite(const Matrix& m)
{
    auto cert = ldl_signature(m);
    const bool ok = cert.positive_definite();
    return {ok, std::move(cert)};
}

inline std::pair<bool, SignatureCertificate> is_positive_semidefinite(const Matrix& m)
{
    auto cert = ldl_signature(m);
    const bool ok = cert.positive_semidefinite();
    return {ok, std::move(cert)};
}

struct GramTerm {
    Rational weight;  // > 0
    Vector vector;
};

struct GramDecomposition {
    std::vector<GramTerm> positive;
    std::vector<GramTerm> negative;
};

/// M = sum a_k u_k u_k^* - sum b_l v_l v_l^*, in pivot order.
inline GramDecomposition gram_decomposition(const SignatureCertificate& cert)
{
    const std::size_t n = cert.size();
    const Matrix s = cert.transform_matrix();
    const Matrix s_inv = cert.mixing_steps == 0 ? s.adjoint() : inverse(s);  // permutation: inverse = adjoint
    GramDecomposition out;
    for (std::size_t t = 0; t < n; ++t) {
        const int sign = sgn(cert.diagonal[t]);
        if (sign == 0) continue;
        Vector col(n);
        for (std::size_t i = t; i < n; ++i) col[i] = cert.lower(i, t);
        GramTerm term{sign > 0 ? cert.diagonal[t] : Rational(-cert.diagonal[t]), mat_vec(s_inv, col)};
        (sign > 0 ? out.positive : out.negative).push_back(std::move(term));
    }
    return out;
}

inline GramDecomposition gram_decomposition(const Matrix& m) { return gram_decomposition(ldl_signature(m)); }

/// Reconstructs sum a_k u_k u_k^* - sum b_l v_l v_l^*.
inline Matrix reconstruct(const GramDecomposition& g, std::size_t n)
{
    Matrix out(n, n);
    auto accumulate = [&](const GramTerm& t, int sign) {
        for (std::size_t i = 0; i < n; ++i) {
            if (t.vector[i].is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (t.vector[j].is_zero()) continue;
                GaussianRational v = GaussianRational(t.weight) * t.vector[i] * t.vector[j].conj();
                if (sign > 0) out(i, j) += v;
                else out(i, j) -= v;
            }
        }
    };
    for (const auto& t : g.positive) accumulate(t, +1);
    for (const auto& t : g.negative) accumulate(t, -1);
    return out;
}

/// Outcome of re-checking a certificate from its stored data alone.
struct VerifyResult {
    bool ok = true;
    std::string reason;
};

/// Independent re-check: L unit lower triangular, D real, S invertible,
/// S M S^* = L D L^*, inertia equals the sign counts of D, witness sound.
inline VerifyResult verify_certificate(const SignatureCertificate& cert)
{
    const std::size_t n = cert.size();
    auto fail = [](std::string why) { return VerifyResult{false, std::move(why)}; };
    if (!cert.source.is_hermitian() || cert.source.rows() != n) return fail("source matrix is not Hermitian of size N");
    if (cert.lower.rows() != n || cert.lower.cols() != n || cert.transform.size() != n)
        return fail("factor shapes do not match N");
    for (std::size_t i = 0; i < n; ++i) {
        if (cert.lower(i, i) != GaussianRational(1)) return fail("L is not unit diagonal");
        for (std::size_t j = i + 1; j < n; ++j)
            if (!cert.lower(i, j).is_zero()) return fail("L is not lower triangular");
    }
    for (const auto& row : cert.transform)
        for (const auto& [c, v] : row)
            if (c >= n) return fail("transform column out of range");
    const Matrix s = cert.transform_matrix();
    if (rank(s) != n) return fail("transform is singular");

    Matrix d(n, n);
    for (std::size_t k = 0; k < n; ++k) d(k, k) = cert.diagonal[k];
    if (s * cert.source * s.adjoint() != cert.lower * d * cert.lower.adjoint()) return fail("S M S^* != L D L^*");

    Inertia counted;
    for (const auto& v : cert.diagonal) {
        if (sgn(v) > 0) ++counted.positive;
        else if (sgn(v) < 0) ++counted.negative;
        else ++counted.zero;
    }
    if (!(counted == cert.inertia)) return fail("inertia does not match the signs of D");
    if (cert.witness) {
        if (cert.witness->size() != n) return fail("witness length differs from N");
        const GaussianRational q = quadratic_form(cert.source, *cert.witness);
        if (!q.is_real() || sgn(q.re) >= 0) return fail("witness does not give v^* M v < 0");
    } else if (counted.negative > 0) {
        return fail("indefinite certificate without witness");
    }
    return {};
}

}  // namespace hermfactor
