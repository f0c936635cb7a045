#pragma once

#include "hermfactor/certify.hpp"
#include "hermfactor/form.hpp"
#include "hermfactor/sphere.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace hermfactor {

/// Weighted rows reproducing a target form: gram(rows) == target.
struct WeightedGramFactor {
    HoloPolyMatrix rows;
    BihermitianForm target;

    std::size_t size() const { return rows.rows(); }
    bool reconstructs() const { return gram(rows) == target; }
};

struct DifferenceOfSquares {
    WeightedGramFactor positive;  // target: positive-part form
    WeightedGramFactor negative;  // target: negative-part form
    CoefficientMatrix coefficients;
    SignatureCertificate certificate;

    BihermitianForm reconstruct() const { return gram(positive.rows) - gram(negative.rows); }
};

namespace detail {

inline WeightedGramFactor rows_from_terms(const std::vector<GramTerm>& terms, const CoefficientMatrix& cm)
{
    std::vector<Vector> vecs;
    std::vector<Rational> weights;
    for (const auto& t : terms) {
        vecs.push_back(t.vector);
        weights.push_back(t.weight);
    }
    WeightedGramFactor w;
    w.rows = rows_from_vectors(vecs, weights, cm.basis, cm.r);
    w.target = gram(w.rows);
    return w;
}

inline CoefficientMatrix any_coefficient_matrix(const BihermitianForm& f)
{
    if (bidegree(f)) return coefficient_matrix(f);
    return coefficient_matrix_generalized(f);
}

}  // namespace detail

/// f = sum a_k A_k(z) conj(A_k(w)) - sum b_l B_l(z) conj(B_l(w)). Rows are
/// homogeneous of degree m when f has bidegree m; otherwise the graded basis
/// is used and rows mix degrees.
inline DifferenceOfSquares difference_of_squares(const BihermitianForm& f)
{
    if (!is_hermitian_symmetric(f)) throw NotHermitianError("difference_of_squares: form is not hermitian-symmetric");
    DifferenceOfSquares out;
    out.coefficients = detail::any_coefficient_matrix(f);
    out.certificate = ldl_signature(out.coefficients.matrix);
    const GramDecomposition g = gram_decomposition(out.certificate);
    out.positive = detail::rows_from_terms(g.positive, out.coefficients);
    out.negative = detail::rows_from_terms(g.negative, out.coefficients);
    return out;
}

/// Factor built from an existing certificate of F's coefficient matrix.
/// Present iff the certificate passes the requested test (PD when strict).
inline std::optional<WeightedGramFactor> factor_from_certificate(const BihermitianForm& f, const CoefficientMatrix& cm,
                                                                 const SignatureCertificate& cert, bool strict)
{
    if (strict ? !cert.positive_definite() : !cert.positive_semidefinite()) return std::nullopt;
    const GramDecomposition g = gram_decomposition(cert);
    WeightedGramFactor w = detail::rows_from_terms(g.positive, cm);
    w.target = f;
    return w;
}

/// Holomorphic factor F = A(w)^*A(z): present iff the coefficient matrix is PSD,
/// with one row per positive pivot.
inline std::optional<WeightedGramFactor> holomorphic_factor(const BihermitianForm& f)
{
    const CoefficientMatrix cm = coefficient_matrix(f);
    return factor_from_certificate(f, cm, ldl_signature(cm.matrix), false);
}

/// Strict factor: present iff the coefficient matrix is PD; the
/// r*N rows then span the r-tuples of degree-m polynomials.
inline std::optional<WeightedGramFactor> strict_holomorphic_factor(const BihermitianForm& f)
{
    const CoefficientMatrix cm = coefficient_matrix(f);
    return factor_from_certificate(f, cm, ldl_signature(cm.matrix), true);
}

// ---------------------------------------------------------------------------
// Floating factor A with A^* A = F, rows scaled by sqrt(weight).

struct BigComplex {
    mpf_class re;
    mpf_class im;
};

struct NumericFactor {
    std::size_t n = 1;
    std::size_t rows = 0;
    std::size_t cols = 1;
    unsigned digits = 12;
    mp_bitcnt_t bits = 64;
    // entries[k * cols + j]: monomial -> coefficient
    std::vector<std::vector<std::pair<MultiIndex, BigComplex>>> entries;
    BihermitianForm target;

    const std::vector<std::pair<MultiIndex, BigComplex>>& operator()(std::size_t k, std::size_t j) const
    {
        return entries.at(k * cols + j);
    }
};

inline mp_bitcnt_t bits_for_digits(unsigned digits)
{
    return static_cast<mp_bitcnt_t>(std::ceil(digits * 3.3219280948873623)) + 64;
}

inline NumericFactor numeric_factor(const WeightedGramFactor& w, unsigned digits = 12)
{
    NumericFactor out;
    out.n = w.rows.n();
    out.rows = w.rows.rows();
    out.cols = w.rows.cols();
    out.digits = digits;
    out.bits = bits_for_digits(digits);
    out.target = w.target;
    out.entries.resize(out.rows * out.cols);
    for (std::size_t k = 0; k < out.rows; ++k) {
        const Rational& a = w.rows.weight(k);
        if (sgn(a) <= 0) throw Error("numeric_factor: weights must be positive");
        mpf_class root(a, out.bits);
        root = sqrt(root);
        for (std::size_t j = 0; j < out.cols; ++j)
            for (const auto& [alpha, c] : w.rows(k, j).terms()) {
                BigComplex v{mpf_class(c.re, out.bits), mpf_class(c.im, out.bits)};
                v.re *= root;
                v.im *= root;
                out.entries[k * out.cols + j].emplace_back(alpha, std::move(v));
            }
    }
    return out;
}

namespace detail {

inline BigComplex mul(const BigComplex& a, const BigComplex& b, mp_bitcnt_t bits)
{
    BigComplex c{mpf_class(0, bits), mpf_class(0, bits)};
    c.re = a.re * b.re - a.im * b.im;
    c.im = a.re * b.im + a.im * b.re;
    return c;
}

}  // namespace detail

/// max over points of ||A(z)^* A(z) - F(z,zbar)||_F / max(||F(z,zbar)||_F, 1).
inline double numeric_reconstruction_error(const NumericFactor& a, const std::vector<Vector>& points)
{
    double worst = 0;
    const mp_bitcnt_t bits = a.bits;
    for (const auto& z : points) {
        if (z.size() != a.n) throw DimensionError("point dimension differs from n");
        std::vector<BigComplex> zb(z.size());
        for (std::size_t k = 0; k < z.size(); ++k) zb[k] = {mpf_class(z[k].re, bits), mpf_class(z[k].im, bits)};
        // Row values A_kj(z).
        std::vector<BigComplex> vals(a.rows * a.cols, BigComplex{mpf_class(0, bits), mpf_class(0, bits)});
        for (std::size_t e = 0; e < vals.size(); ++e)
            for (const auto& [alpha, c] : a.entries[e]) {
                BigComplex mono{mpf_class(1, bits), mpf_class(0, bits)};
                for (std::size_t k = 0; k < alpha.size(); ++k)
                    for (unsigned p = 0; p < alpha[k]; ++p) mono = detail::mul(mono, zb[k], bits);
                const BigComplex t = detail::mul(c, mono, bits);
                vals[e].re += t.re;
                vals[e].im += t.im;
            }
        const Matrix exact = evaluate_exact(a.target, z, z);
        mpf_class diff2(0, bits), norm2(0, bits);
        for (std::size_t i = 0; i < a.cols; ++i)
            for (std::size_t j = 0; j < a.cols; ++j) {
                // (A^* A)_ij = sum_k conj(A_ki) A_kj
                BigComplex s{mpf_class(0, bits), mpf_class(0, bits)};
                for (std::size_t k = 0; k < a.rows; ++k) {
                    const BigComplex& u = vals[k * a.cols + i];
                    const BigComplex& v = vals[k * a.cols + j];
                    s.re += u.re * v.re + u.im * v.im;
                    s.im += u.re * v.im - u.im * v.re;
                }
                const mpf_class fr(exact(i, j).re, bits), fi(exact(i, j).im, bits);
                const mpf_class dr = s.re - fr, di = s.im - fi;
                diff2 += dr * dr + di * di;
                norm2 += fr * fr + fi * fi;
            }
        const double den = std::max(std::sqrt(norm2.get_d()), 1.0);
        worst = std::max(worst, std::sqrt(diff2.get_d()) / den);
    }
    return worst;
}

}  // namespace hermfactor
