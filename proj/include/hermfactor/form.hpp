#pragma once

// Matrix-valued kernels F(z, wbar) = sum F_{ij alpha beta} z^alpha wbar^beta
// and holomorphic polynomial matrices A(z).

#include "hermfactor/matrix.hpp"
#include "hermfactor/multiindex.hpp"
#include "hermfactor/rational.hpp"

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hermfactor {

struct FormKey {
    std::size_t i = 0;  // 0-based row of the r x r matrix
    std::size_t j = 0;
    MultiIndex alpha;   // exponent of z
    MultiIndex beta;    // exponent of wbar

    friend auto operator<=>(const FormKey&, const FormKey&) = default;
    friend bool operator==(const FormKey&, const FormKey&) = default;
};

/// Sparse coefficient tensor of an r x r matrix of polynomials in (z, wbar).
/// Only nonzero coefficients are stored.
class BihermitianForm {
public:
    using Terms = std::map<FormKey, GaussianRational>;

    BihermitianForm() = default;
    explicit BihermitianForm(std::size_t n, std::size_t r = 1) : n_(n), r_(r)
    {
        if (n == 0) throw DimensionError("ambient dimension must be positive");
        if (r == 0) throw DimensionError("matrix size must be positive");
    }

    /// c * identity_r as a constant kernel.
    static BihermitianForm constant(std::size_t n, const GaussianRational& c, std::size_t r = 1)
    {
        BihermitianForm f(n, r);
        for (std::size_t i = 0; i < r; ++i) f.add_term(i, i, MultiIndex(n), MultiIndex(n), c);
        return f;
    }

    /// <z,w> = sum_k z_k wbar_k, times identity_r.
    static BihermitianForm inner_product(std::size_t n, std::size_t r = 1)
    {
        BihermitianForm f(n, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < n; ++k)
                f.add_term(i, i, MultiIndex::unit(n, k), MultiIndex::unit(n, k), 1);
        return f;
    }

    std::size_t n() const { return n_; }
    std::size_t r() const { return r_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }

    void add_term(std::size_t i, std::size_t j, const MultiIndex& alpha, const MultiIndex& beta,
                  const GaussianRational& c)
    {
        if (i >= r_ || j >= r_) throw DimensionError("matrix index out of range");
        if (alpha.size() != n_ || beta.size() != n_) throw DimensionError("multi-index length differs from n");
        if (c.is_zero()) return;
        FormKey key{i, j, alpha, beta};
        auto [it, inserted] = terms_.try_emplace(std::move(key), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    GaussianRational coefficient(std::size_t i, std::size_t j, const MultiIndex& alpha,
                                 const MultiIndex& beta) const
    {
        auto it = terms_.find(FormKey{i, j, alpha, beta});
        return it == terms_.end() ? GaussianRational{} : it->second;
    }

    friend bool operator==(const BihermitianForm& a, const BihermitianForm& b)
    {
        return a.n_ == b.n_ && a.r_ == b.r_ && a.terms_ == b.terms_;
    }

private:
    std::size_t n_ = 1;
    std::size_t r_ = 1;
    Terms terms_;
};

/// Holomorphic polynomial: multi-index -> coefficient, nonzero entries only.
class HoloPolynomial {
public:
    using Terms = std::map<MultiIndex, GaussianRational>;

    HoloPolynomial() = default;
    explicit HoloPolynomial(std::size_t n) : n_(n) {}

    std::size_t n() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }

    void add_term(const MultiIndex& alpha, const GaussianRational& c)
    {
        if (alpha.size() != n_) throw DimensionError("multi-index length differs from n");
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(alpha, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    GaussianRational coefficient(const MultiIndex& alpha) const
    {
        auto it = terms_.find(alpha);
        return it == terms_.end() ? GaussianRational{} : it->second;
    }

    friend bool operator==(const HoloPolynomial&, const HoloPolynomial&) = default;

private:
    std::size_t n_ = 1;
    Terms terms_;
};

/// s x r matrix of holomorphic polynomials with a positive weight per row.
/// A weight a_k means row k contributes a_k * |row_k|^2 to the Gram form.
class HoloPolyMatrix {
public:
    HoloPolyMatrix() = default;
    HoloPolyMatrix(std::size_t n, std::size_t rows, std::size_t cols)
        : n_(n), rows_(rows), cols_(cols), entries_(rows * cols, HoloPolynomial(n)), weights_(rows, Rational(1))
    {
        if (n == 0) throw DimensionError("ambient dimension must be positive");
    }

    std::size_t n() const { return n_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    HoloPolynomial& operator()(std::size_t k, std::size_t j) { return entries_.at(k * cols_ + j); }
    const HoloPolynomial& operator()(std::size_t k, std::size_t j) const { return entries_.at(k * cols_ + j); }

    const Rational& weight(std::size_t k) const { return weights_.at(k); }
    void set_weight(std::size_t k, const Rational& w)
    {
        if (sgn(w) <= 0) throw Error("row weights must be positive");
        weights_.at(k) = w;
    }
    bool unit_weights() const
    {
        for (const auto& w : weights_)
            if (w != 1) return false;
        return true;
    }

    /// Appends a row of r entries with the given weight.
    void append_row(std::vector<HoloPolynomial> row, const Rational& w = Rational(1))
    {
        if (row.size() != cols_) throw DimensionError("row length differs from column count");
        if (sgn(w) <= 0) throw Error("row weights must be positive");
        for (auto& p : row) {
            if (p.n() != n_) throw DimensionError("entry dimension differs from n");
            entries_.push_back(std::move(p));
        }
        weights_.push_back(w);
        ++rows_;
    }

    bool is_homogeneous(unsigned m) const
    {
        for (const auto& p : entries_)
            for (const auto& [alpha, c] : p.terms())
                if (alpha.degree() != m) return false;
        return true;
    }

    friend bool operator==(const HoloPolyMatrix&, const HoloPolyMatrix&) = default;

private:
    std::size_t n_ = 1;
    std::size_t rows_ = 0;
    std::size_t cols_ = 1;
    std::vector<HoloPolynomial> entries_;
    std::vector<Rational> weights_;
};

// ---------------------------------------------------------------------------
// Structural predicates

/// coefficient(i,j,alpha,beta) == conj(coefficient(j,i,beta,alpha)) for all
/// terms, i.e. F(z,zbar) is Hermitian-matrix valued.
inline bool is_hermitian_symmetric(const BihermitianForm& f)
{
    for (const auto& [key, c] : f.terms())
        if (f.coefficient(key.j, key.i, key.beta, key.alpha) != c.conj()) return false;
    return true;
}

/// m when every term has |alpha| = |beta| = m. The zero form reports 0.
inline std::optional<unsigned> bidegree(const BihermitianForm& f)
{
    std::optional<unsigned> m;
    for (const auto& [key, c] : f.terms()) {
        const unsigned a = key.alpha.degree(), b = key.beta.degree();
        if (a != b) return std::nullopt;
        if (!m) m = a;
        else if (*m != a) return std::nullopt;
    }
    return m ? m : std::optional<unsigned>(0);
}

/// Largest |alpha| or |beta| among the terms.
inline unsigned max_degree(const BihermitianForm& f)
{
    unsigned m = 0;
    for (const auto& [key, c] : f.terms()) m = std::max({m, key.alpha.degree(), key.beta.degree()});
    return m;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {
template <class T>
T monomial_value(const MultiIndex& a, const std::vector<T>& x)
{
    T v(1);
    for (std::size_t k = 0; k < a.size(); ++k)
        for (unsigned e = 0; e < a[k]; ++e) v *= x[k];
    return v;
}
}  // namespace detail

/// Numeric F(z, wbar) as an r x r row-major matrix. The working precision is
/// that of Real.
template <class Real = double>
std::vector<std::complex<Real>> evaluate(const BihermitianForm& f, const std::vector<std::complex<Real>>& z,
                                         const std::vector<std::complex<Real>>& w)
{
    if (z.size() != f.n() || w.size() != f.n()) throw DimensionError("evaluation point length differs from n");
    std::vector<std::complex<Real>> wbar(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) wbar[k] = std::conj(w[k]);
    std::vector<std::complex<Real>> out(f.r() * f.r());
    for (const auto& [key, c] : f.terms()) {
        const std::complex<Real> coef(static_cast<Real>(c.re.get_d()), static_cast<Real>(c.im.get_d()));
        out[key.i * f.r() + key.j] +=
            coef * detail::monomial_value(key.alpha, z) * detail::monomial_value(key.beta, wbar);
    }
    return out;
}

/// Exact F(z, wbar) at Gaussian-rational points.
inline Matrix evaluate_exact(const BihermitianForm& f, const Vector& z, const Vector& w)
{
    if (z.size() != f.n() || w.size() != f.n()) throw DimensionError("evaluation point length differs from n");
    Vector wbar(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) wbar[k] = w[k].conj();
    Matrix out(f.r(), f.r());
    for (const auto& [key, c] : f.terms())
        out(key.i, key.j) += c * detail::monomial_value(key.alpha, z) * detail::monomial_value(key.beta, wbar);
    return out;
}

inline GaussianRational evaluate_exact(const HoloPolynomial& p, const Vector& z)
{
    if (z.size() != p.n()) throw DimensionError("evaluation point length differs from n");
    GaussianRational v;
    for (const auto& [alpha, c] : p.terms()) v += c * detail::monomial_value(alpha, z);
    return v;
}

// ---------------------------------------------------------------------------
// Arithmetic

inline BihermitianForm add(const BihermitianForm& f, const BihermitianForm& g)
{
    if (f.n() != g.n() || f.r() != g.r()) throw DimensionError("form shapes differ");
    BihermitianForm h = f;
    for (const auto& [key, c] : g.terms()) h.add_term(key.i, key.j, key.alpha, key.beta, c);
    return h;
}

inline BihermitianForm scale(const BihermitianForm& f, const GaussianRational& c)
{
    BihermitianForm h(f.n(), f.r());
    if (c.is_zero()) return h;
    for (const auto& [key, v] : f.terms()) h.add_term(key.i, key.j, key.alpha, key.beta, v * c);
    return h;
}

inline BihermitianForm operator+(const BihermitianForm& f, const BihermitianForm& g) { return add(f, g); }
inline BihermitianForm operator-(const BihermitianForm& f, const BihermitianForm& g)
{
    return add(f, scale(g, -1));
}

/// Coefficientwise product in z and in wbar separately. One factor must be
/// scalar (r = 1); the result has the other factor's size.
inline BihermitianForm kernel_multiply(const BihermitianForm& f, const BihermitianForm& g)
{
    if (f.n() != g.n()) throw DimensionError("kernel product: ambient dimensions differ");
    if (f.r() != 1 && g.r() != 1) throw DimensionError("kernel product needs a scalar factor");
    BihermitianForm h(f.n(), std::max(f.r(), g.r()));
    for (const auto& [kf, cf] : f.terms())
        for (const auto& [kg, cg] : g.terms()) {
            const std::size_t i = f.r() == 1 ? kg.i : kf.i;
            const std::size_t j = f.r() == 1 ? kg.j : kf.j;
            h.add_term(i, j, kf.alpha + kg.alpha, kf.beta + kg.beta, cf * cg);
        }
    return h;
}

// ---------------------------------------------------------------------------
// Gram forms and coefficient matrices

/// F(z, wbar) = A(w)^* diag(weights) A(z), i.e.
/// F_ij = sum_k a_k conj(A_ki(w)) A_kj(z). Hermitian-symmetric by construction.
inline BihermitianForm gram(const HoloPolyMatrix& a)
{
    BihermitianForm f(a.n(), a.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const GaussianRational wk(a.weight(k));
        for (std::size_t i = 0; i < a.cols(); ++i)
            for (const auto& [beta, cb] : a(k, i).terms())
                for (std::size_t j = 0; j < a.cols(); ++j)
                    for (const auto& [alpha, ca] : a(k, j).terms())
                        f.add_term(i, j, alpha, beta, wk * ca * cb.conj());
    }
    return f;
}

/// Hermitian coefficient matrix of a form, with its monomial basis.
/// Index of (matrix slot i, monomial alpha) is i * basis.size() + pos(alpha),
/// and entry ((j,alpha),(i,beta)) holds F_{ij alpha beta}. For this layout the
/// operator form sum F_{ij alpha beta} H_{i beta} conj(H_{j alpha}) equals H^* M H,
/// and Gram rows of a factorization are column vectors of M.
struct CoefficientMatrix {
    Matrix matrix;
    MonomialBasis basis;
    std::size_t r = 1;

    std::size_t index(std::size_t slot, const MultiIndex& alpha) const
    {
        return slot * basis.size() + basis.position(alpha);
    }
    std::size_t slot(std::size_t k) const { return k / basis.size(); }
    const MultiIndex& monomial(std::size_t k) const { return basis[k % basis.size()]; }
};

inline CoefficientMatrix coefficient_matrix(const BihermitianForm& f, const MonomialBasis& basis)
{
    if (!is_hermitian_symmetric(f)) throw NotHermitianError("form is not hermitian-symmetric");
    if (basis.n() != f.n()) throw DimensionError("basis dimension differs from form");
    CoefficientMatrix cm{Matrix(f.r() * basis.size(), f.r() * basis.size()), basis, f.r()};
    for (const auto& [key, c] : f.terms()) {
        if (!basis.contains(key.alpha) || !basis.contains(key.beta))
            throw BidegreeError("term " + to_string(key.alpha) + "," + to_string(key.beta) +
                                " lies outside the monomial basis");
        cm.matrix(cm.index(key.j, key.alpha), cm.index(key.i, key.beta)) = c;
    }
    return cm;
}

/// Strict mode: F must have a bidegree m (explicit m also accepts the zero form).
inline CoefficientMatrix coefficient_matrix(const BihermitianForm& f, std::optional<unsigned> m = std::nullopt)
{
    if (!m) {
        m = bidegree(f);
        if (!m) throw BidegreeError("form is not bihomogeneous; use the generalized coefficient matrix");
    }
    return coefficient_matrix(f, MonomialBasis::homogeneous(f.n(), *m));
}

/// Generalized mode: basis of all monomials of degree <= max_degree(F).
inline CoefficientMatrix coefficient_matrix_generalized(const BihermitianForm& f)
{
    return coefficient_matrix(f, MonomialBasis::up_to(f.n(), max_degree(f)));
}

inline BihermitianForm from_coefficient_matrix(const Matrix& m, const MonomialBasis& basis, std::size_t r)
{
    const std::size_t big = r * basis.size();
    if (!m.square() || m.rows() != big) throw DimensionError("coefficient matrix size differs from r * dim");
    if (!m.is_hermitian()) throw NotHermitianError("coefficient matrix is not Hermitian");
    BihermitianForm f(basis.n(), r);
    const std::size_t nb = basis.size();
    for (std::size_t a = 0; a < big; ++a)
        for (std::size_t b = 0; b < big; ++b)
            if (!m(a, b).is_zero()) f.add_term(b / nb, a / nb, basis[a % nb], basis[b % nb], m(a, b));
    return f;
}

inline BihermitianForm from_coefficient_matrix(const Matrix& m, std::size_t n, unsigned deg, std::size_t r)
{
    return from_coefficient_matrix(m, MonomialBasis::homogeneous(n, deg), r);
}

/// Holomorphic matrix whose rows are the given coefficient vectors over
/// (slot, monomial) indices; row k, column j is sum_alpha v_k[(j,alpha)] z^alpha.
inline HoloPolyMatrix rows_from_vectors(const std::vector<Vector>& vecs, const std::vector<Rational>& weights,
                                        const MonomialBasis& basis, std::size_t r)
{
    HoloPolyMatrix a(basis.n(), 0, r);
    const std::size_t nb = basis.size();
    for (std::size_t k = 0; k < vecs.size(); ++k) {
        if (vecs[k].size() != r * nb) throw DimensionError("coefficient vector length differs from r * dim");
        std::vector<HoloPolynomial> row(r, HoloPolynomial(basis.n()));
        for (std::size_t idx = 0; idx < vecs[k].size(); ++idx)
            row[idx / nb].add_term(basis[idx % nb], vecs[k][idx]);
        a.append_row(std::move(row), weights.at(k));
    }
    return a;
}

/// Coefficient matrix G of A in the given basis, G(k, (j,alpha)) =
/// conj(A_{kj,alpha}), so that coefficient_matrix(gram(A)) = G^* W G with W the
/// row weights.
inline Matrix holo_coefficients(const HoloPolyMatrix& a, const MonomialBasis& basis)
{
    const std::size_t nb = basis.size();
    Matrix g(a.rows(), a.cols() * nb);
    for (std::size_t k = 0; k < a.rows(); ++k)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (const auto& [alpha, c] : a(k, j).terms()) g(k, j * nb + basis.position(alpha)) = c.conj();
    return g;
}

}  // namespace hermfactor
