#pragma once

// Constant-coefficient principal symbols on R^{2n} and their complex form.
// Real variables pair up as xi_{2j-1} = x_j, xi_{2j} = y_j with z_j = x_j + i y_j;
// the symbol of d/dz_j, d/dzbar_j is taken to be z_j, zbar_j with no extra
// factors (other Fourier conventions rescale by positive constants only).

#include "hermfactor/expression.hpp"
#include "hermfactor/form.hpp"
#include "hermfactor/sphere.hpp"
#include "hermfactor/stabilize.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hermfactor {

/// Polynomial in 2n real variables with rational coefficients.
class RealSymbol {
public:
    using Terms = std::map<MultiIndex, Rational>;

    RealSymbol() = default;
    explicit RealSymbol(std::size_t num_vars) : vars_(num_vars)
    {
        if (num_vars == 0 || num_vars % 2 != 0)
            throw DimensionError("a symbol needs an even, positive number of real variables (got " +
                                 std::to_string(num_vars) + ")");
    }

    std::size_t num_vars() const { return vars_; }
    std::size_t n() const { return vars_ / 2; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const MultiIndex& gamma, const Rational& c)
    {
        if (gamma.size() != vars_) throw DimensionError("exponent length differs from variable count");
        if (sgn(c) == 0) return;
        auto [it, inserted] = terms_.try_emplace(gamma, c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) terms_.erase(it);
        }
    }

    /// Total degree when homogeneous; nullopt otherwise. Zero reports 0.
    std::optional<unsigned> homogeneous_degree() const
    {
        std::optional<unsigned> deg;
        for (const auto& [g, c] : terms_) {
            if (!deg) deg = g.degree();
            else if (*deg != g.degree()) return std::nullopt;
        }
        return deg ? deg : std::optional<unsigned>(0);
    }

    Rational evaluate(const std::vector<Rational>& xi) const
    {
        if (xi.size() != vars_) throw DimensionError("point length differs from variable count");
        Rational acc = 0;
        for (const auto& [g, c] : terms_) {
            Rational t = c;
            for (std::size_t k = 0; k < vars_; ++k)
                for (unsigned e = 0; e < g[k]; ++e) t *= xi[k];
            acc += t;
        }
        return acc;
    }

    friend RealSymbol operator*(const RealSymbol& a, const RealSymbol& b)
    {
        if (a.vars_ != b.vars_) throw DimensionError("symbol variable counts differ");
        RealSymbol out(a.vars_);
        for (const auto& [ga, ca] : a.terms_)
            for (const auto& [gb, cb] : b.terms_) out.add_term(ga + gb, ca * cb);
        return out;
    }

    friend bool operator==(const RealSymbol&, const RealSymbol&) = default;

private:
    std::size_t vars_ = 2;
    Terms terms_;
};

/// Parses a symbol in x1..x_{2n}. n defaults to half the largest index,
/// rounded up.
inline RealSymbol parse_real_symbol(std::string_view text, std::size_t n = 0)
{
    const ParsedExpression pe = parse_document(text);
    if (pe.bracketed) throw ParseError("matrix symbols are not supported", 0);
    if (pe.uses(0) || pe.uses(1)) throw ParseError("real symbols use x variables only", 0);
    const std::size_t used = pe.max_index(2);
    if (n == 0) n = std::max<std::size_t>((used + 1) / 2, 1);
    if (used > 2 * n) throw ParseError("variable index exceeds 2n = " + std::to_string(2 * n), 0);
    RealSymbol p(2 * n);
    for (const auto& [k, c] : pe.entries.front().terms()) {
        if (!c.is_real()) throw ParseError("symbol coefficients must be real", 0);
        MultiIndex g(2 * n);
        for (std::size_t s = 0; s < k.size(); ++s)
            if (k[s]) g[s / 3] = k[s];
        p.add_term(g, c.re);
    }
    return p;
}

inline std::string to_expression(const RealSymbol& p)
{
    std::string out;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it)
        detail::append_term(out, it->second, detail::monomial_text("x", it->first));
    return out.empty() ? "0" : out;
}

/// Substitutes x_j = (z_j + zbar_j)/2, y_j = (z_j - zbar_j)/(2i).
inline BihermitianForm real_to_complex(const RealSymbol& p)
{
    const std::size_t n = p.n();
    const GaussianRational half(Rational(1, 2));
    const GaussianRational mhalf_i(Rational(0), Rational(-1, 2));  // 1/(2i) = -i/2
    std::vector<BihermitianForm> var(2 * n, BihermitianForm(n));
    for (std::size_t j = 0; j < n; ++j) {
        const MultiIndex e = MultiIndex::unit(n, j), o(n);
        var[2 * j].add_term(0, 0, e, o, half);
        var[2 * j].add_term(0, 0, o, e, half);
        var[2 * j + 1].add_term(0, 0, e, o, mhalf_i);
        var[2 * j + 1].add_term(0, 0, o, e, -mhalf_i);
    }
    // powers[v][e] = var[v]^e, built on demand
    std::vector<std::vector<BihermitianForm>> powers(2 * n);
    auto power = [&](std::size_t v, unsigned e) -> const BihermitianForm& {
        auto& pv = powers[v];
        if (pv.empty()) pv.push_back(BihermitianForm::constant(n, 1));
        while (pv.size() <= e) pv.push_back(kernel_multiply(pv.back(), var[v]));
        return pv[e];
    };
    BihermitianForm out(n);
    for (const auto& [g, c] : p.terms()) {
        BihermitianForm t = BihermitianForm::constant(n, c);
        for (std::size_t v = 0; v < 2 * n; ++v)
            if (g[v]) t = kernel_multiply(t, power(v, g[v]));
        out = add(out, t);
    }
    return out;
}

/// Inverse identification: z_j = x_j + i y_j, zbar_j = x_j - i y_j.
inline RealSymbol complex_to_real(const BihermitianForm& f)
{
    if (f.r() != 1) throw DimensionError("complex_to_real: only scalar forms convert to symbols");
    if (!is_hermitian_symmetric(f)) throw NotHermitianError("complex_to_real: form is not real-valued");
    const std::size_t n = f.n();
    using GPoly = std::map<MultiIndex, GaussianRational>;
    auto mul = [](const GPoly& a, const GPoly& b) {
        GPoly out;
        for (const auto& [ga, ca] : a)
            for (const auto& [gb, cb] : b) {
                auto& slot = out[ga + gb];
                slot += ca * cb;
            }
        std::erase_if(out, [](const auto& e) { return e.second.is_zero(); });
        return out;
    };
    std::vector<GPoly> zv(n), zbv(n);
    for (std::size_t j = 0; j < n; ++j) {
        const MultiIndex x = MultiIndex::unit(2 * n, 2 * j), y = MultiIndex::unit(2 * n, 2 * j + 1);
        zv[j] = {{x, GaussianRational(1)}, {y, GaussianRational::i_unit()}};
        zbv[j] = {{x, GaussianRational(1)}, {y, -GaussianRational::i_unit()}};
    }
    GPoly acc;
    for (const auto& [key, c] : f.terms()) {
        GPoly t{{MultiIndex(2 * n), c}};
        for (std::size_t j = 0; j < n; ++j) {
            for (unsigned e = 0; e < key.alpha[j]; ++e) t = mul(t, zv[j]);
            for (unsigned e = 0; e < key.beta[j]; ++e) t = mul(t, zbv[j]);
        }
        for (const auto& [g, v] : t) acc[g] += v;
    }
    RealSymbol p(2 * n);
    for (const auto& [g, v] : acc) {
        if (!v.is_real()) throw Error("complex_to_real: imaginary residue in a real-valued form");
        p.add_term(g, v.re);
    }
    return p;
}

/// Circle invariance (|alpha| = |beta| termwise) together with real
/// homogeneity (|alpha| + |beta| constant).
inline bool is_complex_bihomogeneous(const BihermitianForm& f)
{
    if (f.r() != 1) throw DimensionError("is_complex_bihomogeneous: scalar forms only");
    std::optional<unsigned> total;
    for (const auto& [key, c] : f.terms()) {
        const unsigned a = key.alpha.degree(), b = key.beta.degree();
        if (a != b) return false;
        if (!total) total = a + b;
        else if (*total != a + b) return false;
    }
    return true;
}

/// Exact f(z, zbar) for a scalar hermitian-symmetric form (a real number).
inline Rational real_value(const BihermitianForm& f, const Vector& z)
{
    const GaussianRational v = evaluate_exact(f, z, z)(0, 0);
    if (!v.is_real()) throw Error("form is not real-valued at the given point");
    return v.re;
}

/// Deterministic exact sample of the unit sphere: the coordinate vectors
/// e_k followed by stereographic images of a small rational grid.
inline std::vector<Vector> sphere_samples(std::size_t n, std::size_t max_points = 4096)
{
    std::vector<Vector> pts;
    for (std::size_t k = 0; k < n; ++k) {
        Vector e(n);
        e[k] = 1;
        pts.push_back(std::move(e));
    }
    static const std::vector<Rational> grid = {Rational(0), Rational(1), Rational(-1), Rational(2), Rational(-2),
                                               Rational(1, 2), Rational(-1, 2), Rational(3), Rational(-3)};
    const std::size_t dims = 2 * n - 1;
    std::vector<std::size_t> digit(dims, 0);
    while (pts.size() < max_points) {
        std::vector<Rational> t(dims);
        for (std::size_t k = 0; k < dims; ++k) t[k] = grid[digit[k]];
        pts.push_back(sphere_point(t));
        std::size_t k = 0;
        while (k < dims && ++digit[k] == grid.size()) digit[k++] = 0;
        if (k == dims) break;
    }
    return pts;
}

enum class EllipticVerdict { elliptic, not_elliptic, not_certified };

inline std::string_view to_string(EllipticVerdict v)
{
    switch (v) {
    case EllipticVerdict::elliptic: return "elliptic";
    case EllipticVerdict::not_elliptic: return "not_elliptic";
    default: return "not_certified";
    }
}

struct EllipticReport {
    EllipticVerdict verdict = EllipticVerdict::not_certified;
    std::size_t n = 1;
    unsigned order = 0;          // 2m
    int sign = 1;                // -1 when the symbol was negated to make it positive
    BihermitianForm complex_form;  // after sign normalization
    std::optional<unsigned> elliptic_certified;  // d
    std::optional<Matrix> e_matrix;              // coefficient matrix of q_d
    std::optional<WeightedGramFactor> factor;
    std::optional<Vector> zero_witness;          // exact zero on the unit sphere
    StabilizationReport search;
    static constexpr const char* variety_condition = "not checked";
};

/// Decides ellipticity of a complex-bihomogeneous scalar form: strict
/// stabilization of ||z||^{2d} p, then (on failure) a search for an exact
/// zero on the unit sphere.
inline EllipticReport certify_elliptic(const BihermitianForm& form, unsigned d_max)
{
    if (form.r() != 1) throw DimensionError("certify_elliptic: scalar symbols only");
    if (!is_hermitian_symmetric(form)) throw NotHermitianError("certify_elliptic: symbol is not real-valued");
    if (!is_complex_bihomogeneous(form))
        throw BidegreeError("symbol is not complex bihomogeneous; the factorization criterion does not apply");
    if (form.is_zero()) throw Error("certify_elliptic: zero symbol");
    EllipticReport rep;
    rep.n = form.n();
    rep.order = 2 * *bidegree(form);
    if (rep.order == 0) throw Error("certify_elliptic: symbol of order zero");

    Vector e1(form.n());
    e1[0] = 1;
    rep.complex_form = form;
    if (sgn(real_value(form, e1)) < 0) {
        rep.sign = -1;
        rep.complex_form = scale(form, -1);
    }

    rep.search = find_minimal_d(rep.complex_form, StabilizationMode::strict, d_max);
    if (rep.search.d_min) {
        rep.verdict = EllipticVerdict::elliptic;
        rep.elliptic_certified = rep.search.d_min;
        rep.e_matrix = rep.search.trail.back().certificate.source;
        rep.factor = rep.search.factor;
        return rep;
    }
    for (auto& z : sphere_samples(form.n())) {
        if (sgn(real_value(rep.complex_form, z)) == 0) {
            rep.verdict = EllipticVerdict::not_elliptic;
            rep.zero_witness = std::move(z);
            break;
        }
    }
    return rep;
}

inline EllipticReport certify_elliptic(const RealSymbol& p, unsigned d_max)
{
    const auto deg = p.homogeneous_degree();
    if (!deg) throw BidegreeError("symbol is not homogeneous");
    if (*deg % 2 != 0) throw BidegreeError("symbol has odd order " + std::to_string(*deg));
    return certify_elliptic(real_to_complex(p), d_max);
}

/// Row sum_mu A_mu z^mu rendered as the operator sum_mu A_mu (d/dz)^mu.
inline std::string differential_operator_text(const HoloPolynomial& row)
{
    return detail::poly_text(row.terms(), [](const MultiIndex& a) { return detail::monomial_text("∂z", a); });
}

}  // namespace hermfactor
