#pragma once

// Finite-dimensional view of the integral operator with kernel F(z, wbar)
// acting on r-tuples of degree-d homogeneous polynomials, in the monomial
// basis with exact (reduced) L2 weights p~_alpha.
//
// With h_i = sum H_{i alpha} z^alpha, <Th, h> = H^* Q H where
// Q((j,alpha),(i,beta)) = F_{ij alpha beta} p~_alpha p~_beta, i.e. Q = Dp M Dp
// for the coefficient matrix M and Dp = diag(p~). ||h||^2 = sum |H|^2 p~.

#include "hermfactor/certify.hpp"
#include "hermfactor/factor.hpp"
#include "hermfactor/form.hpp"
#include "hermfactor/multiindex.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace hermfactor {

struct OperatorMatrix {
    Matrix q;
    std::vector<Rational> weights;  // p~ of the monomial at each (slot, alpha) index
    CoefficientMatrix source;
};

/// Q = Dw M Dw for an arbitrary positive weight per basis monomial.
inline OperatorMatrix operator_matrix_weighted(const CoefficientMatrix& cm, const std::vector<Rational>& monomial_weights)
{
    if (monomial_weights.size() != cm.basis.size()) throw DimensionError("one weight per basis monomial required");
    const std::size_t big = cm.matrix.rows();
    OperatorMatrix op;
    op.source = cm;
    op.weights.resize(big);
    for (std::size_t k = 0; k < big; ++k) {
        op.weights[k] = monomial_weights[k % cm.basis.size()];
        if (sgn(op.weights[k]) <= 0) throw Error("weights must be positive");
    }
    op.q = Matrix(big, big);
    for (std::size_t a = 0; a < big; ++a)
        for (std::size_t b = 0; b < big; ++b)
            if (!cm.matrix(a, b).is_zero())
                op.q(a, b) = cm.matrix(a, b) * GaussianRational(op.weights[a] * op.weights[b]);
    return op;
}

inline OperatorMatrix operator_matrix(const BihermitianForm& f, unsigned d)
{
    if (!f.is_zero()) {
        const auto m = bidegree(f);
        if (!m || *m != d) throw BidegreeError("operator_matrix: form does not have bidegree " + std::to_string(d));
    }
    const CoefficientMatrix cm = coefficient_matrix(f, d);
    std::vector<Rational> p;
    p.reserve(cm.basis.size());
    for (const auto& alpha : cm.basis.monomials()) p.push_back(monomial_norm_reduced(alpha));
    return operator_matrix_weighted(cm, p);
}

/// <Th,h> >= c ||h||^2 on V_d, decided exactly as positive-definiteness of Q.
inline std::pair<bool, SignatureCertificate> operator_positive(const BihermitianForm& f, unsigned d)
{
    return is_positive_definite(operator_matrix(f, d).q);
}

/// Weighted pairing <A_k, h> = sum_{j,alpha} A_{kj,alpha} conj(H_{j alpha}) p~_alpha.
inline GaussianRational weighted_pairing(const HoloPolyMatrix& a, std::size_t row, const Vector& h,
                                         const MonomialBasis& basis)
{
    const std::size_t nb = basis.size();
    GaussianRational acc;
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (const auto& [alpha, c] : a(row, j).terms()) {
            const GaussianRational& hv = h.at(j * nb + basis.position(alpha));
            if (!hv.is_zero()) acc += c * hv.conj() * GaussianRational(monomial_norm_reduced(alpha));
        }
    return acc;
}

/// h^* Q h == sum_k a_k |<A_k, h>|^2, checked exactly.
inline bool pairing_identity_check(const WeightedGramFactor& w, const Vector& h)
{
    const auto m = bidegree(w.target);
    if (!m) throw BidegreeError("pairing_identity_check: target is not bihomogeneous");
    const OperatorMatrix op = operator_matrix(w.target, *m);
    if (h.size() != op.q.rows()) throw DimensionError("h length differs from r * dim V_d");
    if (w.rows.cols() != w.target.r()) throw DimensionError("factor columns differ from target size");
    const GaussianRational lhs = quadratic_form(op.q, h);
    GaussianRational rhs;
    for (std::size_t k = 0; k < w.rows.rows(); ++k)
        rhs += GaussianRational(w.rows.weight(k) * weighted_pairing(w.rows, k, h, op.source.basis).norm2());
    return lhs == rhs;
}

/// C~_d * multinomial(d, alpha) * p~_alpha == 1 for every |alpha| = d: the
/// degree-d part of the ball's Bergman kernel reproduces degree-d monomials.
inline bool reproducing_check(std::size_t n, unsigned d)
{
    const Rational c = bergman_coefficient_reduced(n, d);
    for (const auto& alpha : enumerate_degree(n, d))
        if (c * multinomial(d, alpha) * monomial_norm_reduced(alpha) != 1) return false;
    return true;
}

}  // namespace hermfactor
