#pragma once

#include "hermfactor/rational.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hermfactor {

using Vector = std::vector<GaussianRational>;

/// Dense row-major matrix over the Gaussian rationals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
        return m;
    }

    static Matrix diagonal(const std::vector<GaussianRational>& d)
    {
        Matrix m(d.size(), d.size());
        for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    GaussianRational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const GaussianRational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::span<GaussianRational> row(std::size_t i) { return {a_.data() + i * cols_, cols_}; }
    std::span<const GaussianRational> row(std::size_t i) const { return {a_.data() + i * cols_, cols_}; }

    bool is_zero() const
    {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    bool is_hermitian() const
    {
        if (!square()) return false;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (!(*this)(i, i).is_real()) return false;
            for (std::size_t j = 0; j < i; ++j)
                if ((*this)(i, j) != (*this)(j, i).conj()) return false;
        }
        return true;
    }

    Matrix adjoint() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j).conj();
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const auto& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const auto& bkj = b(k, j);
                    if (!bkj.is_zero()) c(i, j) += aik * bkj;
                }
            }
        return c;
    }

    friend Matrix operator+(Matrix a, const Matrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix sum shape mismatch");
        for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] += b.a_[k];
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix difference shape mismatch");
        for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] -= b.a_[k];
        return a;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<GaussianRational> a_;
};

/// Square matrices passed to the certification layer. Hermitian symmetry is
/// checked where it matters rather than enforced by the type.
using HermitianMatrix = Matrix;

/// v* M v. Real (imaginary part zero) whenever M is Hermitian.
inline GaussianRational quadratic_form(const Matrix& m, std::span<const GaussianRational> v)
{
    if (!m.square() || m.rows() != v.size()) throw DimensionError("quadratic form shape mismatch");
    GaussianRational acc;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (v[i].is_zero()) continue;
        GaussianRational row;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!v[j].is_zero() && !m(i, j).is_zero()) row += m(i, j) * v[j];
        acc += v[i].conj() * row;
    }
    return acc;
}

inline Vector mat_vec(const Matrix& m, std::span<const GaussianRational> v)
{
    if (m.cols() != v.size()) throw DimensionError("matrix-vector shape mismatch");
    Vector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero() && !v[j].is_zero()) out[i] += m(i, j) * v[j];
    return out;
}

/// Exact rank by Gaussian elimination.
inline std::size_t rank(Matrix m)
{
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (m(i, c).is_zero()) continue;
            const GaussianRational f = m(i, c) / m(r, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

/// Exact inverse by Gauss-Jordan; throws if singular.
inline Matrix inverse(const Matrix& a)
{
    if (!a.square()) throw DimensionError("inverse of non-square matrix");
    const std::size_t n = a.rows();
    Matrix m = a, inv = Matrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c).is_zero()) ++p;
        if (p == n) throw Error("matrix is singular");
        if (p != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(p, j), m(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        const GaussianRational piv = m(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m(i, c).is_zero()) continue;
            const GaussianRational f = m(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                if (!m(c, j).is_zero()) m(i, j) -= f * m(c, j);
                if (!inv(c, j).is_zero()) inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

}  // namespace hermfactor
