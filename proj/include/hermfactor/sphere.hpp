#pragma once

// Exact rational points on the unit sphere of C^n = R^{2n}, via inverse
// stereographic projection from the pole (0, ..., 0, 1).

#include "hermfactor/matrix.hpp"
#include "hermfactor/rational.hpp"

#include <cstddef>
#include <random>
#include <vector>

namespace hermfactor {

/// t in Q^{2n-1} -> (2t, |t|^2 - 1) / (|t|^2 + 1), packed as n complex
/// coordinates (x1 + i y1, ..., xn + i yn).
inline Vector sphere_point(const std::vector<Rational>& t)
{
    const std::size_t real_dim = t.size() + 1;
    if (real_dim % 2 != 0) throw DimensionError("sphere_point needs an odd number of parameters");
    Rational s = 0;
    for (const auto& v : t) s += v * v;
    const Rational den = s + 1;
    std::vector<Rational> x(real_dim);
    for (std::size_t k = 0; k < t.size(); ++k) x[k] = 2 * t[k] / den;
    x[real_dim - 1] = (s - 1) / den;
    Vector z(real_dim / 2);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = GaussianRational(x[2 * k], x[2 * k + 1]);
    return z;
}

/// Exact squared norm sum |z_k|^2.
inline Rational norm2(const Vector& z)
{
    Rational s = 0;
    for (const auto& c : z) s += c.norm2();
    return s;
}

/// Deterministic pseudo-random rational sphere points for a given seed.
inline std::vector<Vector> random_sphere_points(std::size_t n, std::size_t count, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    std::vector<Vector> out;
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<Rational> t(2 * n - 1);
        for (auto& v : t) {
            v = Rational(num(rng), den(rng));
            v.canonicalize();
        }
        out.push_back(sphere_point(t));
    }
    return out;
}

}  // namespace hermfactor
