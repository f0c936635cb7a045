#include "hermfactor/hermfactor.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace hermfactor;

namespace {

RealSymbol rand_symbol(testkit::Rng& rng, std::size_t n, unsigned deg, int terms)
{
    RealSymbol p(2 * n);
    std::uniform_int_distribution<std::size_t> var(0, 2 * n - 1);
    for (int t = 0; t < terms; ++t) {
        MultiIndex g(2 * n);
        for (unsigned k = 0; k < deg; ++k) g = g + MultiIndex::unit(2 * n, var(rng));
        p.add_term(g, testkit::rand_rational(rng, 6));
    }
    return p;
}

// z_j = xi_{2j-1} + i xi_{2j}
Vector identify(const std::vector<Rational>& xi)
{
    Vector z(xi.size() / 2);
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = GaussianRational(xi[2 * j], xi[2 * j + 1]);
    return z;
}

}  // namespace

TEST(RealToComplex, LaplaceSymbol)
{
    EXPECT_EQ(real_to_complex(parse_real_symbol("x1^2 + x2^2")), parse_form("z1*zb1"));
}

TEST(RealToComplex, SquaredLaplaceSymbol)
{
    EXPECT_EQ(real_to_complex(parse_real_symbol("(x1^2 + x2^2 + x3^2 + x4^2)^2")),
              multiplier_power(BihermitianForm::constant(2, 1), 2));
}

TEST(RealToComplex, NotBihomogeneous)
{
    const auto f = real_to_complex(parse_real_symbol("x1^2 - x2^2"));
    EXPECT_EQ(f, parse_form("(1/2)*z1^2 + (1/2)*zb1^2"));
    EXPECT_FALSE(is_complex_bihomogeneous(f));
}

TEST(ComplexToReal, RoundTrips)
{
    for (const char* s : {"x1^2 + x2^2", "(x1^2 + x2^2 + x3^2 + x4^2)^2", "x1^2 - x2^2"}) {
        const auto p = parse_real_symbol(s);
        EXPECT_EQ(complex_to_real(real_to_complex(p)), p) << s;
    }
    const auto q = complex_to_real(testkit::fc_form(0));
    EXPECT_EQ(q.num_vars(), 4u);
    EXPECT_EQ(q.homogeneous_degree(), 4u);
    EXPECT_EQ(q, parse_real_symbol("(x1^2 + x2^2)^2 + (x3^2 + x4^2)^2"));
    EXPECT_EQ(real_to_complex(q), testkit::fc_form(0));
    EXPECT_TRUE(complex_to_real(BihermitianForm(2)).is_zero());
}

TEST(ComplexToReal, RejectsNonRealForms)
{
    EXPECT_THROW(complex_to_real(parse_form("z1*zb2")), NotHermitianError);
    EXPECT_THROW(complex_to_real(BihermitianForm::constant(2, 1, 2)), DimensionError);
}

TEST(ComplexToReal, RandomRoundTrips)
{
    testkit::Rng rng(61);
    for (int t = 0; t < 40; ++t) {
        const auto p = rand_symbol(rng, 1 + t % 3, t % 5, 1 + t % 6);
        EXPECT_EQ(complex_to_real(real_to_complex(p)), p);
    }
}

TEST(IsComplexBihomogeneous, Examples)
{
    EXPECT_TRUE(is_complex_bihomogeneous(parse_form("z1*zb1")));
    EXPECT_FALSE(is_complex_bihomogeneous(parse_form("(1/2)*z1^2 + (1/2)*zb1^2")));
    for (const Rational& c : {Rational(2), Rational(0), Rational(-1), Rational(-3, 2)})
        EXPECT_TRUE(is_complex_bihomogeneous(testkit::fc_form(c)));
    EXPECT_FALSE(is_complex_bihomogeneous(parse_form("z1*zb1 + z1^2*zb1^2")));
}

TEST(RealToComplex, MultiplicativeOnRandomPairs)
{
    testkit::Rng rng(62);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + t % 2;
        const auto p = rand_symbol(rng, n, 1 + t % 3, 1 + t % 4);
        const auto q = rand_symbol(rng, n, t % 3, 1 + (t / 2) % 4);
        EXPECT_EQ(real_to_complex(p * q), kernel_multiply(real_to_complex(p), real_to_complex(q)));
    }
}

TEST(RealToComplex, PointwiseAgreement)
{
    testkit::Rng rng(63);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + t % 3;
        const auto p = rand_symbol(rng, n, t % 5, 1 + t % 5);
        const auto f = real_to_complex(p);
        for (int s = 0; s < 5; ++s) {
            std::vector<Rational> xi(2 * n);
            for (auto& x : xi) x = testkit::rand_rational(rng, 7);
            EXPECT_EQ(real_value(f, identify(xi)), p.evaluate(xi));
        }
    }
}

TEST(CertifyElliptic, Laplacian)
{
    for (std::size_t n = 1; n <= 4; ++n) {
        RealSymbol p(2 * n);
        for (std::size_t k = 0; k < 2 * n; ++k) p.add_term(MultiIndex::unit(2 * n, k) + MultiIndex::unit(2 * n, k), 1);
        const auto rep = certify_elliptic(p, 16);
        EXPECT_EQ(rep.verdict, EllipticVerdict::elliptic);
        EXPECT_EQ(rep.elliptic_certified, 0u);
        ASSERT_TRUE(rep.factor);
        EXPECT_EQ(rep.factor->size(), n);
        EXPECT_TRUE(rep.factor->rows.unit_weights());
        std::set<std::string> rows;
        for (std::size_t k = 0; k < n; ++k) rows.insert(differential_operator_text(rep.factor->rows(k, 0)));
        std::set<std::string> expect;
        for (std::size_t k = 1; k <= n; ++k) expect.insert("∂z" + std::to_string(k));
        EXPECT_EQ(rows, expect);
        EXPECT_EQ(*rep.e_matrix, Matrix::identity(n));
    }
}

TEST(CertifyElliptic, Bilaplacian)
{
    const auto rep = certify_elliptic(parse_real_symbol("(x1^2 + x2^2 + x3^2 + x4^2)^2"), 16);
    EXPECT_EQ(rep.verdict, EllipticVerdict::elliptic);
    EXPECT_EQ(rep.elliptic_certified, 0u);
}

TEST(CertifyElliptic, FcZeroNeedsOneShift)
{
    const auto rep = certify_elliptic(testkit::fc_form(0), 16);
    EXPECT_EQ(rep.verdict, EllipticVerdict::elliptic);
    EXPECT_EQ(rep.elliptic_certified, 1u);
    EXPECT_EQ(*rep.e_matrix, Matrix::identity(4));
    ASSERT_TRUE(rep.factor);
    ASSERT_EQ(rep.factor->size(), 4u);
    for (std::size_t k = 0; k < 4; ++k) {
        ASSERT_EQ(rep.factor->rows(k, 0).terms().size(), 1u);
        EXPECT_EQ(rep.factor->rows(k, 0).terms().begin()->first.degree(), 3u);
    }
    EXPECT_EQ(gram(rep.factor->rows), multiplier_shift(testkit::fc_form(0)));
    // same verdict from the real symbol
    const auto real = certify_elliptic(complex_to_real(testkit::fc_form(0)), 16);
    EXPECT_EQ(real.elliptic_certified, 1u);
}

TEST(CertifyElliptic, DegenerateSymbolNotCertified)
{
    BihermitianForm f(2);
    f.add_term(0, 0, MultiIndex({1, 0}), MultiIndex({1, 0}), 1);
    const auto rep = certify_elliptic(f, 16);
    EXPECT_FALSE(rep.elliptic_certified);
    EXPECT_EQ(rep.search.trail.size(), 17u);
    for (const auto& step : rep.search.trail) EXPECT_GE(step.certificate.inertia.zero, 1u);
}

TEST(CertifyElliptic, DegenerateSymbolOnTwoVariables)
{
    BihermitianForm f(2);
    f.add_term(0, 0, MultiIndex({1, 0}), MultiIndex({1, 0}), 1);
    const auto rep = certify_elliptic(f, 16);
    EXPECT_FALSE(rep.elliptic_certified);
    EXPECT_EQ(rep.verdict, EllipticVerdict::not_elliptic);
    ASSERT_TRUE(rep.zero_witness);
    EXPECT_EQ(norm2(*rep.zero_witness), 1);
    EXPECT_EQ(real_value(f, *rep.zero_witness), 0);
    EXPECT_STREQ(EllipticReport::variety_condition, "not checked");
}

TEST(CertifyElliptic, IndefiniteSymbolWithoutRationalZero)
{
    // |z1|^2 - 2|z2|^2 vanishes only where |z2|^2 = 1/3, no rational grid point hits it
    BihermitianForm f(2);
    f.add_term(0, 0, MultiIndex({1, 0}), MultiIndex({1, 0}), 1);
    f.add_term(0, 0, MultiIndex({0, 1}), MultiIndex({0, 1}), -2);
    const auto rep = certify_elliptic(f, 4);
    EXPECT_FALSE(rep.elliptic_certified);
    EXPECT_EQ(rep.verdict, EllipticVerdict::not_certified);
}

TEST(CertifyElliptic, NegativeSymbolIsNormalized)
{
    const auto rep = certify_elliptic(parse_real_symbol("-x1^2 - x2^2 - x3^2 - x4^2"), 4);
    EXPECT_EQ(rep.sign, -1);
    EXPECT_EQ(rep.verdict, EllipticVerdict::elliptic);
    EXPECT_EQ(rep.elliptic_certified, 0u);
}

TEST(CertifyElliptic, Errors)
{
    EXPECT_THROW(certify_elliptic(parse_real_symbol("x1^3 + x2^3"), 4), BidegreeError);
    EXPECT_THROW(certify_elliptic(parse_real_symbol("x1^2 + x2^4"), 4), BidegreeError);
    EXPECT_THROW(certify_elliptic(parse_real_symbol("x1^2 - x2^2"), 4), BidegreeError);
    EXPECT_THROW(certify_elliptic(parse_form("z1*zb2"), 4), NotHermitianError);
    EXPECT_THROW(certify_elliptic(BihermitianForm(2), 4), Error);
    EXPECT_THROW(parse_real_symbol("z1*zb1"), ParseError);
    EXPECT_THROW(RealSymbol(3), DimensionError);
}

TEST(CertifyElliptic, SuccessPersistsUnderFurtherShifts)
{
    testkit::Rng rng(64);
    int certified = 0;
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + t % 2;
        const unsigned m = 1 + t % 2;
        const auto f = testkit::form_of_kind(rng, t % 2 ? testkit::Kind::pd : testkit::Kind::indefinite, n, 1, m);
        Vector e1(n);
        e1[0] = 1;
        if (real_value(f, e1) < 0) continue;
        const auto rep = certify_elliptic(f, 6);
        if (!rep.elliptic_certified) continue;
        ++certified;
        const unsigned d = *rep.elliptic_certified;
        for (unsigned e = d; e <= d + 2; ++e)
            EXPECT_TRUE(is_positive_definite(coefficient_matrix(multiplier_power(rep.complex_form, e)).matrix).first);
    }
    EXPECT_GE(certified, 15);
}

TEST(CertifyElliptic, PositiveDefiniteIffStrictFactor)
{
    testkit::Rng rng(65);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + t % 3;
        const unsigned m = 1 + t % 2;
        const auto f = testkit::form_of_kind(rng, static_cast<testkit::Kind>(t % 3), n, 1, m);
        for (unsigned d = 0; d <= 2; ++d) {
            const auto g = multiplier_power(f, d);
            const bool pd = is_positive_definite(coefficient_matrix(g).matrix).first;
            const auto w = strict_holomorphic_factor(g);
            EXPECT_EQ(pd, w.has_value());
            if (w) {
                EXPECT_EQ(gram(w->rows), g);
            }
        }
    }
}

TEST(DifferentialOperatorText, Monomials)
{
    HoloPolynomial p(2);
    p.add_term(MultiIndex({2, 1}), 3);
    EXPECT_EQ(differential_operator_text(p), "3*∂z1^2*∂z2");
}
