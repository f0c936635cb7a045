#include "hermfactor/hermfactor.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace hermfactor;

namespace {

BihermitianForm intro_form() { return parse_form("z1^2*zb1^2 + z2^2*zb2^2"); }
BihermitianForm diff_square() { return parse_form("(z1*zb1 - z2*zb2)^2"); }

std::set<std::string> row_texts(const HoloPolyMatrix& a)
{
    std::set<std::string> out;
    for (std::size_t k = 0; k < a.rows(); ++k) out.insert(to_expression(a(k, 0)));
    return out;
}

}  // namespace

TEST(DifferenceOfSquares, DifferenceSquareForm)
{
    const auto ds = difference_of_squares(diff_square());
    EXPECT_EQ(ds.positive.size(), 2u);
    ASSERT_EQ(ds.negative.size(), 1u);
    EXPECT_EQ(to_expression(ds.negative.rows(0, 0)), "z1*z2");
    EXPECT_EQ(ds.negative.rows.weight(0), 2);
    EXPECT_EQ(row_texts(ds.positive.rows), (std::set<std::string>{"z1^2", "z2^2"}));
    EXPECT_EQ(ds.reconstruct(), diff_square());
}

TEST(DifferenceOfSquares, SquaredNormHasNoNegativePart)
{
    const auto f = parse_form("(z1*zb1 + z2*zb2)^2");
    const auto ds = difference_of_squares(f);
    EXPECT_EQ(ds.negative.size(), 0u);
    EXPECT_EQ(ds.positive.size(), 3u);
    EXPECT_EQ(ds.reconstruct(), f);
}

TEST(DifferenceOfSquares, FcMinusOne)
{
    const auto ds = difference_of_squares(testkit::fc_form(-1));
    EXPECT_EQ(ds.positive.size(), 2u);
    EXPECT_EQ(ds.negative.size(), 1u);
    EXPECT_EQ(ds.reconstruct(), testkit::fc_form(-1));
}

TEST(DifferenceOfSquares, HomogeneousRowsForBihomogeneousInput)
{
    testkit::Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        const unsigned m = 1 + t % 3;
        const auto ds = difference_of_squares(testkit::rand_form(rng, 2, 1 + t % 2, m));
        EXPECT_TRUE(ds.positive.rows.is_homogeneous(m));
        EXPECT_TRUE(ds.negative.rows.is_homogeneous(m));
    }
}

TEST(DifferenceOfSquares, RejectsNonHermitian)
{
    EXPECT_THROW(difference_of_squares(parse_form("z1*zb2")), NotHermitianError);
}

TEST(DifferenceOfSquares, ReconstructsRandomForms)
{
    testkit::Rng rng(32);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + t % 3, r = 1 + (t / 3) % 2;
        const unsigned m = (t / 6) % 4;
        const auto f = t % 5 == 4 ? testkit::rand_general_form(rng, n, r, std::min(m, 2u))
                                  : testkit::rand_form(rng, n, r, m);
        const auto ds = difference_of_squares(f);
        EXPECT_EQ(ds.reconstruct(), f) << to_expression(f);
        EXPECT_EQ(ds.positive.size(), ds.certificate.inertia.positive);
        EXPECT_EQ(ds.negative.size(), ds.certificate.inertia.negative);
    }
}

TEST(HolomorphicFactor, IntroExample)
{
    const auto w = holomorphic_factor(intro_form());
    ASSERT_TRUE(w);
    EXPECT_EQ(row_texts(w->rows), (std::set<std::string>{"z1^2", "z2^2"}));
    EXPECT_TRUE(w->rows.unit_weights());
    EXPECT_TRUE(w->reconstructs());
}

TEST(HolomorphicFactor, DifferenceSquareIsNotFactorable) { EXPECT_FALSE(holomorphic_factor(diff_square())); }

TEST(HolomorphicFactor, ShiftedFcMinusOne)
{
    const auto f = multiplier_shift(testkit::fc_form(-1));
    EXPECT_EQ(coefficient_matrix(f).matrix, Matrix::diagonal({1, 0, 0, 1}));
    const auto w = holomorphic_factor(f);
    ASSERT_TRUE(w);
    EXPECT_EQ(row_texts(w->rows), (std::set<std::string>{"z1^3", "z2^3"}));
}

TEST(HolomorphicFactor, RoundTripOnRandomPsdInstances)
{
    testkit::Rng rng(33);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + t % 3, r = 1 + (t / 3) % 2;
        const unsigned m = (t / 6) % 3;
        const auto a = testkit::rand_holo(rng, n, 1 + t % 4, r, m, 4, t % 2 == 1);
        const auto f = gram(a);
        const auto w = holomorphic_factor(f);
        ASSERT_TRUE(w);
        EXPECT_EQ(gram(w->rows), f);
        EXPECT_LE(w->size(), a.rows());
        EXPECT_EQ(w->size(), rank(coefficient_matrix(f).matrix));
    }
}

TEST(StrictFactor, IntroExample)
{
    EXPECT_FALSE(strict_holomorphic_factor(intro_form()));
    const auto w = strict_holomorphic_factor(multiplier_shift(intro_form()));
    ASSERT_TRUE(w);
    EXPECT_EQ(w->size(), 4u);
    EXPECT_EQ(row_texts(w->rows), (std::set<std::string>{"z1^3", "z1^2*z2", "z1*z2^2", "z2^3"}));
}

TEST(StrictFactor, InnerProductPowerTimesIdentity)
{
    for (std::size_t r = 1; r <= 3; ++r)
        for (unsigned m = 0; m <= 3; ++m) {
            const auto f = multiplier_power(BihermitianForm::constant(2, 1, r), m);
            const auto w = strict_holomorphic_factor(f);
            ASSERT_TRUE(w);
            EXPECT_EQ(w->size(), r * dim_homogeneous(2, m));
            EXPECT_TRUE(w->reconstructs());
        }
}

TEST(StrictFactor, AgreesWithPositiveDefiniteness)
{
    testkit::Rng rng(34);
    for (int t = 0; t < 200; ++t) {
        const auto kind = static_cast<testkit::Kind>(t % 3);
        const std::size_t n = 1 + t % 2, r = 1 + (t / 2) % 2;
        const unsigned m = (t / 4) % 3;
        const auto f = testkit::form_of_kind(rng, kind, n, r, m);
        const bool pd = is_positive_definite(coefficient_matrix(f).matrix).first;
        const auto w = strict_holomorphic_factor(f);
        EXPECT_EQ(pd, w.has_value());
        EXPECT_EQ(pd, kind == testkit::Kind::pd);
        if (w) {
            EXPECT_EQ(w->size(), r * dim_homogeneous(n, m));
            EXPECT_EQ(gram(w->rows), f);
        }
    }
}

TEST(StrictFactor, TwoFactorsDifferByUnitaryMixing)
{
    // Random basis rows A and the LDL factor W both reproduce F.
    testkit::Rng rng(35);
    for (int t = 0; t < 20; ++t) {
        const auto basis = MonomialBasis::homogeneous(2, 2);
        std::vector<Vector> vecs;
        const Matrix c = testkit::rand_invertible(rng, 3, 3);
        for (std::size_t k = 0; k < 3; ++k) vecs.push_back(Vector(c.row(k).begin(), c.row(k).end()));
        const auto a = rows_from_vectors(vecs, {1, 1, 1}, basis, 1);
        const auto f = gram(a);
        const auto w = strict_holomorphic_factor(f);
        ASSERT_TRUE(w);
        EXPECT_EQ(gram(w->rows), gram(a));
        EXPECT_FALSE(w->rows == a);
    }
}

TEST(NumericFactor, UnitWeightsUnchanged)
{
    const auto w = holomorphic_factor(intro_form());
    ASSERT_TRUE(w);
    const auto nf = numeric_factor(*w, 12);
    for (std::size_t k = 0; k < nf.rows; ++k) {
        ASSERT_EQ(nf(k, 0).size(), 1u);
        EXPECT_EQ(nf(k, 0)[0].second.re, 1);
        EXPECT_EQ(nf(k, 0)[0].second.im, 0);
    }
}

TEST(NumericFactor, SquareRootOfWeight)
{
    WeightedGramFactor w;
    w.rows = HoloPolyMatrix(1, 0, 1);
    HoloPolynomial p(1);
    p.add_term(MultiIndex({1}), 1);
    w.rows.append_row({p}, 2);
    w.target = gram(w.rows);
    const auto nf = numeric_factor(w, 30);
    EXPECT_NEAR(nf(0, 0)[0].second.re.get_d(), std::sqrt(2.0), 1e-15);
    const mpf_class err = nf(0, 0)[0].second.re * nf(0, 0)[0].second.re - 2;
    EXPECT_LT(std::abs(err.get_d()), 1e-28);
}

TEST(NumericFactor, FcTwoReconstructsWithinTolerance)
{
    const auto w = holomorphic_factor(testkit::fc_form(2));
    ASSERT_TRUE(w);
    EXPECT_EQ(w->size(), 3u);
    const auto nf = numeric_factor(*w, 12);
    const auto pts = random_sphere_points(2, 20, 7);
    for (const auto& z : pts) EXPECT_EQ(norm2(z), 1);
    EXPECT_LT(numeric_reconstruction_error(nf, pts), 1e-8);
}

TEST(NumericFactor, RandomFactorsReconstruct)
{
    testkit::Rng rng(36);
    for (int t = 0; t < 20; ++t) {
        const auto f = gram(testkit::rand_holo(rng, 2, 3, 1 + t % 2, 2, 4, true));
        const auto w = holomorphic_factor(f);
        ASSERT_TRUE(w);
        for (unsigned digits : {12u, 30u}) {
            const double err = numeric_reconstruction_error(numeric_factor(*w, digits), random_sphere_points(2, 20, t));
            EXPECT_LT(err, std::pow(10.0, -static_cast<double>(digits) + 4));
        }
    }
}

TEST(FactorCertificate, JsonRoundTrip)
{
    const auto w = holomorphic_factor(testkit::fc_form(Rational(1, 3)));
    ASSERT_TRUE(w);
    const auto back = factor_certificate_from_json(Json::parse(factor_certificate_to_json(*w).dump()));
    EXPECT_TRUE(back.reconstructs());
    EXPECT_EQ(back.rows, w->rows);
    auto tampered = back;
    tampered.rows.set_weight(0, tampered.rows.weight(0) + 1);
    EXPECT_FALSE(tampered.reconstructs());
}
