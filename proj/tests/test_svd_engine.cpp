#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include <sobosvd/svd_engine.hpp>
#include <sobosvd/test_functions.hpp>

#include "oracle.hpp"

using namespace sobosvd;
using Quad = boost::multiprecision::float128;

namespace {

Coeffs2D coscos(int n = 4) { return analyze(functions::coscos, n); }

void expect_orthonormal(const Matrix& v, const Vector& w, double tol) {
    const Matrix g = v.transpose() * w.asDiagonal() * v;
    EXPECT_LT((g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff(), tol);
}

} // namespace

TEST(JacobiSvd, MatchesOracleOnRandomMatrices) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        const Matrix m = oracle::random_matrix(rng, 7, 5);
        const auto s = jacobi_svd<double>(m);
        const auto ref = oracle::singular_values(m);
        ASSERT_EQ(s.s.size(), 5);
        for (int k = 0; k < 5; ++k) EXPECT_NEAR(s.s[k], ref[k], 1e-12);
        EXPECT_LT((s.u * s.s.asDiagonal() * s.v.transpose() - m).cwiseAbs().maxCoeff(), 1e-13);
        expect_orthonormal(s.u, Vector::Ones(7), 1e-13);
        expect_orthonormal(s.v, Vector::Ones(5), 1e-13);
    }
}

TEST(JacobiSvd, WideMatrixAndSignConvention) {
    std::mt19937_64 rng(5);
    const Matrix m = oracle::random_matrix(rng, 3, 6);
    const auto s = jacobi_svd<double>(m);
    EXPECT_EQ(s.s.size(), 3);
    EXPECT_LT((s.u * s.s.asDiagonal() * s.v.transpose() - m).cwiseAbs().maxCoeff(), 1e-13);
    for (Index k = 0; k < s.u.cols(); ++k) {
        const double big = s.u.col(k).cwiseAbs().maxCoeff();
        for (Index i = 0; i < s.u.rows(); ++i)
            if (std::abs(s.u(i, k)) > 1e-8 * big) {
                EXPECT_GT(s.u(i, k), 0.0);
                break;
            }
    }
}

TEST(JacobiSvd, NonConvergenceCarriesResidual) {
    std::mt19937_64 rng(9);
    const Matrix m = oracle::random_matrix(rng, 12, 12);
    JacobiOptions opt;
    opt.max_sweeps = 1;
    try {
        jacobi_svd<double>(m, opt);
        FAIL() << "expected non-convergence";
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.residual(), opt.tolerance);
    }
}

TEST(JacobiSvd, RejectsNonFinite) {
    Matrix m = Matrix::Ones(3, 3);
    m(1, 2) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(jacobi_svd<double>(m), NonFiniteError);
}

TEST(WeightedSvd, CosCosVariants) {
    const auto c = coscos();
    const std::pair<SvdVariant, double> cases[] = {
        {SvdVariant::L2L2, pi}, {SvdVariant::H1L2, pi * std::sqrt(2.0)}, {SvdVariant::L2H1, pi * std::sqrt(2.0)}, {SvdVariant::Mix, 2 * pi}};
    for (const auto& [v, sigma] : cases) {
        const auto s = weighted_svd(c, v);
        ASSERT_EQ(s.rank(), 1) << variant_tag(v);
        EXPECT_NEAR(s.sigma[0], sigma, 1e-12);
    }
}

TEST(WeightedSvd, ZeroArrayHasEmptySpectrum) {
    EXPECT_EQ(weighted_svd(Coeffs2D(3), SvdVariant::H1L2).rank(), 0);
}

TEST(WeightedSvd, OracleOnIntegerArrays) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> d(-2, 2);
    for (int t = 0; t < 200; ++t) {
        Matrix m(5, 5);
        for (Index j = 0; j < 5; ++j)
            for (Index i = 0; i < 5; ++i) m(i, j) = d(rng);
        const auto s = weighted_svd(Coeffs2D(m), SvdVariant::L2L2);
        const auto ref = oracle::singular_values<Quad>(m);
        for (int k = 0; k < 5; ++k) EXPECT_NEAR(s.value(k + 1), ref[k], 1e-8);
    }
}

TEST(WeightedSvd, InvariantsOfEveryVariant) {
    const auto c = analyze(functions::r06, 6);
    const double total = c.c.squaredNorm();
    for (auto v : {SvdVariant::L2L2, SvdVariant::H1L2, SvdVariant::L2H1, SvdVariant::Mix}) {
        const auto s = weighted_svd(c, v);
        expect_orthonormal(s.left, s.row_weight, 1e-11);
        expect_orthonormal(s.right, s.col_weight, 1e-11);
        for (Index k = 1; k < s.rank(); ++k) EXPECT_GE(s.sigma[k - 1], s.sigma[k]);
        const Matrix back = s.left * s.sigma.asDiagonal() * s.right.transpose();
        EXPECT_LT((back - c.c).cwiseAbs().maxCoeff(), 1e-10 * std::sqrt(total));
        // Norm consistency in the variant's crossnorm.
        const auto [rk, ck] = variant_factors(v);
        const SobolevWeight w = SobolevWeight::product({rk, ck});
        EXPECT_NEAR(s.sigma.squaredNorm(), norm_squared(c, w), 1e-10 * norm_squared(c, w));
    }
}

TEST(WeightedSvd, ScalingEquivariance) {
    const auto c = analyze(functions::absdiag, 5);
    const auto base = weighted_svd(c, SvdVariant::H1L2);
    for (double a : {-1.0, 0.5, 3.0}) {
        const auto s = weighted_svd(Coeffs2D(Matrix(a * c.c)), SvdVariant::H1L2);
        ASSERT_EQ(s.rank(), base.rank());
        for (Index k = 0; k < s.rank(); ++k) {
            EXPECT_NEAR(s.sigma[k], std::abs(a) * base.sigma[k], 1e-11 * base.sigma[0]);
            if (base.sigma[k] > 1e-6 * base.sigma[0]) {
                const double dot = std::abs(s.left.col(k).dot(base.row_weight.asDiagonal() * base.left.col(k)));
                EXPECT_NEAR(dot, 1.0, 1e-6);
            }
        }
    }
    EXPECT_EQ(weighted_svd(Coeffs2D(Matrix(0.0 * c.c)), SvdVariant::H1L2).rank(), 0);
}

TEST(WeightedSvd, ScaledMatchesExplicitScaledOracle) {
    std::mt19937_64 rng(23);
    const Matrix m = oracle::random_matrix(rng, 5, 5);
    const int n = 2;
    for (auto v : {SvdVariant::H1L2, SvdVariant::L2H1, SvdVariant::Mix}) {
        const auto [rk, ck] = variant_factors(v);
        const Matrix scaled = weight_vector(n, rk).cwiseSqrt().asDiagonal() * m * weight_vector(n, ck).cwiseSqrt().asDiagonal();
        const auto ref = oracle::singular_values<Quad>(scaled);
        const auto s = weighted_svd(Coeffs2D(m), v);
        for (int k = 0; k < 5; ++k) EXPECT_NEAR(s.value(k + 1), ref[k], 1e-8);
    }
}

TEST(WeightedSvd, RejectsBadWeights) {
    Matrix m = Matrix::Ones(3, 3);
    EXPECT_THROW(weighted_svd<double>(m, Vector::Ones(2), Vector::Ones(3), SvdVariant::L2L2), InvalidArgument);
    EXPECT_THROW(weighted_svd<double>(m, -Vector::Ones(3), Vector::Ones(3), SvdVariant::L2L2), InvalidArgument);
    EXPECT_THROW(weighted_svd(Coeffs2D(m), SvdVariant::ModeH1), InvalidArgument);
}

TEST(WeightedSvd, MinimalSubspacesCoincide) {
    auto f = [](double x, double y) { return std::cos(x) * std::sin(2 * y) + std::cos(3 * x + y) + std::sin(x - 2 * y); };
    const auto c = analyze(f, 16);
    const auto s00 = weighted_svd(c, SvdVariant::L2L2);
    const auto s10 = weighted_svd(c, SvdVariant::H1L2);
    const auto s01 = weighted_svd(c, SvdVariant::L2H1);
    ASSERT_EQ(s00.rank(), s10.rank());
    ASSERT_EQ(s00.rank(), s01.rank());
    EXPECT_LT(oracle::largest_angle_sine(s00.left, s10.left), 1e-7);
    EXPECT_LT(oracle::largest_angle_sine(s00.left, s01.left), 1e-7);
}

TEST(Hosvd3, CosProductPlainH1) {
    const auto t = analyze([](double x, double y, double z) { return std::cos(x) * std::cos(y) * std::cos(z); }, 2);
    for (auto& s : hosvd3(t, HosvdFamily::PlainH1)) {
        ASSERT_EQ(s.rank(), 1);
        EXPECT_NEAR(s.sigma[0], std::sqrt(2 * pi) * pi, 1e-12);
        expect_orthonormal(s.left, s.row_weight, 1e-12);
    }
}

TEST(Hosvd3, ZeroAndRankTwo) {
    for (auto& s : hosvd3(Coeffs3D(2), HosvdFamily::MixJ)) EXPECT_EQ(s.rank(), 0);
    auto f = [](double x, double y, double z) {
        return std::cos(x) * std::sin(2 * y) * std::cos(z) + std::exp(std::sin(x)) * std::cos(y) * (1 + std::sin(2 * z));
    };
    const auto t = analyze(f, 4);
    for (auto family : {HosvdFamily::PlainH1, HosvdFamily::MixJ})
        for (auto& s : hosvd3(t, family)) {
            ASSERT_GE(s.rank(), 2);
            EXPECT_LT(s.value(3), 1e-10 * s.value(1));
        }
}

TEST(H2dUnion, Examples) {
    const auto c = coscos();
    const auto s10 = weighted_svd(c, SvdVariant::H1L2), s01 = weighted_svd(c, SvdVariant::L2H1);
    const auto m = h2d_union(s10, s01);
    ASSERT_EQ(m.entries.size(), 2u);
    EXPECT_NEAR(m.entries[0].value, pi * std::sqrt(2.0), 1e-12);
    EXPECT_EQ(m.entries[0].source, SvdVariant::H1L2);
    EXPECT_EQ(m.entries[1].source, SvdVariant::L2H1);

    SingularSystem<double> a, b;
    a.variant = SvdVariant::H1L2;
    b.variant = SvdVariant::L2H1;
    a.sigma = Vector(2);
    a.sigma << 3, 1;
    b.sigma = Vector(1);
    b.sigma << 2;
    EXPECT_EQ(h2d_union(a, b).values(), (std::vector<double>{3, 2, 1}));
    SingularSystem<double> empty;
    empty.variant = SvdVariant::L2H1;
    EXPECT_EQ(h2d_union(a, empty).values(), (std::vector<double>{3, 1}));
    EXPECT_THROW(h2d_union(b, a), InvalidArgument);
}

TEST(H2dUnion, SumOfSquares) {
    const auto c = analyze(functions::absdiag, 8);
    const auto m = h2d_union(weighted_svd(c, SvdVariant::H1L2), weighted_svd(c, SvdVariant::L2H1));
    double s = 0;
    for (double v : m.values()) s += v * v;
    const double expect = norm_squared(c, SobolevWeight::h10()) + norm_squared(c, SobolevWeight::h01());
    EXPECT_NEAR(s, expect, 1e-10 * expect);
    const auto v = m.values();
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end(), std::greater<>()));
}
