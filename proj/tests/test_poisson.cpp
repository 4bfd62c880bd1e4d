#include <gtest/gtest.h>

#include <cmath>

#include <sobosvd/poisson.hpp>
#include <sobosvd/test_functions.hpp>

using namespace sobosvd;

TEST(ManufactureRhs, Examples) {
    const auto f = manufacture_rhs(functions::coscos, 4);
    EXPECT_NEAR(f.c(1, 1), 2 * pi, 1e-12);
    EXPECT_EQ(f.c(0, 0), 0.0);

    const auto z = manufacture_rhs([](double, double) { return 3.0; }, 4);
    EXPECT_LT(z.c.cwiseAbs().maxCoeff(), 1e-12);

    // Closed-form Laplacian as oracle.
    const auto fe = manufacture_rhs(functions::expcos, 16);
    const auto ref = analyze(functions::expcos_neg_laplacian, 16);
    EXPECT_LT((fe.c - ref.c).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_EQ(fe.c(0, 0), 0.0);
}

TEST(GalerkinSolve, Examples) {
    Coeffs2D f(4);
    f.c(1, 1) = 2 * pi;
    const auto u = galerkin_solve(f, 0.0);
    EXPECT_LT((u.c - analyze(functions::coscos, 4).c).cwiseAbs().maxCoeff(), 1e-12);

    const auto k = galerkin_solve(Coeffs2D(3), 1.5);
    const std::array<std::array<double, 2>, 1> p{{{0.3, -1.0}}};
    EXPECT_NEAR(synthesize(k, p)[0], 1.5, 1e-14);

    Coeffs2D bad(2);
    bad.c(0, 0) = 1.0;
    EXPECT_THROW(galerkin_solve(bad, 0.0), InvalidArgument);
}

TEST(GalerkinSolve, Orthogonality) {
    const auto f = manufacture_rhs(functions::ring, 16);
    const auto u = galerkin_solve(f, 0.2);
    EXPECT_LT(galerkin_residual(u, f), 1e-12 * std::max(1.0, f.c.cwiseAbs().maxCoeff()));
}

TEST(Truncation, Examples) {
    const auto cc = analyze(functions::coscos, 6);
    EXPECT_LE(truncate_with_guarantee(cc, 1e-3).rank, 1);
    const auto c = analyze(functions::r06, 8);
    EXPECT_EQ(truncate_with_guarantee(c, h1_norm(c)).rank, 0);
    EXPECT_THROW(truncate_with_guarantee(c, 0.0), InvalidArgument);
}

TEST(Truncation, RankNeverExceedsSize) {
    const auto c = analyze(functions::absdiag, 6);
    const auto t = truncate_with_guarantee(c, 1e-300);
    EXPECT_LE(t.rank, c.size());
}

TEST(Convergence, CosCosIsExact) {
    const auto runs = convergence_experiment(functions::coscos, "coscos", {2, 4});
    for (const auto& r : runs) {
        EXPECT_LT(r.reference_error, 1e-12);
        EXPECT_LE(r.rank, 1);
    }
}

TEST(Convergence, ExpCosErrorDecreases) {
    const auto runs = convergence_experiment(functions::expcos, "expcos", {8, 16, 32});
    ASSERT_EQ(runs.size(), 3u);
    EXPECT_GT(runs[0].reference_error, runs[1].reference_error);
    EXPECT_GT(runs[1].reference_error, runs[2].reference_error);
    for (const auto& r : runs) {
        EXPECT_GE(r.final_error, r.reference_error * (1 - 1e-12));
        EXPECT_LE(r.final_error, 2.2 * r.reference_error);
    }
}

TEST(Convergence, RingTwoSidedAndLowRank) {
    const auto runs = convergence_experiment(functions::ring, "ring", {8, 16, 32, 64});
    for (const auto& r : runs) {
        EXPECT_GE(r.final_error, r.reference_error * (1 - 1e-12)) << r.n;
        EXPECT_LE(r.final_error, 2.2 * r.reference_error) << r.n;
        EXPECT_LE(r.rank, 5) << r.n;
        EXPECT_FALSE(r.fallback);
        // estimator corridor
        if (r.truncation_error > 0) {
            EXPECT_GE(r.estimate / r.truncation_error, 1 / std::sqrt(2.0) - 1e-12);
            EXPECT_LE(r.estimate / r.truncation_error, 3.0);
        }
    }
}

TEST(Convergence, RejectsBadSizes) {
    EXPECT_THROW(convergence_experiment(functions::ring, "ring", {}), InvalidArgument);
    EXPECT_THROW(convergence_experiment(functions::ring, "ring", {0, 4}), InvalidArgument);
}
