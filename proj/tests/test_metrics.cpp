#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qsl/metrics.hpp"
#include "test_util.hpp"

using namespace qsl;

namespace {

HermMat pure(int dim, int k) {
    ComplexMat m(dim);
    m(k, k) = 1.0;
    return HermMat(m);
}

HermMat maximally_mixed(int dim) {
    ComplexMat m = ComplexMat::identity(dim);
    m *= 1.0 / dim;
    return HermMat(m);
}

}  // namespace

TEST(Purity, Examples) {
    EXPECT_NEAR(purity(pure(2, 0)), 1.0, 1e-15);
    EXPECT_NEAR(purity(maximally_mixed(2)), 0.5, 1e-15);
    EXPECT_NEAR(purity(bloch_to_matrix({0.6, 0, 0})), 0.68, 1e-15);
    EXPECT_THROW(purity(HermMat(ComplexMat::diagonal({0.7, 0.7}))), InvalidState);
    EXPECT_THROW(purity(HermMat(ComplexMat::diagonal({1.2, -0.2}))), InvalidState);
}

TEST(Fidelity, Examples) {
    std::mt19937_64 rng(1);
    auto rho = testkit::random_density(3, rng);
    EXPECT_NEAR(uhlmann_fidelity(rho, rho), 1.0, 1e-10);
    EXPECT_NEAR(super_fidelity(rho, rho), 1.0, 1e-12);
    EXPECT_NEAR(uhlmann_fidelity(pure(2, 0), pure(2, 1)), 0.0, 1e-15);
    EXPECT_NEAR(super_fidelity(pure(2, 0), maximally_mixed(2)), 0.5, 1e-15);

    auto a = bloch_to_matrix({0.6, 0, 0});
    auto b = bloch_to_matrix({0, 0, 0.6});
    EXPECT_NEAR(uhlmann_fidelity(a, b), 0.82, 1e-12);
    EXPECT_NEAR(super_fidelity(a, b), 0.82, 1e-14);
}

TEST(Fidelity, DimensionMismatch) {
    EXPECT_THROW(uhlmann_fidelity(pure(2, 0), pure(3, 0)), DimensionMismatch);
    EXPECT_THROW(super_fidelity(pure(2, 0), pure(3, 0)), DimensionMismatch);
}

TEST(Fidelity, InequalityAndQubitEquality) {
    std::mt19937_64 rng(2024);
    for (int dim = 2; dim <= 4; ++dim) {
        for (int trial = 0; trial < 300; ++trial) {
            auto rho = testkit::random_density(dim, rng);
            auto sigma = testkit::random_density(dim, rng);
            const double f = uhlmann_fidelity(rho, sigma);
            const double sf = super_fidelity(rho, sigma);
            ASSERT_LE(f, sf + 1e-10);
            if (dim == 2) {
                ASSERT_NEAR(f, sf, 1e-10);
            }
        }
    }
}

TEST(Fidelity, RankDeficientStates) {
    // sqrt of an eigenvalue that is zero up to rounding is ~1e-8, so the
    // Uhlmann value is only that accurate for singular states.
    std::mt19937_64 rng(2025);
    for (int dim = 2; dim <= 4; ++dim) {
        for (int trial = 0; trial < 300; ++trial) {
            auto rho = testkit::random_density(dim, rng, 1 + trial % dim);
            auto sigma = testkit::random_density(dim, rng, 1);
            const double f = uhlmann_fidelity(rho, sigma);
            const double sf = super_fidelity(rho, sigma);
            ASSERT_LE(f, sf + 1e-7);
            if (dim == 2) {
                ASSERT_NEAR(f, sf, 1e-7);
            }
        }
    }
}

TEST(Fidelity, Symmetric) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = 2 + trial % 4;
        auto rho = testkit::random_density(dim, rng);
        auto sigma = testkit::random_density(dim, rng);
        EXPECT_NEAR(uhlmann_fidelity(rho, sigma), uhlmann_fidelity(sigma, rho), 1e-10);
        EXPECT_NEAR(super_fidelity(rho, sigma), super_fidelity(sigma, rho), 1e-14);
    }
}

TEST(FidelityValue, Clamping) {
    EXPECT_DOUBLE_EQ(FidelityValue(1.0 + 5e-10).value(), 1.0);
    EXPECT_DOUBLE_EQ(FidelityValue(-5e-10).value(), 0.0);
    EXPECT_THROW(FidelityValue(1.0 + 1e-6), InvalidInput);
}

TEST(Angles, Examples) {
    auto a = bloch_to_matrix({0.3, -0.2, 0.5});
    EXPECT_NEAR(bures_angle(a, a), 0.0, 1e-5);
    EXPECT_NEAR(modified_bures_angle(a, a), 0.0, 1e-7);
    auto up = pure(2, 0), down = pure(2, 1);
    EXPECT_NEAR(bures_angle(up, down), std::numbers::pi / 2, 1e-14);
    EXPECT_NEAR(modified_bures_angle(up, down), std::numbers::pi / 2, 1e-14);
}

TEST(Angles, ModifiedNeverExceedsBures) {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 1000; ++trial) {
        auto rho = testkit::random_density(3, rng);
        auto sigma = testkit::random_density(3, rng);
        ASSERT_LE(modified_bures_angle(rho, sigma), bures_angle(rho, sigma) + 1e-10);
    }
}
