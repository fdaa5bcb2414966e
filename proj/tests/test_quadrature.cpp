#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qsl/quadrature.hpp"

using qsl::integrate;
using qsl::QuadratureSpec;

TEST(Integrate, Polynomial) {
    EXPECT_NEAR(integrate([](double x) { return x * x; }, 0.0, 1.0), 1.0 / 3.0, 1e-14);
}

TEST(Integrate, Sine) {
    EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi), 2.0, 1e-10);
}

TEST(Integrate, KinkedIntegrand) {
    auto f = [](double x) { return std::abs(std::cos(x)); };
    EXPECT_NEAR(integrate(f, 0.0, std::numbers::pi), 2.0, 1e-9);
    const std::vector<double> pts{0.0, std::numbers::pi / 2, std::numbers::pi};
    EXPECT_NEAR(integrate(f, pts), 2.0, 1e-12);
}

TEST(Integrate, EmptyAndReversed) {
    EXPECT_EQ(integrate([](double) { return 1.0; }, 2.0, 2.0), 0.0);
    EXPECT_THROW(integrate([](double) { return 1.0; }, 1.0, 0.0), qsl::InvalidInput);
    const std::vector<double> bad{1.0, 0.0};
    EXPECT_THROW(integrate([](double) { return 1.0; }, bad), qsl::InvalidInput);
}

TEST(Integrate, DeterministicForFixedSpec) {
    auto f = [](double x) { return std::exp(-x) * std::sin(7 * x); };
    EXPECT_EQ(integrate(f, 0.0, 3.0), integrate(f, 0.0, 3.0));
}

TEST(Integrate, SpecValidation) {
    QuadratureSpec spec;
    spec.initial_panels = 4;
    EXPECT_THROW(integrate([](double x) { return x; }, 0.0, 1.0, spec), qsl::InvalidInput);
    spec = {};
    spec.rel_tol = 0.0;
    EXPECT_THROW(spec.validate(), qsl::InvalidInput);
}

TEST(Integrate, NonConvergenceCarriesEstimate) {
    QuadratureSpec spec;
    spec.max_depth = 3;
    auto f = [](double x) { return 1.0 / std::sqrt(x + 1e-12); };
    try {
        integrate(f, 0.0, 1.0, spec);
        FAIL() << "expected AccuracyError";
    } catch (const qsl::AccuracyError& e) {
        EXPECT_TRUE(std::isfinite(e.estimate()));
        EXPECT_GT(e.estimate(), 0.5);
    }
}

TEST(Integrate, NonFiniteIntegrand) {
    EXPECT_THROW(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0), qsl::AccuracyError);
}
