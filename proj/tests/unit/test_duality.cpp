#include <gtest/gtest.h>

#include <cmath>

#include "dualflow/duality.hpp"
#include "dualflow/error.hpp"

using namespace dualflow;

TEST(Duality, SphereMapsToSlice) {
    for (double r : {0.5, 1.0, 2.0}) {
        const auto d = dualize(sphere_surface(2, 128, r));
        EXPECT_EQ(d.space, SpaceTag::DeSitter);
        for (double u : d.u) EXPECT_NEAR(u, -r, 1e-8);
    }
}

TEST(Duality, SliceCurvatureIsReciprocal) {
    const auto d = dualize(sphere_surface(3, 64, 0.8));
    const auto g = compute_frame(d);
    for (const auto& p : g) {
        EXPECT_NEAR(p.kappa_mer, std::tanh(0.8), 1e-8);
        EXPECT_NEAR(p.kappa_rot, std::tanh(0.8), 1e-8);
    }
    const auto back = dualize_inverse(d);
    EXPECT_EQ(back.space, SpaceTag::Hyperbolic);
    for (double u : back.u) EXPECT_NEAR(u, 0.8, 1e-8);
}

TEST(Duality, PointwiseImageLiesInDeSitter) {
    const auto m = perturbed_surface(SpaceTag::Hyperbolic, 2, 256, 1.0, 0.05, 2);
    const auto d = gauss_map_to_desitter(m);
    ASSERT_EQ(d.points.size(), 257u);
    for (std::size_t k = 0; k < d.points.size(); ++k) {
        EXPECT_NEAR(d.u[k], std::asinh(d.points[k][0]), 1e-15);
        EXPECT_NEAR(quadratic_form(d.points[k]), 1.0, 1e-12);
        if (k > 0) EXPECT_GT(d.theta[k], d.theta[k - 1]);
    }
}

TEST(Duality, ReportOnPerturbedSphere) {
    const auto m = perturbed_surface(SpaceTag::Hyperbolic, 2, 256, 1.0, 0.05, 2);
    const auto r = duality_report(m, dualize(m));
    EXPECT_LE(r.kappa_product_residual, 1e-3);
    EXPECT_LE(r.orthogonality_residual, 1e-6);
    EXPECT_LE(r.resampling_error, 1e-6);
}

TEST(Duality, ReportDetectsMismatchedPairs) {
    // coth a tanh b != 1 for a sphere of radius a against a slice at -b
    const auto r = duality_report(sphere_surface(2, 64, 1.0), slice_surface(2, 64, -0.5));
    EXPECT_NEAR(r.kappa_product_residual, std::abs(std::tanh(0.5) / std::tanh(1.0) - 1.0), 1e-8);
}

TEST(Duality, RoundTripConverges) {
    auto round_trip = [](int K) {
        const auto m = perturbed_surface(SpaceTag::Hyperbolic, 2, K, 1.0, 0.05, 2);
        return meridian_distance(dualize_inverse(dualize(m)), m);
    };
    const double e1 = round_trip(64), e2 = round_trip(128);
    EXPECT_LE(e2, 1e-6);
    EXPECT_GE(e1 / e2, 3.5);
}

TEST(Duality, WrongSpaceIsRejected) {
    EXPECT_THROW(dualize(slice_surface(2, 64, -1.0)), DomainError);
    EXPECT_THROW(dualize_inverse(sphere_surface(2, 64, 1.0)), DomainError);
}
