#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dualflow/error.hpp"
#include "dualflow/minkowski.hpp"

using namespace dualflow;

namespace {

LorentzVector vec(std::initializer_list<double> v) {
    LorentzVector x(static_cast<int>(v.size()));
    int i = 0;
    for (double c : v) x[i++] = c;
    return x;
}

// eta-product written out by hand, independent of lorentz_dot
double q_ref(const LorentzVector& x) {
    double s = -x[0] * x[0];
    for (int i = 1; i < x.size(); ++i) s += x[i] * x[i];
    return s;
}

LorentzVector random_vector(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    LorentzVector x(dim);
    for (int i = 0; i < dim; ++i) x[i] = U(rng);
    return x;
}

}  // namespace

TEST(Minkowski, QuadraticFormOnAxes) {
    EXPECT_DOUBLE_EQ(quadratic_form(vec({1, 0, 0, 0})), -1.0);
    EXPECT_DOUBLE_EQ(quadratic_form(vec({0, 1, 0, 0})), 1.0);
    EXPECT_NEAR(quadratic_form(vec({std::cosh(1.0), std::sinh(1.0), 0, 0})), -1.0, 1e-14);
}

TEST(Minkowski, BoostZeroIsIdentity) {
    const auto L = boost(4, 0.0);
    EXPECT_LE((L.matrix() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Minkowski, BoostActsOnTimeAxis) {
    const double th = 0.7;
    const LorentzVector y = boost(5, th)(beltrami_point(5));
    EXPECT_NEAR(y[0], std::cosh(th), 1e-15);
    EXPECT_NEAR(y[1], std::sinh(th), 1e-15);
    for (int i = 2; i < 5; ++i) EXPECT_EQ(y[i], 0.0);
    EXPECT_EQ(boost(5, th).orientation(), Orientation::Orthochronous);
}

TEST(Minkowski, TransformsPreserveQuadraticForm) {
    std::mt19937_64 rng(11);
    const auto B = boost(5, 0.7);
    const auto T = time_flip(5);
    const auto G = givens(5, 2, 4, std::cos(0.3), std::sin(0.3));
    for (int trial = 0; trial < 1000; ++trial) {
        const LorentzVector x = random_vector(rng, 5);
        const double q = q_ref(x);
        EXPECT_NEAR(q_ref(B(x)), q, 1e-12 * std::max(1.0, x.squaredNorm()));
        EXPECT_NEAR(q_ref(T(x)), q, 1e-12);
        EXPECT_NEAR(q_ref(G(x)), q, 1e-12 * std::max(1.0, x.squaredNorm()));
    }
    EXPECT_LE(B.metric_residual(), 1e-12);
    EXPECT_LE(T.metric_residual(), 1e-12);
    EXPECT_LE(G.metric_residual(), 1e-12);
}

TEST(Minkowski, TimeFlipIsAnInvolution) {
    const auto T = time_flip(4);
    EXPECT_EQ(T.orientation(), Orientation::TimeFlip);
    const LorentzVector y = T(vec({1, 0, 0, 0}));
    EXPECT_EQ(y[0], -1.0);
    EXPECT_LE((T.after(T).matrix() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Minkowski, NormalizeBeltramiPointIsTrivial) {
    const auto L = normalize_to_beltrami(beltrami_point(4));
    EXPECT_LE((L(beltrami_point(4)) - beltrami_point(4)).norm(), 1e-14);
}

TEST(Minkowski, NormalizeOnTheBoostAxisIsInverseBoost) {
    // 2x2 algebra: boost(-0.5) maps (cosh 0.5, sinh 0.5) to (1, 0)
    const LorentzVector p = vec({std::cosh(0.5), std::sinh(0.5), 0, 0});
    const auto L = normalize_to_beltrami(p);
    EXPECT_LE((L.matrix() - boost(4, -0.5).matrix()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Minkowski, NormalizeRandomPointsOnH) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int dim = 3 + trial % 4;
        // p = rotation * boost * p0
        const double theta = 2.0 * U(rng);
        LorentzTransform R = LorentzTransform::identity(dim);
        for (int j = 2; j < dim; ++j) {
            const double a = 3.0 * U(rng);
            R = givens(dim, 1, j, std::cos(a), std::sin(a)).after(R);
        }
        const LorentzVector p = R.after(boost(dim, theta))(beltrami_point(dim));
        const auto L = normalize_to_beltrami(p);
        EXPECT_EQ(L.orientation(), Orientation::Orthochronous);
        EXPECT_LE((L(p) - beltrami_point(dim)).norm(), 1e-10);
        EXPECT_LE(L.metric_residual(), 1e-12);
    }
}

TEST(Minkowski, NormalizeRejectsPointsOffH) {
    EXPECT_THROW(normalize_to_beltrami(vec({0, 1, 0})), DomainError);
    EXPECT_THROW(normalize_to_beltrami(vec({-1, 0, 0})), DomainError);
}

TEST(Minkowski, ProjectionOntoQuadrics) {
    const LorentzVector x = vec({2.0, 1.0, 0.5});
    const LorentzVector h = project_to_quadric(x, SpaceTag::Hyperbolic);
    EXPECT_TRUE(on_quadric(h, SpaceTag::Hyperbolic));
    EXPECT_NEAR(h[1] / h[0], 0.5, 1e-15);
    const LorentzVector y = vec({0.3, 2.0, 1.0});
    EXPECT_TRUE(on_quadric(project_to_quadric(y, SpaceTag::DeSitter), SpaceTag::DeSitter));
    EXPECT_THROW(project_to_quadric(y, SpaceTag::Hyperbolic), DomainError);
}

TEST(Minkowski, LorentzCrossIsOrthogonal) {
    const Vec3 a(0.3, 1.2, -0.4), b(-0.7, 0.1, 2.0);
    const Vec3 w = lorentz_cross(a, b);
    EXPECT_NEAR(lorentz_dot(w, a), 0.0, 1e-14);
    EXPECT_NEAR(lorentz_dot(w, b), 0.0, 1e-14);
}
