#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "dualflow/dualflow.h"

TEST(CApi, VersionAndErrors) {
    EXPECT_GT(std::strlen(dualflow_version()), 0u);
    dualflow_config* cfg = nullptr;
    EXPECT_EQ(dualflow_config_parse(nullptr, &cfg), DUALFLOW_ERR_ARGUMENT);
    EXPECT_EQ(dualflow_config_parse("preset = inverse_desitter\nK = 31\n", &cfg), DUALFLOW_ERR_CONFIG);
    EXPECT_EQ(cfg, nullptr);
    const std::string msg = dualflow_last_error();
    EXPECT_NE(msg.find("K must be even"), std::string::npos);
    EXPECT_NE(msg.find("initial"), std::string::npos);
}

TEST(CApi, ConfigHandle) {
    dualflow_config* cfg = nullptr;
    ASSERT_EQ(dualflow_config_parse("preset = residual_check\ninitial = perturbed:-1,0.05,2\n", &cfg), DUALFLOW_OK);
    EXPECT_STREQ(dualflow_config_preset(cfg), "residual_check");
    EXPECT_EQ(dualflow_config_is_suite(cfg), 1);
    EXPECT_EQ(dualflow_config_set_output(cfg, ""), DUALFLOW_ERR_ARGUMENT);
    dualflow_config_free(cfg);
    dualflow_config_free(nullptr);
}

TEST(CApi, SurfacesAndDuality) {
    dualflow_surface* h = nullptr;
    ASSERT_EQ(dualflow_surface_perturbed(DUALFLOW_HYPERBOLIC, 2, 64, 1.0, 0.0, 0, &h), DUALFLOW_OK);
    ASSERT_EQ(dualflow_surface_size(h), 65u);

    double kmin = 0, kmax = 0, fmin = 0, fmax = 0;
    ASSERT_EQ(dualflow_surface_curvature_range(h, "pm:2", &kmin, &kmax, &fmin, &fmax), DUALFLOW_OK);
    EXPECT_NEAR(kmin, 1.0 / std::tanh(1.0), 1e-12);
    EXPECT_NEAR(fmax, 1.0 / std::tanh(1.0), 1e-12);

    dualflow_surface* n = nullptr;
    ASSERT_EQ(dualflow_dualize(h, &n), DUALFLOW_OK);
    std::vector<double> u(65);
    ASSERT_EQ(dualflow_surface_values(n, u.data(), u.size()), DUALFLOW_OK);
    for (double x : u) EXPECT_NEAR(x, -1.0, 1e-8);
    EXPECT_EQ(dualflow_surface_values(n, u.data(), 3), DUALFLOW_ERR_ARGUMENT);

    double kr = 1, hr = 1;
    ASSERT_EQ(dualflow_duality_residual(h, n, &kr, &hr), DUALFLOW_OK);
    EXPECT_LE(kr, 1e-7);

    dualflow_surface* back = nullptr;
    ASSERT_EQ(dualflow_dualize_inverse(n, &back), DUALFLOW_OK);
    EXPECT_EQ(dualflow_dualize(n, &back), DUALFLOW_ERR_DOMAIN);
    dualflow_surface_free(back);
    dualflow_surface_free(n);
    dualflow_surface_free(h);
}

TEST(CApi, SurfaceFromValues) {
    std::vector<double> u(33, -0.5);
    dualflow_surface* s = nullptr;
    ASSERT_EQ(dualflow_surface_from_values(DUALFLOW_DESITTER, 2, u.data(), u.size(), &s), DUALFLOW_OK);
    double kmin = 0;
    ASSERT_EQ(dualflow_surface_curvature_range(s, "pm:1", &kmin, nullptr, nullptr, nullptr), DUALFLOW_OK);
    EXPECT_NEAR(kmin, std::tanh(0.5), 1e-12);
    EXPECT_EQ(dualflow_surface_curvature_range(s, "nope", &kmin, nullptr, nullptr, nullptr), DUALFLOW_ERR_DOMAIN);
    dualflow_surface_free(s);

    u[10] = 0.5;
    ASSERT_EQ(dualflow_surface_from_values(DUALFLOW_DESITTER, 2, u.data(), u.size(), &s), DUALFLOW_OK);
    EXPECT_EQ(dualflow_surface_curvature_range(s, "pm:1", &kmin, nullptr, nullptr, nullptr), DUALFLOW_ERR_GEOMETRY);
    dualflow_surface_free(s);
}

TEST(CApi, ScalarHelpers) {
    const double k[] = {3.0, 4.0};
    double v = 0;
    ASSERT_EQ(dualflow_curvature_value("pm:2", k, 2, &v), DUALFLOW_OK);
    EXPECT_NEAR(v, std::sqrt(12.5), 1e-15);
    const double bad[] = {0.0, 1.0};
    EXPECT_EQ(dualflow_curvature_value("pm:2", bad, 2, &v), DUALFLOW_ERR_DOMAIN);
    ASSERT_EQ(dualflow_spherical_oracle(-1.0, 0.2, &v), DUALFLOW_OK);
    EXPECT_NEAR(v, -0.7107125782603828, 1e-14);
    EXPECT_EQ(dualflow_spherical_oracle(1.0, 1.0, &v), DUALFLOW_ERR_DOMAIN);
}
