#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dualflow/verify.hpp"

using namespace dualflow;

TEST(Verify, SliceResidualsVanish) {
    const auto f = power_mean(1, 2);
    const auto traj = evolve_lagrangian(slice_surface(2, 64, -1.0), f, 0.02, 4e-5, 10);
    EXPECT_TRUE(traj.latitudes_monotone);
    EXPECT_LE(traj.max_quadric_residual, 1e-12);
    const auto r = evolution_residuals(traj, f);
    EXPECT_GT(r.samples_used, 0u);
    EXPECT_LE(r.chi, 1e-6);
    EXPECT_LE(r.F, 1e-6);
}

TEST(Verify, SliceParticlesFollowTheOracle) {
    const auto traj = evolve_lagrangian(slice_surface(2, 64, -1.0), power_mean(2, 2), 0.2, 1e-3, 50);
    ASSERT_NEAR(traj.times.back(), 0.2, 1e-12);
    const auto g = traj.geometry(traj.times.size() - 1, power_mean(2, 2));
    for (const auto& p : g) EXPECT_NEAR(p.u, -0.7107125782603828, 1e-10);
}

TEST(Verify, ChainRuleLinksThePhiAndFResiduals) {
    const auto f = power_mean(2, 2);
    const auto traj = evolve_lagrangian(perturbed_surface(SpaceTag::DeSitter, 2, 64, -1.0, 0.05, 2), f, 0.01, 4e-5, 10);
    const auto r = evolution_residuals(traj, f);
    EXPECT_LE(r.Phi_vs_F, 1e-12);
}

TEST(Verify, PerturbedResidualsConvergeAtSecondOrder) {
    ResidualStudy study;
    study.resolutions = {{64, 4e-5}, {128, 2e-5}};
    const auto rep = refinement_study(study, power_mean(1, 2));
    ASSERT_EQ(rep.rows.size(), 2u);
    EXPECT_GT(rep.rows[1].ratio_chi, 3.0);
    EXPECT_LT(rep.rows[1].ratio_chi, 5.0);
    EXPECT_GT(rep.rows[1].ratio_F, 3.0);
    EXPECT_LT(rep.rows[1].ratio_F, 5.0);

    std::ostringstream os;
    write_refinement_report(os, rep);
    EXPECT_NE(os.str().find("residual_chi"), std::string::npos);
}

TEST(Verify, TimeDifferencesAreSecondOrder) {
    const auto f = power_mean(1, 2);
    const auto traj = evolve_lagrangian(perturbed_surface(SpaceTag::DeSitter, 2, 64, -1.0, 0.05, 2), f, 0.02, 4e-5, 10);
    const auto r = time_order_study(traj, f);
    EXPECT_GT(r.ratio, 3.0);
    EXPECT_LT(r.ratio, 5.0);
}
