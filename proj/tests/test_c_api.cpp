// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared library through its C interface only.
#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "kinetic_uq/kinetic_uq.h"

namespace fs = std::filesystem;

namespace {

struct Config {
    kuq_config* ptr = nullptr;
    ~Config() { kuq_config_destroy(ptr); }
};

}  // namespace

TEST(CApi, StatusStringsAndVersion) {
    EXPECT_STREQ(kuq_status_string(KUQ_OK), "ok");
    EXPECT_STRNE(kuq_status_string(KUQ_CONFIG), "");
    EXPECT_STREQ(kuq_version(), "0.1.0");
}

TEST(CApi, LejaPoints) {
    double pts[5];
    ASSERT_EQ(kuq_leja_points(5, pts), KUQ_OK);
    EXPECT_EQ(pts[0], 0.0);
    EXPECT_EQ(pts[1], 1.0);
    EXPECT_EQ(pts[2], -1.0);
    EXPECT_NEAR(std::abs(pts[3]), 1.0 / std::sqrt(3.0), 1e-14);
    EXPECT_EQ(kuq_leja_points(5, nullptr), KUQ_INVALID_ARGUMENT);
}

TEST(CApi, ConfigSetGet) {
    Config cfg;
    ASSERT_EQ(kuq_config_create(&cfg.ptr), KUQ_OK);
    ASSERT_EQ(kuq_config_set(cfg.ptr, "grid.nx", "8"), KUQ_OK);
    char buf[64];
    std::size_t needed = 0;
    ASSERT_EQ(kuq_config_get(cfg.ptr, "grid.nx", buf, sizeof buf, &needed), KUQ_OK);
    EXPECT_STREQ(buf, "8");
    EXPECT_EQ(needed, 2u);
    char tiny[1];
    EXPECT_EQ(kuq_config_get(cfg.ptr, "grid.nx", tiny, sizeof tiny, &needed), KUQ_INVALID_ARGUMENT);
    EXPECT_EQ(needed, 2u);
    EXPECT_EQ(kuq_config_set(cfg.ptr, "grid.nope", "1"), KUQ_CONFIG);
    EXPECT_NE(std::string(kuq_last_error_message()).find("grid.nope"), std::string::npos);
    EXPECT_EQ(kuq_config_set(cfg.ptr, "driver.budget", "0"), KUQ_CONFIG);
    Config parsed;
    EXPECT_EQ(kuq_config_parse("grid.nx = x", &parsed.ptr), KUQ_CONFIG);
    EXPECT_EQ(parsed.ptr, nullptr);
    EXPECT_EQ(kuq_config_load("/nonexistent/kuq.cfg", &parsed.ptr), KUQ_IO);
}

TEST(CApi, SolveAndInterpolant) {
    Config cfg;
    ASSERT_EQ(kuq_config_parse("grid.nx = 8\ngrid.nv = 16\nfield.dim = 3\n", &cfg.ptr), KUQ_OK);
    std::size_t m = 0;
    ASSERT_EQ(kuq_model_payload_size(cfg.ptr, &m), KUQ_OK);
    ASSERT_EQ(m, 128u);
    std::vector<double> f(m);
    const double z[2] = {0.2, -0.4};
    ASSERT_EQ(kuq_solve(cfg.ptr, z, 2, f.data(), f.size()), KUQ_OK);
    const double zlong[4] = {0, 0, 0, 0};
    EXPECT_EQ(kuq_solve(cfg.ptr, zlong, 4, f.data(), f.size()), KUQ_INVALID_ARGUMENT);

    kuq_interpolant* interp = nullptr;
    ASSERT_EQ(kuq_interpolant_create(2, 1, &interp), KUQ_OK);
    const double c0 = 0.0, c1 = 1.0;
    ASSERT_EQ(kuq_interpolant_add_node(interp, "", &c0, 1), KUQ_OK);
    ASSERT_EQ(kuq_interpolant_add_node(interp, "1:1", &c1, 1), KUQ_OK);
    EXPECT_EQ(kuq_interpolant_add_node(interp, "1:3", &c1, 1), KUQ_NOT_ADMISSIBLE);
    double node[2];
    ASSERT_EQ(kuq_interpolant_node(interp, "1:1", node, 2), KUQ_OK);
    EXPECT_EQ(node[0], 1.0);
    EXPECT_EQ(node[1], 0.0);
    const double zq[2] = {0.3, 0.9};
    double out = 0.0;
    ASSERT_EQ(kuq_interpolant_evaluate(interp, zq, 2, &out, 1), KUQ_OK);
    EXPECT_NEAR(out, 0.3, 1e-15);
    std::size_t n = 0;
    ASSERT_EQ(kuq_interpolant_size(interp, &n), KUQ_OK);
    EXPECT_EQ(n, 2u);

    const auto dir = fs::temp_directory_path() / "kuq_capi_interp";
    fs::remove_all(dir);
    ASSERT_EQ(kuq_interpolant_save(interp, dir.c_str()), KUQ_OK);
    kuq_interpolant* loaded = nullptr;
    ASSERT_EQ(kuq_interpolant_load(dir.c_str(), &loaded), KUQ_OK);
    double out2 = 0.0;
    ASSERT_EQ(kuq_interpolant_evaluate(loaded, zq, 2, &out2, 1), KUQ_OK);
    EXPECT_EQ(out, out2);
    kuq_interpolant_destroy(loaded);
    kuq_interpolant_destroy(interp);
    kuq_interpolant_destroy(nullptr);
    fs::remove_all(dir);
}

TEST(CApi, DriverSteps) {
    Config cfg;
    ASSERT_EQ(kuq_config_parse("grid.nx = 8\ngrid.nv = 16\nfield.dim = 3\ndriver.kind = raspi\n", &cfg.ptr), KUQ_OK);
    kuq_driver* drv = nullptr;
    ASSERT_EQ(kuq_driver_create(cfg.ptr, &drv), KUQ_OK);
    kuq_step_info info{};
    ASSERT_EQ(kuq_driver_step(drv, &info), KUQ_OK);
    EXPECT_EQ(info.step, 1u);
    EXPECT_STREQ(info.selected_index, "");
    ASSERT_EQ(kuq_driver_step(drv, &info), KUQ_OK);
    EXPECT_EQ(info.step, 2u);
    EXPECT_STREQ(info.selected_index, "1:1");
    EXPECT_EQ(info.model_solves_total, 2u);
    EXPECT_GT(info.operator_applies_total, 0u);
    kuq_driver_destroy(drv);
}

TEST(CApi, RunExperimentAndOracle) {
    const auto dir = fs::temp_directory_path() / "kuq_capi_run";
    fs::remove_all(dir);
    Config cfg;
    const std::string text = "grid.nx = 8\ngrid.nv = 16\nfield.dim = 3\ndriver.budget = 6\nmc.samples = 8\n"
                             "output.dir = " + dir.string() + "\n";
    ASSERT_EQ(kuq_config_parse(text.c_str(), &cfg.ptr), KUQ_OK);
    double err = 0.0, slope = 0.0;
    ASSERT_EQ(kuq_run_experiment(cfg.ptr, &err, &slope), KUQ_OK);
    EXPECT_GT(err, 0.0);
    EXPECT_TRUE(std::isfinite(slope));
    EXPECT_TRUE(fs::exists(dir / "convergence.csv"));

    double errors[4];
    ASSERT_EQ(kuq_best_n_oracle(cfg.ptr, 2, 3, 4, errors), KUQ_OK);
    for (int k = 1; k < 4; ++k) EXPECT_LE(errors[k], errors[k - 1]);
    EXPECT_EQ(kuq_best_n_oracle(cfg.ptr, 5, 3, 4, errors), KUQ_INVALID_ARGUMENT);
    fs::remove_all(dir);
}
