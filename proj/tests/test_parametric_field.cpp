// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "kinetic_uq/error.hpp"
#include "kinetic_uq/parametric_field.hpp"
#include "test_support.hpp"

using kuq::FieldFamily;
using kuq::ParametricField;
namespace kt = kuq::test;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

TEST(Field, MeanFieldAtZeroParameter) {
    for (auto fam : {FieldFamily::exp2, FieldFamily::invsq, FieldFamily::inv}) {
        const auto f = ParametricField::family(fam, 5, false);
        const std::vector<double> z(5, 0.0);
        for (double x : {0.0, 0.4, 2.0, 5.5}) EXPECT_EQ(f.E(0.3, x, z), std::sin(x) / 2.0);
    }
}

TEST(Field, FamilyAmplitudes) {
    const auto a = ParametricField::family(FieldFamily::exp2, 4, false);
    const auto b = ParametricField::family(FieldFamily::invsq, 4, false);
    const auto c = ParametricField::family(FieldFamily::inv, 4, false);
    for (std::size_t j = 1; j <= 4; ++j) {
        const double dj = static_cast<double>(j);
        EXPECT_EQ(a.amplitude(j), std::pow(2.0, -dj));
        EXPECT_EQ(b.amplitude(j), 1.0 / (dj * dj));
        EXPECT_EQ(c.amplitude(j), 1.0 / dj);
        EXPECT_NEAR(b.E_component(j, 0.0, 0.7), std::cos(dj * 0.7) / (dj * dj), 1e-15);
    }
    EXPECT_EQ(kuq::parse_field_family("invsq"), FieldFamily::invsq);
    EXPECT_EQ(kuq::parse_field_family("c"), FieldFamily::inv);
    EXPECT_THROW((void)kuq::parse_field_family("bogus"), kuq::Error);
}

TEST(Field, HandEvaluation) {
    const auto a = ParametricField::family(FieldFamily::exp2, 1, false);
    EXPECT_NEAR(a.E(0.0, 0.0, std::vector<double>{1.0}), 0.5, 1e-15);
}

TEST(Field, TimeDependentLimit) {
    const auto td = ParametricField::family(FieldFamily::exp2, 6, true);
    const auto ti = ParametricField::family(FieldFamily::exp2, 6, false);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        const auto z = kt::random_point(rng, 6);
        const double x = kt::uniform(rng, 0.0, two_pi);
        EXPECT_NEAR(td.E(1e4, x, z), ti.E(0.0, x, z), 1e-8);
        EXPECT_NEAR(td.E_inf(x, z), ti.E(0.0, x, z), 1e-15);
    }
    // At t = 0 the time term adds a_j z_j.
    const std::vector<double> z{1.0};
    const auto td1 = ParametricField::family(FieldFamily::exp2, 1, true);
    EXPECT_NEAR(td1.E(0.0, 0.0, z), 0.5 + 0.5, 1e-15);
}

TEST(Field, PotentialIsAntiderivative) {
    const double h = two_pi / 1024.0;
    struct Case {
        FieldFamily fam;
        std::size_t d;
    };
    std::mt19937_64 rng(2);
    for (auto [fam, d] : {Case{FieldFamily::exp2, 5}, Case{FieldFamily::invsq, 1}, Case{FieldFamily::inv, 3}}) {
        const auto f = ParametricField::family(fam, d, false);
        const auto z = fam == FieldFamily::invsq ? std::vector<double>{1.0} : kt::random_point(rng, d);
        for (int i = 0; i < 1024; ++i) {
            const double x = i * h;
            // Five-point centered stencil; the three-point one has truncation error above 1e-6 here.
            const double dphi = (-f.phi_inf(x + 2 * h, z) + 8 * f.phi_inf(x + h, z) - 8 * f.phi_inf(x - h, z) +
                                 f.phi_inf(x - 2 * h, z)) / (12.0 * h);
            EXPECT_NEAR(-dphi, f.E_inf(x, z), 1e-6) << "x = " << x;
        }
    }
    // Family (b), d = 1, z = 1: phi = cos(x)/2 - sin(x).
    const auto b = ParametricField::family(FieldFamily::invsq, 1, false);
    for (double x : {0.1, 1.0, 4.0}) EXPECT_NEAR(b.phi_inf(x, std::vector<double>{1.0}), std::cos(x) / 2 - std::sin(x), 1e-15);
    // z = 0: phi = cos(x)/2.
    const auto c = ParametricField::family(FieldFamily::inv, 3, false);
    EXPECT_NEAR(c.phi_inf(0.3, std::vector<double>(3, 0.0)), std::cos(0.3) / 2.0, 1e-15);
}

TEST(Field, LinearityAndPeriodicity) {
    std::mt19937_64 rng(4);
    for (auto fam : {FieldFamily::exp2, FieldFamily::invsq, FieldFamily::inv}) {
        for (bool td : {false, true}) {
            const auto f = ParametricField::family(fam, 8, td);
            for (int i = 0; i < 50; ++i) {
                const auto z1 = kt::random_point(rng, 8);
                const auto z2 = kt::random_point(rng, 8);
                const double a = kt::uniform(rng, 0.0, 1.0);
                std::vector<double> zm(8);
                for (int k = 0; k < 8; ++k) zm[k] = a * z1[k] + (1 - a) * z2[k];
                const double x = kt::uniform(rng, 0.0, two_pi);
                const double t = kt::uniform(rng, 0.0, 3.0);
                EXPECT_NEAR(f.E(t, x, zm), a * f.E(t, x, z1) + (1 - a) * f.E(t, x, z2), 1e-14);
                EXPECT_NEAR(f.E(t, x + two_pi, z1), f.E(t, x, z1), 1e-13);
                EXPECT_NEAR(f.phi_inf(x + two_pi, z1), f.phi_inf(x, z1), 1e-13);
            }
        }
    }
}

TEST(Field, ComponentBounds) {
    const auto a = ParametricField::family(FieldFamily::exp2, 12, false).component_norms();
    const auto b = ParametricField::family(FieldFamily::invsq, 12, false).component_norms();
    const auto c = ParametricField::family(FieldFamily::inv, 12, false).component_norms();
    EXPECT_TRUE(a.summable);
    EXPECT_FALSE(c.summable);
    for (std::size_t j = 1; j <= 12; ++j) {
        const double dj = static_cast<double>(j);
        EXPECT_NEAR(c.bounds[j - 1], (1.0 + dj) / dj, 1e-14);
        if (j > 1) EXPECT_LT(a.bounds[j - 1], a.bounds[j - 2]);
        // (1+j)/2^j < (1+j)/j^2 only once 2^j > j^2.
        if (j >= 5) EXPECT_LT(a.bounds[j - 1], b.bounds[j - 1]);
        if (j >= 2) EXPECT_LT(b.bounds[j - 1], c.bounds[j - 1]);
    }
    // Bounds dominate the sampled W^{1,inf} norm of each component.
    const auto f = ParametricField::family(FieldFamily::invsq, 6, true);
    const auto fb = f.component_norms();
    for (std::size_t j = 1; j <= 6; ++j) {
        double sup_v = 0.0, sup_d = 0.0;
        for (double t : {0.0, 0.5, 3.0}) {
            for (int i = 0; i < 2000; ++i) {
                const double x = two_pi * i / 2000.0;
                sup_v = std::max(sup_v, std::abs(f.E_component(j, t, x)));
                sup_d = std::max(sup_d, std::abs((f.E_component(j, t, x + 1e-6) - f.E_component(j, t, x - 1e-6)) / 2e-6));
            }
        }
        EXPECT_LE(sup_v + sup_d, fb.bounds[j - 1] * (1 + 1e-6));
    }
}
