// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include "kinetic_uq/error.hpp"
#include "kinetic_uq/sparse_interp.hpp"
#include "test_support.hpp"

using kuq::HierarchicalInterpolant;
using kuq::MultiIndex;
namespace kt = kuq::test;

namespace {

MultiIndex mi(std::vector<std::uint32_t> dense) { return MultiIndex::from_dense(dense); }

std::vector<double> leja_points(std::size_t depth) {
    kuq::LejaSequence seq;
    seq.extend(depth);
    return {seq.points().begin(), seq.points().end()};
}

HierarchicalInterpolant build(const std::vector<MultiIndex>& seq, const kuq::Model& model, std::size_t d) {
    HierarchicalInterpolant interp(d, model.payload_size());
    for (const auto& nu : seq) {
        const auto z = interp.node_of(nu);
        interp.add_node(nu, model.solve(z));
    }
    return interp;
}

}  // namespace

TEST(SparseInterp, NodeOfExamples) {
    HierarchicalInterpolant interp(4, 1);
    EXPECT_EQ(interp.node_of(MultiIndex{}), std::vector<double>(4, 0.0));
    EXPECT_EQ(interp.node_of(mi({1})), (std::vector<double>{1, 0, 0, 0}));
    EXPECT_EQ(interp.node_of(mi({0, 2})), (std::vector<double>{0, -1, 0, 0}));
}

TEST(SparseInterp, EvalHExamples) {
    HierarchicalInterpolant interp(3, 1);
    (void)interp.node_of(mi({3}));
    const std::vector<double> z{0.3, -0.2, 0.9};
    EXPECT_EQ(interp.eval_H(MultiIndex{}, z), 1.0);
    EXPECT_NEAR(interp.eval_H(mi({1}), z), 0.3, 1e-15);
    EXPECT_NEAR(interp.eval_H(mi({1, 1}), z), -0.06, 1e-15);
}

TEST(SparseInterp, FirstNodeGivesConstant) {
    HierarchicalInterpolant interp(2, 3);
    interp.add_node(MultiIndex{}, std::vector<double>{1.5, -2.0, 4.0});
    const auto a = interp.alpha(0);
    EXPECT_EQ(std::vector<double>(a.begin(), a.end()), (std::vector<double>{1.5, -2.0, 4.0}));
    EXPECT_EQ(interp.evaluate(std::vector<double>{0.4, -0.9}), (std::vector<double>{1.5, -2.0, 4.0}));
    EXPECT_EQ(interp.gamma_weights(std::vector<double>{0.4, -0.9}), std::vector<double>{1.0});
}

TEST(SparseInterp, LinearModelSurpluses) {
    HierarchicalInterpolant interp(2, 1);
    interp.add_node(MultiIndex{}, std::vector<double>{0.0});
    interp.add_node(mi({1}), std::vector<double>{1.0});
    EXPECT_EQ(interp.alpha(0)[0], 0.0);
    EXPECT_EQ(interp.alpha(1)[0], 1.0);
    for (double z1 : {-0.8, 0.1, 0.55}) EXPECT_NEAR(interp.evaluate(std::vector<double>{z1, 0.2})[0], z1, 1e-15);
}

TEST(SparseInterp, RejectsInadmissibleNodes) {
    HierarchicalInterpolant interp(2, 1);
    interp.add_node(MultiIndex{}, std::vector<double>{0.0});
    EXPECT_THROW(interp.add_node(mi({2}), std::vector<double>{0.0}), kuq::Error);
    EXPECT_THROW(interp.add_node(MultiIndex{}, std::vector<double>{0.0}), kuq::Error);
    EXPECT_THROW(interp.add_node(mi({1}), std::vector<double>{0.0, 1.0}), kuq::Error);
}

TEST(SparseInterp, BilinearExactOnBox) {
    kt::FunctionModel model(2, 1, [](std::span<const double> z) { return std::vector<double>{z[0] * z[1]}; });
    auto interp = build({MultiIndex{}, mi({1}), mi({0, 1}), mi({1, 1})}, model, 2);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto z = kt::random_point(rng, 2);
        EXPECT_NEAR(interp.evaluate(z)[0], z[0] * z[1], 1e-14);
    }
}

TEST(SparseInterp, TensorNorms) {
    HierarchicalInterpolant interp(3, 1);
    EXPECT_NEAR(interp.tensor_norm(MultiIndex{}), 1.0, 1e-15);
    EXPECT_NEAR(interp.tensor_norm(mi({1})), 1.0 / std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(interp.tensor_norm(mi({1, 1})), 1.0 / 3.0, 1e-14);
}

// Progressive construction against an independent dense collocation solve,
// cached inverse against direct inversion, and the gamma representation.
TEST(SparseInterp, ProgressiveMatchesDenseCollocation) {
    std::mt19937_64 rng(11);
    const auto pts = leja_points(30);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = 4;
        const std::size_t n = 5 + trial * 2;
        const auto seq = kt::random_downward_closed_sequence(rng, n, d);
        const auto model = kt::smooth_model(rng, d, 3);
        const auto interp = build(seq, model, d);

        const Eigen::MatrixXd H = kt::collocation_matrix(pts, seq, d);
        Eigen::MatrixXd F(static_cast<Eigen::Index>(n), 3);
        for (std::size_t k = 0; k < n; ++k) {
            const auto f = model.solve(kt::node_point(pts, seq[k], d));
            for (int m = 0; m < 3; ++m) F(static_cast<Eigen::Index>(k), m) = f[static_cast<std::size_t>(m)];
        }
        const Eigen::MatrixXd alpha = H.partialPivLu().solve(F);
        for (std::size_t k = 0; k < n; ++k) {
            for (int m = 0; m < 3; ++m) {
                EXPECT_NEAR(interp.alpha(k)[static_cast<std::size_t>(m)], alpha(static_cast<Eigen::Index>(k), m),
                            1e-10 * (1.0 + std::abs(alpha(static_cast<Eigen::Index>(k), m))));
            }
        }

        const auto inv = interp.inverse_dense();
        const Eigen::MatrixXd direct = H.inverse();
        const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> cached(
            inv.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        EXPECT_LE((cached - direct).norm() / direct.norm(), 1e-10);

        for (int s = 0; s < 20; ++s) {
            const auto z = kt::random_point(rng, d);
            const auto val = interp.evaluate(z);
            const auto gamma = interp.gamma_weights(z);
            std::vector<double> via_gamma(3, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                const auto f = model.solve(kt::node_point(pts, seq[k], d));
                for (std::size_t m = 0; m < 3; ++m) via_gamma[m] += gamma[k] * f[m];
            }
            EXPECT_LE(kt::l2_diff(val, via_gamma), 1e-10 * kt::l2(val));
        }

        for (std::size_t k = 0; k < n; ++k) {
            const auto zk = kt::node_point(pts, seq[k], d);
            const auto f = model.solve(zk);
            EXPECT_LE(kt::l2_diff(interp.evaluate(zk), f), 1e-10 * kt::l2(f));
            const auto gamma = interp.gamma_weights(zk);
            for (std::size_t l = 0; l < n; ++l) EXPECT_NEAR(gamma[l], l == k ? 1.0 : 0.0, 1e-12);
        }
    }
}

TEST(SparseInterp, PolynomialExactness) {
    std::mt19937_64 rng(5);
    const auto seq = kt::random_downward_closed_sequence(rng, 15, 3);
    std::vector<double> coeff(seq.size());
    for (auto& c : coeff) c = kt::uniform(rng);
    const auto pts = leja_points(16);
    kt::FunctionModel model(3, 1, [&](std::span<const double> z) {
        double s = 0.0;
        for (std::size_t k = 0; k < seq.size(); ++k) s += coeff[k] * kt::tensor_H(pts, seq[k], z);
        return std::vector<double>{s};
    });
    const auto interp = build(seq, model, 3);
    for (int i = 0; i < 200; ++i) {
        const auto z = kt::random_point(rng, 3);
        const double ref = model.solve(z)[0];
        EXPECT_NEAR(interp.evaluate(z)[0], ref, 1e-9 * std::max(1.0, std::abs(ref)));
    }
}

// Both incremental gamma branches reproduce the direct product.
TEST(SparseInterp, IncrementalGammaUpdates) {
    std::mt19937_64 rng(9);
    const auto seq = kt::random_downward_closed_sequence(rng, 12, 3);
    const auto model = kt::smooth_model(rng, 3, 1);
    HierarchicalInterpolant interp(3, 1);
    const auto z = kt::random_point(rng, 3);
    std::vector<double> gamma;
    for (const auto& nu : seq) {
        const auto znu = interp.node_of(nu);
        const auto gamma_at_new = interp.size() ? interp.gamma_weights(znu) : std::vector<double>{};
        interp.add_node(nu, model.solve(znu));
        // New-candidate branch: old basis row times the leading block of the grown inverse.
        auto row_old = interp.basis_row(z);
        row_old.pop_back();
        const auto fresh_old = row_old.empty() ? std::vector<double>{} : interp.times_inverse(row_old);
        const double h = interp.eval_H(nu, z);
        gamma = kuq::extend_gamma(gamma, h, gamma_at_new);
        const auto fresh = kuq::extend_gamma(fresh_old, h, gamma_at_new);
        const auto direct = interp.gamma_weights(z);
        ASSERT_EQ(gamma.size(), direct.size());
        for (std::size_t k = 0; k < direct.size(); ++k) {
            EXPECT_NEAR(gamma[k], direct[k], 1e-11);
            EXPECT_NEAR(fresh[k], direct[k], 1e-11);
        }
        // Leading-block product with the full row equals gamma as well.
        const auto lead = interp.times_inverse(interp.basis_row(z));
        for (std::size_t k = 0; k < direct.size(); ++k) EXPECT_NEAR(lead[k], direct[k], 1e-12);
    }
}

TEST(SparseInterp, SaveLoadRoundTrip) {
    std::mt19937_64 rng(13);
    const auto seq = kt::random_downward_closed_sequence(rng, 10, 3);
    const auto model = kt::smooth_model(rng, 3, 4);
    const auto interp = build(seq, model, 3);
    const auto dir = std::filesystem::temp_directory_path() / "kuq_test_interp_roundtrip";
    std::filesystem::remove_all(dir);
    interp.save(dir);
    EXPECT_TRUE(std::filesystem::exists(dir / "indices.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "alphas.bin"));
    EXPECT_TRUE(std::filesystem::exists(dir / "leja.csv"));
    EXPECT_EQ(std::filesystem::file_size(dir / "alphas.bin"), 10u * 4u * 8u);
    const auto loaded = HierarchicalInterpolant::load(dir);
    ASSERT_EQ(loaded.size(), interp.size());
    for (std::size_t k = 0; k < interp.size(); ++k) EXPECT_EQ(loaded.indices()[k], interp.indices()[k]);
    for (int i = 0; i < 20; ++i) {
        const auto z = kt::random_point(rng, 3);
        EXPECT_EQ(loaded.evaluate(z), interp.evaluate(z));
    }
    std::filesystem::remove_all(dir);
}
