// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures for the unit and acceptance tests: analytic stub models and
// independent dense oracles that do not go through the library's own
// evaluation paths.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "kinetic_uq/model.hpp"
#include "kinetic_uq/multi_index.hpp"

namespace kuq::test {

/// Model given by a closure z -> f(z).
class FunctionModel : public Model {
public:
    using Fn = std::function<std::vector<double>(std::span<const double>)>;

    FunctionModel(std::size_t dim, std::size_t payload, Fn fn) : dim_(dim), payload_(payload), fn_(std::move(fn)) {}

    [[nodiscard]] std::size_t payload_size() const override { return payload_; }
    [[nodiscard]] std::size_t parameter_dim() const override { return dim_; }
    [[nodiscard]] std::vector<double> solve(std::span<const double> z) const override { return fn_(z); }

private:
    std::size_t dim_;
    std::size_t payload_;
    Fn fn_;
};

/// Operator model with a closure for f and for B(z) f.
class FunctionOperatorModel : public OperatorModel {
public:
    using Fn = std::function<std::vector<double>(std::span<const double>)>;
    using Op = std::function<void(std::span<const double>, std::span<const double>, std::span<double>)>;

    FunctionOperatorModel(std::size_t dim, std::size_t payload, double eps, Fn fn, Op op)
        : dim_(dim), payload_(payload), eps_(eps), fn_(std::move(fn)), op_(std::move(op)) {}

    [[nodiscard]] std::size_t payload_size() const override { return payload_; }
    [[nodiscard]] std::size_t parameter_dim() const override { return dim_; }
    [[nodiscard]] std::vector<double> solve(std::span<const double> z) const override { return fn_(z); }
    [[nodiscard]] double epsilon() const override { return eps_; }
    void apply_operator(std::span<const double> z, std::span<const double> f, std::span<double> out) const override {
        op_(z, f, out);
    }

private:
    std::size_t dim_;
    std::size_t payload_;
    double eps_;
    Fn fn_;
    Op op_;
};

inline double uniform(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<double> random_point(std::mt19937_64& rng, std::size_t d) {
    std::vector<double> z(d);
    for (auto& x : z) x = uniform(rng);
    return z;
}

/// Leja points recomputed by plain brute force over a fine grid (no polishing).
inline std::vector<double> brute_force_leja(std::size_t depth, std::size_t grid = 200001) {
    std::vector<double> pts{0.0};
    while (pts.size() < depth) {
        double best = -1.0;
        double arg = 0.0;
        for (std::size_t i = 0; i < grid; ++i) {
            const double b = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(grid - 1);
            double p = 1.0;
            for (double q : pts) p *= std::abs(b - q);
            if (p > best * (1.0 + 1e-13) || (std::abs(p - best) <= 1e-13 * best && b > arg)) {
                best = p;
                arg = b;
            }
        }
        pts.push_back(arg);
    }
    return pts;
}

/// l_k(b) by the product formula on explicit points.
inline double lagrange_hier(std::span<const double> pts, std::size_t k, double b) {
    double v = 1.0;
    for (std::size_t m = 0; m < k; ++m) v *= (b - pts[m]) / (pts[k] - pts[m]);
    return v;
}

inline double tensor_H(std::span<const double> pts, const MultiIndex& nu, std::span<const double> z) {
    double v = 1.0;
    for (const auto& [j, k] : nu.entries()) v *= lagrange_hier(pts, k, j <= z.size() ? z[j - 1] : 0.0);
    return v;
}

inline std::vector<double> node_point(std::span<const double> pts, const MultiIndex& nu, std::size_t d) {
    std::vector<double> z(d, 0.0);
    for (const auto& [j, k] : nu.entries()) z[j - 1] = pts[k];
    return z;
}

/// Collocation matrix [H_{nu_l}(z_{nu_k})]_{k,l}.
inline Eigen::MatrixXd collocation_matrix(std::span<const double> pts, std::span<const MultiIndex> seq,
                                          std::size_t d) {
    const auto n = static_cast<Eigen::Index>(seq.size());
    Eigen::MatrixXd H(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto zk = node_point(pts, seq[static_cast<std::size_t>(k)], d);
        for (Eigen::Index l = 0; l < n; ++l) H(k, l) = tensor_H(pts, seq[static_cast<std::size_t>(l)], zk);
    }
    return H;
}

/// Random admissible growth: picks a uniformly random member of the
/// downward-closed margin (all nu + e_j with j <= d that keep the set
/// downward closed).
inline std::vector<MultiIndex> random_downward_closed_sequence(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::vector<MultiIndex> seq{MultiIndex{}};
    while (seq.size() < n) {
        std::vector<MultiIndex> margin;
        for (const auto& nu : seq) {
            for (std::uint32_t j = 1; j <= d; ++j) {
                const MultiIndex c = nu.incremented(j);
                if (std::find(seq.begin(), seq.end(), c) != seq.end()) continue;
                if (std::find(margin.begin(), margin.end(), c) != margin.end()) continue;
                bool ok = true;
                for (const auto& [i, v] : c.entries()) {
                    (void)v;
                    if (std::find(seq.begin(), seq.end(), c.decremented(i)) == seq.end()) ok = false;
                }
                if (ok) margin.push_back(c);
            }
        }
        std::uniform_int_distribution<std::size_t> pick(0, margin.size() - 1);
        seq.push_back(margin[pick(rng)]);
    }
    return seq;
}

/// Smooth vector-valued model exp(sum c_i z_i) * (1 + m), m = 0..payload-1.
inline FunctionModel smooth_model(std::mt19937_64& rng, std::size_t d, std::size_t payload) {
    std::vector<double> c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = uniform(rng, -1.0, 1.0) / static_cast<double>(i + 1);
    return FunctionModel(d, payload, [c, payload](std::span<const double> z) {
        double s = 0.0;
        for (std::size_t i = 0; i < c.size() && i < z.size(); ++i) s += c[i] * z[i];
        std::vector<double> out(payload);
        for (std::size_t m = 0; m < payload; ++m) out[m] = std::exp(s * (1.0 + 0.3 * static_cast<double>(m)));
        return out;
    });
}

inline double l2(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

inline double l2_diff(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// ---- VFP dense oracles ------------------------------------------------------

inline double maxwell_shifted(double v, double shift) {
    return std::exp(-0.5 * (v - shift) * (v - shift)) / std::sqrt(2.0 * std::numbers::pi);
}

/// Dense matrix of the collision operator P_z on an nx x nv grid (row-major
/// x-outer), assembled entry by entry from the flux formula with zero-flux
/// closure. `shift[i]` = eps * E(x_i).
inline Eigen::MatrixXd dense_collision(std::size_t nx, std::size_t nv, double vmin, double dv,
                                       std::span<const double> shift) {
    const auto n = static_cast<Eigen::Index>(nx * nv);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    const double c = 1.0 / (dv * dv);
    for (std::size_t i = 0; i < nx; ++i) {
        auto m = [&](std::size_t j) { return maxwell_shifted(vmin + static_cast<double>(j) * dv, shift[i]); };
        for (std::size_t j = 0; j < nv; ++j) {
            const auto r = static_cast<Eigen::Index>(i * nv + j);
            if (j + 1 < nv) {
                const double w = std::sqrt(m(j + 1) * m(j));
                P(r, r + 1) += c * w / m(j + 1);
                P(r, r) -= c * w / m(j);
            }
            if (j > 0) {
                const double w = std::sqrt(m(j - 1) * m(j));
                P(r, r) -= c * w / m(j);
                P(r, r - 1) += c * w / m(j - 1);
            }
        }
    }
    return P;
}

/// Dense periodic upwind transport D_x.
inline Eigen::MatrixXd dense_transport(std::size_t nx, std::size_t nv, double vmin, double dv, double dx) {
    const auto n = static_cast<Eigen::Index>(nx * nv);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t ip = (i + 1) % nx;
        const std::size_t im = (i + nx - 1) % nx;
        for (std::size_t j = 0; j < nv; ++j) {
            const double v = vmin + static_cast<double>(j) * dv;
            const double a = 0.5 * (std::abs(v) + v);
            const double b = 0.5 * (std::abs(v) - v);
            const auto r = static_cast<Eigen::Index>(i * nv + j);
            // F_{i+1/2} = a f_i - b f_{i+1};  F_{i-1/2} = a f_{i-1} - b f_i
            D(r, r) += (a + b) / dx;
            D(r, static_cast<Eigen::Index>(ip * nv + j)) -= b / dx;
            D(r, static_cast<Eigen::Index>(im * nv + j)) -= a / dx;
        }
    }
    return D;
}

inline Eigen::VectorXd as_vec(std::span<const double> v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace kuq::test
