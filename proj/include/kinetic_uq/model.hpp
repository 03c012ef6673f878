// SPDX-License-Identifier: Apache-2.0
//
// Parametric models consumed by the sampling drivers and the harness.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "kinetic_uq/vfp_solver.hpp"

namespace kuq {

/// z -> f(z) in R^M. solve() must be safe to call concurrently.
class Model {
public:
    virtual ~Model() = default;

    [[nodiscard]] virtual std::size_t payload_size() const = 0;
    [[nodiscard]] virtual std::size_t parameter_dim() const = 0;
    [[nodiscard]] virtual std::vector<double> solve(std::span<const double> z) const = 0;

    /// Norm used by the greedy criteria and error reports. Euclidean by default.
    [[nodiscard]] virtual double norm(std::span<const double> payload) const {
        double s = 0.0;
        for (double x : payload) s += x * x;
        return std::sqrt(s);
    }
};

/// A model whose discrete scheme has a z-dependent implicit operator B(z),
/// so that the interpolation residual (1/eps) sum_k gamma_k (B_k f_k - B(z) f_k)
/// can be formed without new solves.
class OperatorModel : public Model {
public:
    [[nodiscard]] virtual double epsilon() const = 0;
    /// out = B(z) f at the final time.
    virtual void apply_operator(std::span<const double> z, std::span<const double> f,
                                std::span<double> out) const = 0;
};

/// The VFP scheme as a parametric model: f(T, ., ., z) from the standard
/// initial data.
class VfpModel final : public OperatorModel {
public:
    VfpModel(PhaseGrid grid, ParametricField field, double final_time, SolverOptions options = {},
             NormKind norm = NormKind::l2);

    [[nodiscard]] std::size_t payload_size() const override { return solver_.grid().size(); }
    [[nodiscard]] std::size_t parameter_dim() const override { return solver_.field().dim(); }
    [[nodiscard]] std::vector<double> solve(std::span<const double> z) const override;
    [[nodiscard]] double norm(std::span<const double> payload) const override;

    [[nodiscard]] double epsilon() const override { return solver_.grid().eps(); }
    void apply_operator(std::span<const double> z, std::span<const double> f, std::span<double> out) const override;

    /// Full solve keeping the last two snapshots.
    [[nodiscard]] SolveResult solve_with_history(std::span<const double> z) const;

    [[nodiscard]] const VfpSolver& solver() const noexcept { return solver_; }
    [[nodiscard]] const PhaseGrid& grid() const noexcept { return solver_.grid(); }
    [[nodiscard]] double final_time() const noexcept { return final_time_; }
    /// Time at which the scheme actually stops: round(T / dt) * dt.
    [[nodiscard]] double discrete_final_time() const noexcept;
    [[nodiscard]] NormKind norm_kind() const noexcept { return norm_; }

private:
    VfpSolver solver_;
    double final_time_;
    NormKind norm_;
};

}  // namespace kuq
