// SPDX-License-Identifier: Apache-2.0
//
// 1D-1V Vlasov-Fokker-Planck solver at a fixed parameter z.
//
//   eps (f^{m+1} - f^m) / dt + D_x f^{m+1} = (1/eps) P_z(f^{m+1})
//
// D_x is the periodic first-order upwind difference of v f, and P_z the
// symmetrized Fokker-Planck discretization around the shifted Maxwellian
// M_l = exp(-|v - eps E|^2 / 2) / sqrt(2 pi), evaluated at t_{m+1}. The linear
// system is solved in g = f / sqrt(M_l), where the collision block becomes
// symmetric.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kinetic_uq/parametric_field.hpp"

namespace kuq {

/// Uniform phase grid: x_i = i dx on [0, 2 pi) (periodic), v_j = -6 + j dv.
class PhaseGrid {
public:
    static constexpr double v_min = -6.0;
    static constexpr double v_max = 6.0;

    /// dt <= 0 selects the default dt = dx / 8.
    PhaseGrid(std::size_t nx, std::size_t nv, double eps, double dt = 0.0);

    [[nodiscard]] std::size_t nx() const noexcept { return nx_; }
    [[nodiscard]] std::size_t nv() const noexcept { return nv_; }
    [[nodiscard]] std::size_t size() const noexcept { return nx_ * nv_; }
    [[nodiscard]] double dx() const noexcept { return dx_; }
    [[nodiscard]] double dv() const noexcept { return dv_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] double eps() const noexcept { return eps_; }
    [[nodiscard]] double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx_; }
    [[nodiscard]] double v(std::size_t j) const noexcept { return v_min + static_cast<double>(j) * dv_; }
    [[nodiscard]] std::vector<double> x_nodes() const;
    [[nodiscard]] std::vector<double> v_nodes() const;
    /// Row-major offset, row = x index.
    [[nodiscard]] std::size_t at(std::size_t i, std::size_t j) const noexcept { return i * nv_ + j; }

private:
    std::size_t nx_;
    std::size_t nv_;
    double dx_;
    double dv_;
    double dt_;
    double eps_;
};

enum class FieldRole { density, transformed, residual, equilibrium };

/// Discrete function on a PhaseGrid (nx x nv, row-major).
struct PhaseField {
    std::size_t nx = 0;
    std::size_t nv = 0;
    FieldRole role = FieldRole::density;
    std::vector<double> values;

    PhaseField() = default;
    PhaseField(const PhaseGrid& grid, FieldRole r);
    PhaseField(const PhaseGrid& grid, FieldRole r, std::vector<double> v);

    [[nodiscard]] double& operator()(std::size_t i, std::size_t j) { return values[i * nv + j]; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return values[i * nv + j]; }
};

enum class NormKind { l2, v };

/// M(v) = exp(-v^2/2) / sqrt(2 pi), replicated over x.
[[nodiscard]] PhaseField global_maxwellian(const PhaseGrid& grid);
/// F = exp(-phi_inf(x, z)) M(v).
[[nodiscard]] PhaseField global_equilibrium(const PhaseGrid& grid, const ParametricField& field,
                                            std::span<const double> z);
/// exp(-|v - eps E_i|^2 / 2) / sqrt(2 pi) per x column, floored at 1e-300.
[[nodiscard]] PhaseField local_maxwellian(const PhaseGrid& grid, std::span<const double> E_per_x);

/// P(f)_j for one velocity column with zero-flux closure at both ends.
void collision_apply(double dv, std::span<const double> ml_column, std::span<const double> f_column,
                     std::span<double> out);

/// Column-wise collision_apply with M_l(t, x, z): the z-dependent operator
/// B(z) f of the residual estimator. Matrix-free.
[[nodiscard]] PhaseField collision_operator_apply(const PhaseGrid& grid, const ParametricField& field,
                                                  std::span<const double> z, double t, std::span<const double> f);

/// Periodic upwind transport (F_{i+1/2,j} - F_{i-1/2,j}) / dx.
void transport_apply(const PhaseGrid& grid, std::span<const double> f, std::span<double> out);

/// L2: sqrt(sum f^2 dx dv). V: adds the periodic centered x-difference term.
[[nodiscard]] double discrete_norm(const PhaseGrid& grid, std::span<const double> f, NormKind kind);
/// sum f dx dv.
[[nodiscard]] double total_mass(const PhaseGrid& grid, std::span<const double> f);

struct SolverOptions {
    double tolerance = 1e-10;      ///< relative residual on the increment system
    std::size_t max_iterations = 500;
    std::size_t restart = 40;
    bool transport = true;         ///< false: collision only, solved by CG
};

struct StepStats {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

struct SolveResult {
    std::vector<double> final_state;
    std::vector<double> previous_state;  ///< snapshot one step before the end
    double final_time = 0.0;
    std::size_t steps = 0;
    std::size_t krylov_iterations = 0;
};

class VfpSolver {
public:
    VfpSolver(PhaseGrid grid, ParametricField field, SolverOptions options = {});

    [[nodiscard]] const PhaseGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const ParametricField& field() const noexcept { return field_; }
    [[nodiscard]] const SolverOptions& options() const noexcept { return options_; }

    /// sin(x) / sqrt(2 pi) exp(-v^2/2) + F(x, v, z).
    [[nodiscard]] std::vector<double> initial_data(std::span<const double> z) const;

    /// One implicit step from t_next - dt to t_next. Throws Error(solver) when
    /// the Krylov iteration does not converge.
    std::vector<double> step(std::span<const double> f, std::span<const double> z, double t_next,
                             StepStats* stats = nullptr) const;

    /// round(T / dt) steps from f0.
    [[nodiscard]] SolveResult solve_to_time(std::span<const double> f0, std::span<const double> z, double T) const;

    [[nodiscard]] std::size_t step_count(double T) const;

private:
    PhaseGrid grid_;
    ParametricField field_;
    SolverOptions options_;
};

}  // namespace kuq
