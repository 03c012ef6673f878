// SPDX-License-Identifier: Apache-2.0
#include "kinetic_uq/vfp_solver.hpp"

#include <Eigen/Sparse>
#include <unsupported/Eigen/IterativeSolvers>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "kinetic_uq/error.hpp"
#include "log.hpp"

namespace kuq {
namespace {

constexpr double ml_floor = 1e-300;
const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

double shifted_maxwellian(double v, double shift) {
    const double d = v - shift;
    return std::max(inv_sqrt_2pi * std::exp(-0.5 * d * d), ml_floor);
}

// sqrt(M_l(v_a)) / sqrt(M_l(v_b)) without forming either factor.
double sqrt_ml_ratio(double va, double vb, double shift) {
    const double da = va - shift;
    const double db = vb - shift;
    return std::exp(-0.25 * (da * da - db * db));
}

// Linear operator of one implicit step, expressed in g = f / sqrt(M_l).
class StepOperator {
public:
    StepOperator(const PhaseGrid& grid, const ParametricField& field, std::span<const double> z, double t,
                 const SolverOptions& options)
        : grid_(grid), options_(options), sqrt_ml_(grid.size()) {
        const std::size_t nx = grid.nx();
        const std::size_t nv = grid.nv();
        const double eps = grid.eps();
        const auto xs = grid.x_nodes();
        std::vector<double> e(nx);
        field.E_on_grid(t, xs, z, e);
        std::vector<double> shift(nx);
        for (std::size_t i = 0; i < nx; ++i) shift[i] = eps * e[i];

        for (std::size_t i = 0; i < nx; ++i) {
            for (std::size_t j = 0; j < nv; ++j) {
                sqrt_ml_[grid.at(i, j)] = std::sqrt(shifted_maxwellian(grid.v(j), shift[i]));
            }
        }

        const double inv_dx = 1.0 / grid.dx();
        const double inv_dv2 = 1.0 / (grid.dv() * grid.dv());
        const double mass = eps / grid.dt();
        const double coll = inv_dv2 / eps;

        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(grid.size() * 5);
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t ip = (i + 1) % nx;
            const std::size_t im = (i + nx - 1) % nx;
            for (std::size_t j = 0; j < nv; ++j) {
                const auto row = static_cast<Eigen::Index>(grid.at(i, j));
                const double v = grid.v(j);
                double diag = mass;

                if (options.transport) {
                    const double vp = 0.5 * (std::abs(v) + v);
                    const double vm = 0.5 * (std::abs(v) - v);
                    diag += std::abs(v) * inv_dx;
                    if (vm != 0.0) {
                        const double r = std::exp(-0.25 * ((v - shift[ip]) * (v - shift[ip]) -
                                                           (v - shift[i]) * (v - shift[i])));
                        trips.emplace_back(row, static_cast<Eigen::Index>(grid.at(ip, j)), -vm * r * inv_dx);
                    }
                    if (vp != 0.0) {
                        const double r = std::exp(-0.25 * ((v - shift[im]) * (v - shift[im]) -
                                                           (v - shift[i]) * (v - shift[i])));
                        trips.emplace_back(row, static_cast<Eigen::Index>(grid.at(im, j)), -vp * r * inv_dx);
                    }
                }

                if (j + 1 < nv) {
                    diag += coll * sqrt_ml_ratio(grid.v(j + 1), v, shift[i]);
                    trips.emplace_back(row, row + 1, -coll);
                }
                if (j > 0) {
                    diag += coll * sqrt_ml_ratio(grid.v(j - 1), v, shift[i]);
                    trips.emplace_back(row, row - 1, -coll);
                }
                trips.emplace_back(row, row, diag);
            }
        }
        matrix_.resize(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(grid.size()));
        matrix_.setFromTriplets(trips.begin(), trips.end());
        matrix_.makeCompressed();

        if (options.transport) {
            gmres_.emplace();
            gmres_->set_restart(static_cast<int>(options.restart));
            gmres_->setMaxIterations(static_cast<Eigen::Index>(options.max_iterations));
            gmres_->setTolerance(options.tolerance);
            gmres_->compute(matrix_);
        } else {
            cg_.emplace();
            cg_->setMaxIterations(static_cast<Eigen::Index>(options.max_iterations));
            cg_->setTolerance(options.tolerance);
            cg_->compute(matrix_);
        }
    }

    std::vector<double> advance(std::span<const double> f, double t_next, StepStats* stats) const {
        const std::size_t n = grid_.size();
        const double mass = grid_.eps() / grid_.dt();
        Eigen::VectorXd g0(static_cast<Eigen::Index>(n));
        for (std::size_t k = 0; k < n; ++k) g0[static_cast<Eigen::Index>(k)] = f[k] / sqrt_ml_[k];

        // Solve for the increment so the tolerance is relative to the change.
        const Eigen::VectorXd r0 = mass * g0 - matrix_ * g0;
        const double r0_norm = r0.norm();
        Eigen::VectorXd delta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        std::size_t iterations = 0;
        double rel = 0.0;
        if (r0_norm > 0.0) {
            Eigen::VectorXd residual = r0;
            for (int pass = 0; pass < 4; ++pass) {
                Eigen::VectorXd correction;
                if (gmres_) {
                    correction = gmres_->solve(residual);
                    iterations += static_cast<std::size_t>(gmres_->iterations());
                } else {
                    correction = cg_->solve(residual);
                    iterations += static_cast<std::size_t>(cg_->iterations());
                }
                delta += correction;
                residual = r0 - matrix_ * delta;
                rel = residual.norm() / r0_norm;
                if (rel <= options_.tolerance) break;
            }
            if (!(rel <= options_.tolerance)) {
                std::ostringstream msg;
                msg << "Krylov solve did not converge at t = " << t_next << ": relative residual " << rel
                    << " after " << iterations << " iterations (tolerance " << options_.tolerance << ")";
                throw Error(ErrorCode::solver, msg.str());
            }
        }
        if (stats) {
            stats->iterations = iterations;
            stats->relative_residual = rel;
        }

        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = sqrt_ml_[k] * (g0[static_cast<Eigen::Index>(k)] + delta[static_cast<Eigen::Index>(k)]);
        }
        return out;
    }

private:
    const PhaseGrid& grid_;
    SolverOptions options_;
    std::vector<double> sqrt_ml_;
    SparseMatrix matrix_;
    std::optional<Eigen::GMRES<SparseMatrix, Eigen::DiagonalPreconditioner<double>>> gmres_;
    std::optional<Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                                           Eigen::DiagonalPreconditioner<double>>> cg_;
};

}  // namespace

PhaseGrid::PhaseGrid(std::size_t nx, std::size_t nv, double eps, double dt)
    : nx_(nx), nv_(nv), eps_(eps) {
    if (nx < 2 || nv < 3) throw Error(ErrorCode::invalid_argument, "phase grid needs nx >= 2 and nv >= 3");
    if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be positive");
    dx_ = 2.0 * std::numbers::pi / static_cast<double>(nx);
    dv_ = (v_max - v_min) / static_cast<double>(nv);
    dt_ = dt > 0.0 ? dt : dx_ / 8.0;
}

std::vector<double> PhaseGrid::x_nodes() const {
    std::vector<double> xs(nx_);
    for (std::size_t i = 0; i < nx_; ++i) xs[i] = x(i);
    return xs;
}

std::vector<double> PhaseGrid::v_nodes() const {
    std::vector<double> vs(nv_);
    for (std::size_t j = 0; j < nv_; ++j) vs[j] = v(j);
    return vs;
}

PhaseField::PhaseField(const PhaseGrid& grid, FieldRole r)
    : nx(grid.nx()), nv(grid.nv()), role(r), values(grid.size(), 0.0) {}

PhaseField::PhaseField(const PhaseGrid& grid, FieldRole r, std::vector<double> v)
    : nx(grid.nx()), nv(grid.nv()), role(r), values(std::move(v)) {
    if (values.size() != grid.size()) throw Error(ErrorCode::invalid_argument, "phase field size mismatch");
}

PhaseField global_maxwellian(const PhaseGrid& grid) {
    PhaseField m(grid, FieldRole::equilibrium);
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        for (std::size_t j = 0; j < grid.nv(); ++j) m(i, j) = inv_sqrt_2pi * std::exp(-0.5 * grid.v(j) * grid.v(j));
    }
    return m;
}

PhaseField global_equilibrium(const PhaseGrid& grid, const ParametricField& field, std::span<const double> z) {
    PhaseField f = global_maxwellian(grid);
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        const double w = std::exp(-field.phi_inf(grid.x(i), z));
        for (std::size_t j = 0; j < grid.nv(); ++j) f(i, j) *= w;
    }
    return f;
}

PhaseField local_maxwellian(const PhaseGrid& grid, std::span<const double> E_per_x) {
    if (E_per_x.size() != grid.nx()) throw Error(ErrorCode::invalid_argument, "need one E value per x node");
    PhaseField m(grid, FieldRole::equilibrium);
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        const double shift = grid.eps() * E_per_x[i];
        for (std::size_t j = 0; j < grid.nv(); ++j) m(i, j) = shifted_maxwellian(grid.v(j), shift);
    }
    return m;
}

void collision_apply(double dv, std::span<const double> ml, std::span<const double> f, std::span<double> out) {
    const std::size_t nv = f.size();
    if (ml.size() != nv || out.size() != nv) throw Error(ErrorCode::invalid_argument, "column length mismatch");
    const double inv_dv2 = 1.0 / (dv * dv);
    // Flux through the face j + 1/2; faces outside the grid carry no flux.
    double flux_below = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
        double flux_above = 0.0;
        if (j + 1 < nv) {
            const double m0 = std::max(ml[j], ml_floor);
            const double m1 = std::max(ml[j + 1], ml_floor);
            flux_above = std::sqrt(m1 * m0) * (f[j + 1] / m1 - f[j] / m0);
        }
        out[j] = inv_dv2 * (flux_above - flux_below);
        flux_below = flux_above;
    }
}

PhaseField collision_operator_apply(const PhaseGrid& grid, const ParametricField& field, std::span<const double> z,
                                    double t, std::span<const double> f) {
    if (f.size() != grid.size()) throw Error(ErrorCode::invalid_argument, "phase field size mismatch");
    std::vector<double> e(grid.nx());
    field.E_on_grid(t, grid.x_nodes(), z, e);
    const PhaseField ml = local_maxwellian(grid, e);
    PhaseField out(grid, FieldRole::residual);
    const std::size_t nv = grid.nv();
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        collision_apply(grid.dv(), std::span<const double>(ml.values).subspan(i * nv, nv), f.subspan(i * nv, nv),
                        std::span<double>(out.values).subspan(i * nv, nv));
    }
    return out;
}

void transport_apply(const PhaseGrid& grid, std::span<const double> f, std::span<double> out) {
    const std::size_t nx = grid.nx();
    const std::size_t nv = grid.nv();
    if (f.size() != grid.size() || out.size() != grid.size()) {
        throw Error(ErrorCode::invalid_argument, "phase field size mismatch");
    }
    const double inv_dx = 1.0 / grid.dx();
    for (std::size_t j = 0; j < nv; ++j) {
        const double v = grid.v(j);
        const double vp = 0.5 * (std::abs(v) + v);
        const double vm = 0.5 * (std::abs(v) - v);
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t ip = (i + 1) % nx;
            const std::size_t im = (i + nx - 1) % nx;
            const double flux_right = vp * f[grid.at(i, j)] - vm * f[grid.at(ip, j)];
            const double flux_left = vp * f[grid.at(im, j)] - vm * f[grid.at(i, j)];
            out[grid.at(i, j)] = (flux_right - flux_left) * inv_dx;
        }
    }
}

double discrete_norm(const PhaseGrid& grid, std::span<const double> f, NormKind kind) {
    if (f.size() != grid.size()) throw Error(ErrorCode::invalid_argument, "phase field size mismatch");
    double s = 0.0;
    for (double x : f) s += x * x;
    if (kind == NormKind::v) {
        const std::size_t nx = grid.nx();
        const double inv_2dx = 0.5 / grid.dx();
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t ip = (i + 1) % nx;
            const std::size_t im = (i + nx - 1) % nx;
            for (std::size_t j = 0; j < grid.nv(); ++j) {
                const double d = (f[grid.at(ip, j)] - f[grid.at(im, j)]) * inv_2dx;
                s += d * d;
            }
        }
    }
    return std::sqrt(s * grid.dx() * grid.dv());
}

double total_mass(const PhaseGrid& grid, std::span<const double> f) {
    double s = 0.0;
    for (double x : f) s += x;
    return s * grid.dx() * grid.dv();
}

VfpSolver::VfpSolver(PhaseGrid grid, ParametricField field, SolverOptions options)
    : grid_(grid), field_(std::move(field)), options_(options) {
    if (!(options_.tolerance > 0.0)) throw Error(ErrorCode::invalid_argument, "solver tolerance must be positive");
    if (options_.restart == 0) throw Error(ErrorCode::invalid_argument, "GMRES restart must be positive");
}

std::vector<double> VfpSolver::initial_data(std::span<const double> z) const {
    PhaseField f = global_equilibrium(grid_, field_, z);
    for (std::size_t i = 0; i < grid_.nx(); ++i) {
        const double s = std::sin(grid_.x(i));
        for (std::size_t j = 0; j < grid_.nv(); ++j) {
            f(i, j) += s * inv_sqrt_2pi * std::exp(-0.5 * grid_.v(j) * grid_.v(j));
        }
    }
    return std::move(f.values);
}

std::vector<double> VfpSolver::step(std::span<const double> f, std::span<const double> z, double t_next,
                                    StepStats* stats) const {
    if (f.size() != grid_.size()) throw Error(ErrorCode::invalid_argument, "phase field size mismatch");
    StepOperator op(grid_, field_, z, t_next, options_);
    return op.advance(f, t_next, stats);
}

std::size_t VfpSolver::step_count(double T) const {
    if (!(T >= 0.0)) throw Error(ErrorCode::invalid_argument, "final time must be nonnegative");
    return static_cast<std::size_t>(std::llround(T / grid_.dt()));
}

SolveResult VfpSolver::solve_to_time(std::span<const double> f0, std::span<const double> z, double T) const {
    if (f0.size() != grid_.size()) throw Error(ErrorCode::invalid_argument, "phase field size mismatch");
    SolveResult result;
    result.steps = step_count(T);
    result.final_state.assign(f0.begin(), f0.end());
    result.previous_state = result.final_state;

    std::optional<StepOperator> frozen;
    if (!field_.time_dependent() && result.steps > 0) frozen.emplace(grid_, field_, z, grid_.dt(), options_);

    for (std::size_t m = 1; m <= result.steps; ++m) {
        const double t_next = static_cast<double>(m) * grid_.dt();
        StepStats stats;
        std::vector<double> next;
        if (frozen) {
            next = frozen->advance(result.final_state, t_next, &stats);
        } else {
            StepOperator op(grid_, field_, z, t_next, options_);
            next = op.advance(result.final_state, t_next, &stats);
        }
        result.krylov_iterations += stats.iterations;
        result.previous_state = std::move(result.final_state);
        result.final_state = std::move(next);
    }
    result.final_time = static_cast<double>(result.steps) * grid_.dt();

    double min_value = 0.0;
    for (double x : result.final_state) min_value = std::min(min_value, x);
    if (min_value < 0.0) {
        detail::logger().debug("density has negative entries (min {:.3e}) at t = {}", min_value, result.final_time);
    }
    return result;
}

}  // namespace kuq
