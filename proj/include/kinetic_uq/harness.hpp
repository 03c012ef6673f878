// SPDX-License-Identifier: Apache-2.0
//
// Experiment harness: Monte Carlo error of an interpolant against reference
// solves on the same discretization, slope fitting, the small-dimension
// best-N Legendre oracle, and the run_experiment pipeline that writes CSV and
// SVG reports.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "kinetic_uq/adaptive_driver.hpp"
#include "kinetic_uq/config.hpp"
#include "kinetic_uq/model.hpp"
#include "kinetic_uq/multi_index.hpp"
#include "kinetic_uq/sparse_interp.hpp"

namespace kuq {

struct ErrorEstimate {
    double error = 0.0;      ///< sqrt(mean ||I(z_i) - f(z_i)||^2)
    double std_error = 0.0;  ///< delta-method standard error of `error`
};

/// Seeded uniform samples on [-1, 1]^dim with their reference solutions.
class ReferenceSet {
public:
    /// Solves the model at `count` samples. With a nonempty `cache_dir`,
    /// solutions are read from / written to `cache_dir` under a name derived
    /// from `model_key` and the sample.
    ReferenceSet(const Model& model, std::size_t count, std::uint64_t seed,
                 const std::filesystem::path& cache_dir = {}, std::uint64_t model_key = 0);

    [[nodiscard]] static std::vector<std::vector<double>> draw(std::size_t count, std::size_t dim, std::uint64_t seed);

    [[nodiscard]] std::size_t size() const noexcept { return z_.size(); }
    [[nodiscard]] std::span<const double> z(std::size_t i) const { return z_.at(i); }
    [[nodiscard]] std::span<const double> reference(std::size_t i) const { return f_.at(i); }
    [[nodiscard]] std::size_t cache_hits() const noexcept { return cache_hits_; }
    [[nodiscard]] std::size_t solves() const noexcept { return solves_; }

private:
    std::vector<std::vector<double>> z_;
    std::vector<std::vector<double>> f_;
    std::size_t cache_hits_ = 0;
    std::size_t solves_ = 0;
};

/// Error of `interp` over the reference samples, measured in `model.norm`.
[[nodiscard]] ErrorEstimate mc_error(const HierarchicalInterpolant& interp, const ReferenceSet& refs,
                                     const Model& model);
[[nodiscard]] ErrorEstimate mc_error(const HierarchicalInterpolant& interp, const Model& model,
                                     std::size_t sample_count, std::uint64_t seed);

/// Keeps I_n(z_i) for every sample and adds alpha_k H_k(z_i) as nodes arrive,
/// so each estimate costs one pass over the new nodes only.
class ProgressiveError {
public:
    ProgressiveError(const ReferenceSet& refs, const Model& model);

    /// Accounts for nodes added to `interp` since the last call.
    void sync(const HierarchicalInterpolant& interp);
    [[nodiscard]] ErrorEstimate estimate() const;
    [[nodiscard]] std::size_t nodes() const noexcept { return synced_; }

private:
    const ReferenceSet& refs_;
    const Model& model_;
    std::vector<std::vector<double>> values_;
    std::size_t synced_ = 0;
};

/// Least-squares slope of log(error) against log(n) over the trailing
/// `window` fraction of the points. Needs at least 4 points in total and 2
/// in the window; errors and n must be positive.
[[nodiscard]] double slope_fit(std::span<const double> n, std::span<const double> error, double window = 2.0 / 3.0);

/// Legendre expansion on [-1, 1]^d (uniform probability measure) with
/// orthonormal L_k = sqrt(2k + 1) P_k, computed by tensor Gauss-Legendre
/// quadrature.
struct LegendreExpansion {
    std::vector<MultiIndex> indices;       ///< sorted by decreasing coefficient norm
    std::vector<double> coefficient_norms; ///< model.norm(h_nu), same order
    std::vector<std::vector<double>> coefficients;

    /// sqrt(sum of squared norms beyond the n largest).
    [[nodiscard]] double tail(std::size_t n) const;
};

/// Requires 1 <= d <= 3 and max_degree <= 10. `quadrature_points` = 0 uses
/// max_degree + 1 per dimension.
[[nodiscard]] LegendreExpansion legendre_expansion(const Model& model, std::size_t d, std::size_t max_degree,
                                                   std::size_t quadrature_points = 0);
[[nodiscard]] double best_n_oracle(const Model& model, std::size_t d, std::size_t max_degree, std::size_t n);

/// For each dimension j = 1..d, the number of distinct values nu_j over the set.
[[nodiscard]] std::vector<std::size_t> projection_histogram(std::span<const MultiIndex> set, std::size_t d);

struct ConvergenceRecord {
    std::size_t n = 0;
    double error = 0.0;
    double std_error = 0.0;
    std::size_t model_solves = 0;
    std::size_t operator_applies = 0;
};

struct ExperimentResult {
    std::filesystem::path dir;
    double epsilon = 1.0;
    std::vector<ConvergenceRecord> records;
    std::vector<StepRecord> steps;
    std::vector<std::size_t> projections;
    double slope = 0.0;  ///< NaN with fewer than 4 records
    std::uint64_t config_hash = 0;
};

/// Runs the configured driver for one epsilon and writes convergence.csv,
/// selection.csv, projections.csv, plot.svg, projections.svg and
/// run_info.txt into `dir`. On failure writes `PARTIAL` with the error
/// message and rethrows.
ExperimentResult run_single(const ExperimentConfig& config, double epsilon, const std::filesystem::path& dir);

/// One run per epsilon: directly in output_dir for a single value, else in
/// output_dir/eps_<value>.
std::vector<ExperimentResult> run_experiment(const ExperimentConfig& config);

[[nodiscard]] std::unique_ptr<VfpModel> make_model(const ExperimentConfig& config, double epsilon);

/// Parses a convergence.csv written by run_single.
[[nodiscard]] std::vector<ConvergenceRecord> read_convergence_csv(const std::filesystem::path& path);

}  // namespace kuq
