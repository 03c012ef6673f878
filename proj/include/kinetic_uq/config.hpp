// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: a flat `key = value` text format. See
// docs/config.md for the schema.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kinetic_uq/adaptive_driver.hpp"
#include "kinetic_uq/parametric_field.hpp"
#include "kinetic_uq/vfp_solver.hpp"

namespace kuq {

struct ExperimentConfig {
    // grid
    std::size_t nx = 16;
    std::size_t nv = 32;
    double dt = 0.0;  ///< 0 selects dx / 8
    double final_time = 0.1;
    std::vector<double> epsilons{1.0};

    // field
    FieldFamily family = FieldFamily::exp2;
    bool time_dependent = false;
    std::size_t dim = 20;

    // driver
    DriverKind driver = DriverKind::raspi;
    std::size_t budget = 60;
    NormKind norm = NormKind::l2;
    std::uint64_t driver_seed = 0;

    // Monte Carlo error
    std::size_t mc_samples = 200;
    std::uint64_t mc_seed = 1;
    std::size_t mc_every = 1;

    // linear solver
    double solver_tolerance = 1e-10;
    std::size_t solver_max_iterations = 500;
    std::size_t solver_restart = 40;

    // output
    std::filesystem::path output_dir = "kuq-out";
    std::filesystem::path cache_dir;  ///< empty disables the reference cache
    double slope_window = 2.0 / 3.0;

    /// Parses `key = value` lines; '#' starts a comment. Unknown keys and
    /// malformed values throw Error(config).
    static ExperimentConfig parse(std::string_view text);
    static ExperimentConfig load(const std::filesystem::path& path);

    void set(std::string_view key, std::string_view value);
    [[nodiscard]] std::string get(std::string_view key) const;
    [[nodiscard]] static std::vector<std::string> keys();

    /// Throws Error(config) when a count is zero or a value is out of range.
    void validate() const;

    /// All keys in schema order, one `key = value` per line.
    [[nodiscard]] std::string canonical() const;
    [[nodiscard]] std::uint64_t hash() const;
    /// Hash of the keys that determine the model output at a given z, for
    /// one epsilon. Used to key cached reference solutions.
    [[nodiscard]] std::uint64_t model_hash(double epsilon) const;

    [[nodiscard]] SolverOptions solver_options() const;
};

}  // namespace kuq
