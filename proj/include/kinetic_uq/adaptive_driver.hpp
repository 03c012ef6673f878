// SPDX-License-Identifier: Apache-2.0
//
// Sampling drivers that grow a hierarchical interpolant one node at a time
// over the anchored-neighbor pool:
//
//   * AspiDriver: solves the model at every candidate and picks the largest
//     weighted surplus ||alpha_nu|| ||H_nu||.
//   * RaspiDriver: ranks candidates by the interpolation residual of the
//     discrete scheme, built from cached operator applications; only the
//     winner is solved.
//   * AnisotropicMcDriver: picks a pool member uniformly at random.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "kinetic_uq/model.hpp"
#include "kinetic_uq/multi_index.hpp"
#include "kinetic_uq/sparse_interp.hpp"

namespace kuq {

enum class DriverKind { aspi, raspi, amc };

[[nodiscard]] std::string_view to_string(DriverKind k);
[[nodiscard]] DriverKind parse_driver_kind(std::string_view s);

struct CostCounters {
    std::size_t model_solves = 0;
    std::size_t operator_applies = 0;
    /// Length-M vector updates (axpy-like), the dominant non-solve work.
    std::size_t vector_ops = 0;
};

struct StepRecord {
    std::size_t step = 0;       ///< number of nodes after this step
    MultiIndex selected;
    double criterion = 0.0;     ///< value that decided the selection
    CostCounters totals;
    std::size_t pool_size = 0;  ///< pool size after the update
    double wall_ms = 0.0;
};

struct DriverOptions {
    /// Parameter dimension; 0 takes the model's.
    std::uint32_t d_max = 0;
    std::uint64_t seed = 0;            ///< anisotropic MC only
    bool cache_cross_products = true;  ///< RASPI: keep B_nu f_k per candidate
};

class SamplingDriver {
public:
    virtual ~SamplingDriver() = default;
    SamplingDriver(const SamplingDriver&) = delete;
    SamplingDriver& operator=(const SamplingDriver&) = delete;

    [[nodiscard]] virtual DriverKind kind() const noexcept = 0;

    /// Adds one node. The first call solves at the null index.
    const StepRecord& step();
    /// Steps until the interpolant has `budget` nodes or the pool is empty.
    void run(std::size_t budget, const std::function<void(const StepRecord&)>& on_step = {});

    [[nodiscard]] const HierarchicalInterpolant& interpolant() const noexcept { return interp_; }
    [[nodiscard]] const IndexSet& index_set() const noexcept { return set_; }
    [[nodiscard]] const CostCounters& counters() const noexcept { return counters_; }
    [[nodiscard]] std::span<const StepRecord> history() const noexcept { return history_; }
    /// Model outputs f_{nu_k} in selection order.
    [[nodiscard]] std::span<const std::vector<double>> node_data() const noexcept { return node_data_; }
    [[nodiscard]] const Model& model() const noexcept { return model_; }

protected:
    SamplingDriver(const Model& model, DriverOptions options);

    /// Picks the next index from the pool; sets `criterion`.
    virtual MultiIndex select(double& criterion) = 0;
    /// Model output at z_nu. Default: one counted solve.
    virtual std::vector<double> obtain(const MultiIndex& nu);
    /// Called after nu joined the interpolant and the pool was updated;
    /// `fresh` holds the new pool members.
    virtual void promoted(const MultiIndex& nu, std::span<const MultiIndex> fresh) {
        (void)nu;
        (void)fresh;
    }

    std::vector<double> solve_counted(const MultiIndex& nu);
    /// ||alpha|| * ||H_nu|| for data f at z_nu against the current interpolant.
    double surplus_criterion(const MultiIndex& nu, std::span<const double> data) const;

    const Model& model_;
    DriverOptions options_;
    HierarchicalInterpolant interp_;
    IndexSet set_;
    CostCounters counters_;
    std::vector<StepRecord> history_;
    std::vector<std::vector<double>> node_data_;
};

class AspiDriver final : public SamplingDriver {
public:
    AspiDriver(const Model& model, DriverOptions options);
    [[nodiscard]] DriverKind kind() const noexcept override { return DriverKind::aspi; }

    /// Cached candidate outputs (solved, not yet selected).
    [[nodiscard]] std::size_t cached_candidates() const noexcept { return candidate_data_.size(); }

protected:
    MultiIndex select(double& criterion) override;
    std::vector<double> obtain(const MultiIndex& nu) override;

private:
    std::map<MultiIndex, std::vector<double>> candidate_data_;
};

class RaspiDriver final : public SamplingDriver {
public:
    RaspiDriver(const OperatorModel& model, DriverOptions options);
    [[nodiscard]] DriverKind kind() const noexcept override { return DriverKind::raspi; }

    /// S_nu = (1/eps) sum_k gamma_k(z_nu) (B_k f_k - B_nu f_k) for any nu in
    /// the pool or in the set. Uses the caches for pool members; set members
    /// are evaluated directly without touching the caches.
    [[nodiscard]] std::vector<double> residual(const MultiIndex& nu) const;
    /// Cached gamma(z_nu) for a pool member.
    [[nodiscard]] std::span<const double> cached_gamma(const MultiIndex& nu) const;

protected:
    MultiIndex select(double& criterion) override;
    void promoted(const MultiIndex& nu, std::span<const MultiIndex> fresh) override;

private:
    struct Candidate {
        std::vector<double> z;
        std::vector<double> gamma;
        std::vector<std::vector<double>> cross;  // B_nu f_k, k < cross.size()
    };

    [[nodiscard]] std::vector<double> candidate_residual(const Candidate& c) const;
    // Brings gamma and cross products up to the current set; returns operator applications.
    std::size_t refresh_candidate(Candidate& c, bool fresh, std::span<const double> gamma_at_new) const;

    const OperatorModel& op_model_;
    std::vector<std::vector<double>> node_bf_;  // B_k f_k
    std::map<MultiIndex, Candidate> candidates_;
    bool warned_flat_ = false;
};

class AnisotropicMcDriver final : public SamplingDriver {
public:
    AnisotropicMcDriver(const Model& model, DriverOptions options);
    [[nodiscard]] DriverKind kind() const noexcept override { return DriverKind::amc; }

protected:
    MultiIndex select(double& criterion) override;

private:
    std::mt19937_64 rng_;
};

/// RASPI requires an OperatorModel; throws Error(config) otherwise.
[[nodiscard]] std::unique_ptr<SamplingDriver> make_driver(DriverKind kind, const Model& model,
                                                          DriverOptions options);

}  // namespace kuq
