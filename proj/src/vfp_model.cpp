// SPDX-License-Identifier: Apache-2.0
#include "kinetic_uq/model.hpp"

#include <algorithm>

#include "kinetic_uq/error.hpp"

namespace kuq {

VfpModel::VfpModel(PhaseGrid grid, ParametricField field, double final_time, SolverOptions options, NormKind norm)
    : solver_(grid, std::move(field), options), final_time_(final_time), norm_(norm) {
    if (!(final_time >= 0.0)) throw Error(ErrorCode::invalid_argument, "final time must be nonnegative");
}

double VfpModel::discrete_final_time() const noexcept {
    return static_cast<double>(solver_.step_count(final_time_)) * solver_.grid().dt();
}

SolveResult VfpModel::solve_with_history(std::span<const double> z) const {
    const auto f0 = solver_.initial_data(z);
    return solver_.solve_to_time(f0, z, final_time_);
}

std::vector<double> VfpModel::solve(std::span<const double> z) const {
    return solve_with_history(z).final_state;
}

double VfpModel::norm(std::span<const double> payload) const {
    return discrete_norm(solver_.grid(), payload, norm_);
}

void VfpModel::apply_operator(std::span<const double> z, std::span<const double> f, std::span<double> out) const {
    const PhaseField b = collision_operator_apply(solver_.grid(), solver_.field(), z, discrete_final_time(), f);
    std::copy(b.values.begin(), b.values.end(), out.begin());
}

}  // namespace kuq
