// SPDX-License-Identifier: Apache-2.0
//
// Affine parametric electric fields on the periodic interval [0, 2 pi):
//
//   E(t, x, z) = sin(x) / 2 + sum_{j=1}^{d} z_j E_j(t, x),
//   E_j(t, x) = a_j cos(j x)                      (time independent)
//   E_j(t, x) = a_j (cos(j x) + (1 + t)^{-2})     (time dependent)
//
// with E = -d/dx phi. Both variants share the long-time limit E_inf and the
// potential phi_inf(x, z) = cos(x) / 2 - sum_j z_j a_j sin(j x) / j.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kuq {

enum class FieldFamily {
    exp2,    ///< a_j = 2^{-j}
    invsq,   ///< a_j = j^{-2}
    inv,     ///< a_j = j^{-1}
    custom,  ///< user-supplied amplitude table
};

[[nodiscard]] std::string_view to_string(FieldFamily f);
[[nodiscard]] FieldFamily parse_field_family(std::string_view s);

/// Analytic sup bounds on the field components, C_j >= sup_t ||E_j(t)||_{W^{1,inf}}
/// (value plus derivative), with a flag for whether sum_j C_j is finite in
/// the untruncated family.
struct ComponentBounds {
    std::vector<double> bounds;
    bool summable = true;
};

class ParametricField {
public:
    static ParametricField family(FieldFamily family, std::size_t dim, bool time_dependent);
    /// Custom field with E_j = amplitudes[j-1] * cos(j x).
    static ParametricField from_amplitudes(std::vector<double> amplitudes, bool time_dependent);

    [[nodiscard]] FieldFamily family() const noexcept { return family_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] bool time_dependent() const noexcept { return time_dependent_; }
    [[nodiscard]] double amplitude(std::size_t j) const { return amplitudes_.at(j - 1); }

    /// Parameters beyond z.size() are 0; entries beyond dim() are ignored.
    [[nodiscard]] double E(double t, double x, std::span<const double> z) const;
    [[nodiscard]] double E_mean(double x) const;
    [[nodiscard]] double E_component(std::size_t j, double t, double x) const;
    [[nodiscard]] double E_inf(double x, std::span<const double> z) const;
    [[nodiscard]] double phi_inf(double x, std::span<const double> z) const;

    /// E(t, xs[i], z) for every i.
    void E_on_grid(double t, std::span<const double> xs, std::span<const double> z,
                   std::span<double> out) const;

    [[nodiscard]] ComponentBounds component_norms() const;

private:
    ParametricField(FieldFamily family, std::vector<double> amplitudes, bool time_dependent);

    FieldFamily family_;
    std::vector<double> amplitudes_;
    bool time_dependent_;
};

}  // namespace kuq
