// SPDX-License-Identifier: Apache-2.0
#include "kinetic_uq/parametric_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kinetic_uq/error.hpp"

namespace kuq {

std::string_view to_string(FieldFamily f) {
    switch (f) {
        case FieldFamily::exp2: return "exp2";
        case FieldFamily::invsq: return "invsq";
        case FieldFamily::inv: return "inv";
        case FieldFamily::custom: return "custom";
    }
    return "unknown";
}

FieldFamily parse_field_family(std::string_view s) {
    if (s == "exp2" || s == "a") return FieldFamily::exp2;
    if (s == "invsq" || s == "b") return FieldFamily::invsq;
    if (s == "inv" || s == "c") return FieldFamily::inv;
    if (s == "custom") return FieldFamily::custom;
    throw Error(ErrorCode::config, "unknown field family '" + std::string(s) + "' (expected exp2, invsq or inv)");
}

ParametricField::ParametricField(FieldFamily family, std::vector<double> amplitudes, bool time_dependent)
    : family_(family), amplitudes_(std::move(amplitudes)), time_dependent_(time_dependent) {}

ParametricField ParametricField::family(FieldFamily family, std::size_t dim, bool time_dependent) {
    std::vector<double> a(dim);
    for (std::size_t j = 1; j <= dim; ++j) {
        const double dj = static_cast<double>(j);
        switch (family) {
            case FieldFamily::exp2: a[j - 1] = std::ldexp(1.0, -static_cast<int>(j)); break;
            case FieldFamily::invsq: a[j - 1] = 1.0 / (dj * dj); break;
            case FieldFamily::inv: a[j - 1] = 1.0 / dj; break;
            case FieldFamily::custom:
                throw Error(ErrorCode::invalid_argument, "custom fields need an amplitude table");
        }
    }
    return ParametricField(family, std::move(a), time_dependent);
}

ParametricField ParametricField::from_amplitudes(std::vector<double> amplitudes, bool time_dependent) {
    return ParametricField(FieldFamily::custom, std::move(amplitudes), time_dependent);
}

double ParametricField::E_mean(double x) const { return 0.5 * std::sin(x); }

double ParametricField::E_component(std::size_t j, double t, double x) const {
    const double a = amplitude(j);
    const double c = std::cos(static_cast<double>(j) * x);
    if (!time_dependent_) return a * c;
    return a * (c + 1.0 / ((1.0 + t) * (1.0 + t)));
}

double ParametricField::E(double t, double x, std::span<const double> z) const {
    double e = E_mean(x);
    const std::size_t n = std::min(z.size(), dim());
    for (std::size_t j = 1; j <= n; ++j) {
        if (z[j - 1] != 0.0) e += z[j - 1] * E_component(j, t, x);
    }
    return e;
}

double ParametricField::E_inf(double x, std::span<const double> z) const {
    double e = E_mean(x);
    const std::size_t n = std::min(z.size(), dim());
    for (std::size_t j = 1; j <= n; ++j) e += z[j - 1] * amplitudes_[j - 1] * std::cos(static_cast<double>(j) * x);
    return e;
}

double ParametricField::phi_inf(double x, std::span<const double> z) const {
    double p = 0.5 * std::cos(x);
    const std::size_t n = std::min(z.size(), dim());
    for (std::size_t j = 1; j <= n; ++j) {
        const double dj = static_cast<double>(j);
        p -= z[j - 1] * amplitudes_[j - 1] * std::sin(dj * x) / dj;
    }
    return p;
}

void ParametricField::E_on_grid(double t, std::span<const double> xs, std::span<const double> z,
                                std::span<double> out) const {
    if (out.size() != xs.size()) throw Error(ErrorCode::invalid_argument, "E_on_grid size mismatch");
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = E(t, xs[i], z);
}

ComponentBounds ParametricField::component_norms() const {
    ComponentBounds out;
    out.bounds.resize(dim());
    // |E_j| <= a_j (1 + time term), |d/dx E_j| <= a_j j.
    const double time_term = time_dependent_ ? 1.0 : 0.0;
    for (std::size_t j = 1; j <= dim(); ++j) {
        out.bounds[j - 1] = amplitudes_[j - 1] * (1.0 + time_term + static_cast<double>(j));
    }
    switch (family_) {
        case FieldFamily::exp2: out.summable = true; break;
        case FieldFamily::invsq:  // (1 + j) / j^2 ~ 1/j
        case FieldFamily::inv: out.summable = false; break;
        case FieldFamily::custom: out.summable = true; break;  // finite table
    }
    return out;
}

}  // namespace kuq
