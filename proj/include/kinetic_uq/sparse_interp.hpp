// SPDX-License-Identifier: Apache-2.0
//
// Hierarchical sparse polynomial interpolation on Leja nodes.
//
// For a monotone downward closed sequence nu_1, nu_2, ... the collocation
// matrix [H_{nu_l}(z_{nu_k})]_{k,l} is unit lower triangular, so the
// interpolant is grown one surplus at a time and its inverse one row at a
// time:
//
//   alpha_{nu_n} = f_{nu_n} - I_{n-1}(z_{nu_n})
//   Hinv_n = [ Hinv_{n-1}               0 ]
//            [ -gamma_{n-1}(z_{nu_n})   1 ]
//
// with gamma_n(z) = [H_{nu_1}(z) .. H_{nu_n}(z)] * Hinv_n the weights that
// express I_n(z) as a combination of the node data.
#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <vector>

#include "kinetic_uq/leja.hpp"
#include "kinetic_uq/multi_index.hpp"

namespace kuq {

class HierarchicalInterpolant {
public:
    /// `d_max` is the parameter dimension; `payload_size` the length M of
    /// each node datum / surplus.
    HierarchicalInterpolant(std::size_t d_max, std::size_t payload_size);

    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] std::size_t d_max() const noexcept { return d_max_; }
    [[nodiscard]] std::size_t payload_size() const noexcept { return payload_size_; }
    [[nodiscard]] std::span<const MultiIndex> indices() const noexcept { return indices_; }
    [[nodiscard]] bool contains(const MultiIndex& nu) const { return lookup_.contains(nu); }
    [[nodiscard]] const UnivariateBasis& basis() const noexcept { return basis_; }

    /// z_nu = (beta_{nu_j})_j as a d_max vector. Extends the Leja sequence
    /// on demand.
    [[nodiscard]] std::vector<double> node_of(const MultiIndex& nu);
    /// Same, without extension; throws if the sequence is too short.
    [[nodiscard]] std::vector<double> node_of(const MultiIndex& nu) const;

    /// H_nu(z) = prod_{j in supp nu} l_{nu_j}(z_j). Coordinates beyond z.size()
    /// are taken as 0.
    [[nodiscard]] double eval_H(const MultiIndex& nu, std::span<const double> z) const;

    /// Adds nu with model data f(z_nu). Throws Error(not_admissible) unless
    /// the enlarged set is downward closed and nu is new.
    void add_node(const MultiIndex& nu, std::span<const double> data);

    /// I(z) = sum_k alpha_k H_{nu_k}(z). Zero for the empty interpolant.
    void evaluate(std::span<const double> z, std::span<double> out) const;
    [[nodiscard]] std::vector<double> evaluate(std::span<const double> z) const;

    /// [H_{nu_1}(z), .., H_{nu_n}(z)].
    [[nodiscard]] std::vector<double> basis_row(std::span<const double> z) const;
    /// gamma(z) = basis_row(z) * Hinv.
    [[nodiscard]] std::vector<double> gamma_weights(std::span<const double> z) const;
    /// Row-vector times the leading row.size() x row.size() block of the
    /// cached inverse; `row.size()` must not exceed size().
    [[nodiscard]] std::vector<double> times_inverse(std::span<const double> row) const;

    /// Surplus alpha_k of the k-th selected index.
    [[nodiscard]] std::span<const double> alpha(std::size_t k) const;
    /// Row k of the cached inverse (length k + 1, lower triangular part).
    [[nodiscard]] std::span<const double> inverse_row(std::size_t k) const;
    /// Dense n x n row-major copy of the cached inverse.
    [[nodiscard]] std::vector<double> inverse_dense() const;

    /// prod_j ||l_{nu_j}||.
    [[nodiscard]] double tensor_norm(const MultiIndex& nu);
    [[nodiscard]] double tensor_norm(const MultiIndex& nu) const;

    /// Writes indices.csv, alphas.bin (row-major float64, little endian, n x M)
    /// and leja.csv into `dir`.
    void save(const std::filesystem::path& dir) const;
    static HierarchicalInterpolant load(const std::filesystem::path& dir);

private:
    void evaluate_rows(std::span<const double> z, std::span<double> h) const;

    std::size_t d_max_;
    std::size_t payload_size_;
    UnivariateBasis basis_;
    std::vector<MultiIndex> indices_;
    std::set<MultiIndex> lookup_;
    std::vector<double> alphas_;   // n x M
    std::vector<double> inverse_;  // packed lower triangle, row k at k(k+1)/2
};

/// Incremental weight update after nu_n joins the set: given the old weights
/// gamma_{n-1}(z), h = H_{nu_n}(z) and gamma_{n-1}(z_{nu_n}), returns
/// [gamma_{n-1}(z) - h * gamma_{n-1}(z_{nu_n}), h].
[[nodiscard]] std::vector<double> extend_gamma(std::span<const double> old_gamma, double h_new,
                                               std::span<const double> gamma_at_new_node);

}  // namespace kuq
