// SPDX-License-Identifier: Apache-2.0
//
// Univariate Leja points on [-1, 1] and the hierarchical Lagrange basis built
// on them.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kuq {

/// Nested Leja sequence starting at 0. Each new point maximizes the product
/// of distances to the previous points; the argmax is located on a uniform
/// search grid and then polished to machine precision. Ties (values equal to
/// a relative 1e-13) go to the larger point.
class LejaSequence {
public:
    static constexpr std::size_t default_search_points = 20001;

    explicit LejaSequence(std::size_t search_points = default_search_points);

    /// Extends to at least `depth` points. Prefix-stable.
    void extend(std::size_t depth);

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
    [[nodiscard]] double operator[](std::size_t k) const { return points_.at(k); }
    [[nodiscard]] std::size_t search_points() const noexcept { return search_points_; }

private:
    double next_point() const;

    std::size_t search_points_;
    std::vector<double> points_;
};

/// Hierarchical Lagrange polynomials l_k on a Leja sequence:
/// l_0 = 1, l_k(b) = prod_{m<k} (b - b_m) / (b_k - b_m).
class UnivariateBasis {
public:
    explicit UnivariateBasis(LejaSequence sequence = LejaSequence{});

    /// Grows the underlying sequence (and cached denominators) to `depth`.
    void extend(std::size_t depth);

    [[nodiscard]] std::size_t depth() const noexcept { return sequence_.size(); }
    [[nodiscard]] const LejaSequence& sequence() const noexcept { return sequence_; }
    [[nodiscard]] double point(std::size_t k) const { return sequence_[k]; }

    /// l_k(beta). Requires k < depth().
    [[nodiscard]] double eval(std::size_t k, double beta) const;
    /// Writes l_0(beta) .. l_{out.size()-1}(beta). Requires out.size() <= depth().
    void eval_all(double beta, std::span<double> out) const;

    /// ||l_k|| in L^2([-1,1], dz/2). Gauss-Legendre with k + 2 nodes,
    /// computed when the basis is extended.
    [[nodiscard]] double norm(std::size_t k) const { return norms_.at(k); }

private:
    LejaSequence sequence_;
    std::vector<double> inv_denominators_;
    std::vector<double> norms_;
};

/// Sup over a uniform probe grid of sum_{m<=k} |L_m(beta)|, where L_m are the
/// standard Lagrange cardinal functions on the first k + 1 Leja points.
[[nodiscard]] double lebesgue_constant(const LejaSequence& seq, std::size_t k,
                                       std::size_t probe_resolution);

/// Gauss-Legendre nodes and weights on [-1, 1] (weights sum to 2).
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
[[nodiscard]] GaussLegendreRule gauss_legendre(std::size_t n);

}  // namespace kuq
