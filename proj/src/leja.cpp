// SPDX-License-Identifier: Apache-2.0
#include "kinetic_uq/leja.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "kinetic_uq/error.hpp"

namespace kuq {
namespace {

constexpr double tie_tolerance = 1e-13;

double log_product(std::span<const double> nodes, double beta) {
    double s = 0.0;
    for (double b : nodes) s += std::log(std::abs(beta - b));
    return s;
}

// Derivative of the log-product; strictly decreasing between consecutive nodes.
double log_product_slope(std::span<const double> nodes, double beta) {
    double s = 0.0;
    for (double b : nodes) s += 1.0 / (beta - b);
    return s;
}

}  // namespace

LejaSequence::LejaSequence(std::size_t search_points) : search_points_(search_points) {
    if (search_points < 3) throw Error(ErrorCode::invalid_argument, "Leja search grid needs >= 3 points");
    points_.push_back(0.0);
}

void LejaSequence::extend(std::size_t depth) {
    points_.reserve(depth);
    while (points_.size() < depth) points_.push_back(next_point());
}

double LejaSequence::next_point() const {
    const std::span<const double> nodes(points_);
    const std::size_t g = search_points_;
    const double h = 2.0 / static_cast<double>(g - 1);
    std::vector<double> values(g);
    for (std::size_t i = 0; i < g; ++i) {
        values[i] = log_product(nodes, -1.0 + h * static_cast<double>(i));
    }

    std::vector<double> sorted(points_);
    std::sort(sorted.begin(), sorted.end());

    double best_beta = 0.0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g; ++i) {
        const double v = values[i];
        if (!std::isfinite(v)) continue;
        if (i > 0 && values[i - 1] > v) continue;
        if (i + 1 < g && values[i + 1] > v) continue;

        // Bracket around the grid maximum, clipped to the gap between nodes.
        const double gi = -1.0 + h * static_cast<double>(i);
        double lo = std::max(-1.0, gi - h);
        double hi = std::min(1.0, gi + h);
        auto above = std::upper_bound(sorted.begin(), sorted.end(), gi);
        if (above != sorted.end()) hi = std::min(hi, *above);
        if (above != sorted.begin()) lo = std::max(lo, *std::prev(above));
        const bool lo_is_node = std::find(sorted.begin(), sorted.end(), lo) != sorted.end();
        const bool hi_is_node = std::find(sorted.begin(), sorted.end(), hi) != sorted.end();

        double beta;
        if (!lo_is_node && log_product_slope(nodes, lo) <= 0.0) {
            beta = lo;
        } else if (!hi_is_node && log_product_slope(nodes, hi) >= 0.0) {
            beta = hi;
        } else {
            double a = lo;
            double b = hi;
            for (int it = 0; it < 200 && b - a > 0.0; ++it) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                if (log_product_slope(nodes, mid) > 0.0) a = mid; else b = mid;
            }
            beta = log_product(nodes, a) >= log_product(nodes, b) ? a : b;
        }

        const double value = log_product(nodes, beta);
        const double diff = value - best_value;
        if (diff > tie_tolerance || (std::abs(diff) <= tie_tolerance && beta > best_beta)) {
            best_value = value;
            best_beta = beta;
        }
    }
    if (!std::isfinite(best_value)) {
        throw Error(ErrorCode::internal, "Leja search found no admissible point");
    }
    return best_beta;
}

UnivariateBasis::UnivariateBasis(LejaSequence sequence) : sequence_(std::move(sequence)) {
    extend(sequence_.size());
}

void UnivariateBasis::extend(std::size_t depth) {
    sequence_.extend(depth);
    const auto pts = sequence_.points();
    for (std::size_t k = inv_denominators_.size(); k < pts.size(); ++k) {
        double den = 1.0;
        for (std::size_t m = 0; m < k; ++m) den *= pts[k] - pts[m];
        inv_denominators_.push_back(1.0 / den);

        const auto rule = gauss_legendre(k + 2);
        double s = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double l = eval(k, rule.nodes[q]);
            s += rule.weights[q] * l * l;
        }
        norms_.push_back(std::sqrt(0.5 * s));
    }
}

double UnivariateBasis::eval(std::size_t k, double beta) const {
    const auto pts = sequence_.points();
    double p = inv_denominators_.at(k);
    for (std::size_t m = 0; m < k; ++m) p *= beta - pts[m];
    return p;
}

void UnivariateBasis::eval_all(double beta, std::span<double> out) const {
    if (out.size() > depth()) throw Error(ErrorCode::invalid_argument, "basis depth exceeded");
    const auto pts = sequence_.points();
    double p = 1.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = p * inv_denominators_[k];
        p *= beta - pts[k];
    }
}

double lebesgue_constant(const LejaSequence& seq, std::size_t k, std::size_t probe_resolution) {
    if (k + 1 > seq.size()) throw Error(ErrorCode::invalid_argument, "Leja sequence too short");
    if (probe_resolution < 2) throw Error(ErrorCode::invalid_argument, "probe resolution must be >= 2");
    const auto pts = seq.points().first(k + 1);
    double sup = 0.0;
    for (std::size_t i = 0; i < probe_resolution; ++i) {
        const double beta = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(probe_resolution - 1);
        double sum = 0.0;
        for (std::size_t m = 0; m <= k; ++m) {
            double l = 1.0;
            for (std::size_t q = 0; q <= k; ++q) {
                if (q != m) l *= (beta - pts[q]) / (pts[m] - pts[q]);
            }
            sum += std::abs(l);
        }
        sup = std::max(sup, sum);
    }
    return sup;
}

GaussLegendreRule gauss_legendre(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::invalid_argument, "Gauss-Legendre rule needs n >= 1");
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(n), &gsl_integration_glfixed_table_free);
    if (!table) throw Error(ErrorCode::internal, "GSL failed to allocate a Gauss-Legendre table");
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_integration_glfixed_point(-1.0, 1.0, i, &rule.nodes[i], &rule.weights[i], table.get());
    }
    return rule;
}

}  // namespace kuq
