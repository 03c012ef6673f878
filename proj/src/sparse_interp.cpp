// SPDX-License-Identifier: Apache-2.0
#include "kinetic_uq/sparse_interp.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "kinetic_uq/error.hpp"
#include "report_io.hpp"

namespace kuq {

HierarchicalInterpolant::HierarchicalInterpolant(std::size_t d_max, std::size_t payload_size)
    : d_max_(d_max), payload_size_(payload_size) {
    if (d_max == 0) throw Error(ErrorCode::invalid_argument, "interpolant needs d_max >= 1");
    if (payload_size == 0) throw Error(ErrorCode::invalid_argument, "interpolant needs payload size >= 1");
}

std::vector<double> HierarchicalInterpolant::node_of(const MultiIndex& nu) {
    if (nu.max_entry() + 1 > basis_.depth()) basis_.extend(nu.max_entry() + 1);
    return std::as_const(*this).node_of(nu);
}

std::vector<double> HierarchicalInterpolant::node_of(const MultiIndex& nu) const {
    if (nu.max_dim() > d_max_) {
        throw Error(ErrorCode::invalid_argument, "index '" + nu.to_string() + "' exceeds d_max");
    }
    std::vector<double> z(d_max_, basis_.point(0));
    for (const auto& [dim, value] : nu.entries()) z[dim - 1] = basis_.point(value);
    return z;
}

double HierarchicalInterpolant::eval_H(const MultiIndex& nu, std::span<const double> z) const {
    double h = 1.0;
    for (const auto& [dim, value] : nu.entries()) {
        const double zj = dim <= z.size() ? z[dim - 1] : 0.0;
        h *= basis_.eval(value, zj);
        if (h == 0.0) break;
    }
    return h;
}

void HierarchicalInterpolant::evaluate_rows(std::span<const double> z, std::span<double> h) const {
    for (std::size_t k = 0; k < indices_.size(); ++k) h[k] = eval_H(indices_[k], z);
}

std::vector<double> HierarchicalInterpolant::basis_row(std::span<const double> z) const {
    std::vector<double> h(indices_.size());
    evaluate_rows(z, h);
    return h;
}

std::vector<double> HierarchicalInterpolant::times_inverse(std::span<const double> row) const {
    const std::size_t n = row.size();
    if (n > indices_.size()) throw Error(ErrorCode::invalid_argument, "row longer than interpolant size");
    std::vector<double> out(n, 0.0);
    // out_l = sum_{k >= l} row_k * Hinv(k, l)
    for (std::size_t k = 0; k < n; ++k) {
        const double r = row[k];
        if (r == 0.0) continue;
        const double* inv_row = inverse_.data() + k * (k + 1) / 2;
        for (std::size_t l = 0; l <= k; ++l) out[l] += r * inv_row[l];
    }
    return out;
}

std::vector<double> HierarchicalInterpolant::gamma_weights(std::span<const double> z) const {
    return times_inverse(basis_row(z));
}

void HierarchicalInterpolant::add_node(const MultiIndex& nu, std::span<const double> data) {
    if (data.size() != payload_size_) {
        throw Error(ErrorCode::invalid_argument, "node data has length " + std::to_string(data.size()) +
                                                     ", expected " + std::to_string(payload_size_));
    }
    if (lookup_.contains(nu)) {
        throw Error(ErrorCode::not_admissible, "index '" + nu.to_string() + "' already present");
    }
    for (const auto& [dim, value] : nu.entries()) {
        if (!lookup_.contains(nu.decremented(dim))) {
            throw Error(ErrorCode::not_admissible,
                        "adding '" + nu.to_string() + "' breaks downward closedness");
        }
    }
    if (nu.max_dim() > d_max_) {
        throw Error(ErrorCode::not_admissible, "index '" + nu.to_string() + "' exceeds d_max");
    }

    const std::vector<double> z = node_of(nu);
    const std::size_t n = indices_.size();
    std::vector<double> h(n);
    evaluate_rows(z, h);

    // alpha = f - I_{n-1}(z_nu)
    std::vector<double> alpha(data.begin(), data.end());
    for (std::size_t k = 0; k < n; ++k) {
        if (h[k] == 0.0) continue;
        const double* a = alphas_.data() + k * payload_size_;
        for (std::size_t i = 0; i < payload_size_; ++i) alpha[i] -= h[k] * a[i];
    }

    // New inverse row [-gamma_{n-1}(z_nu), 1].
    std::vector<double> gamma = times_inverse(h);
    for (double& g : gamma) g = -g;
    gamma.push_back(1.0);

    indices_.push_back(nu);
    lookup_.insert(nu);
    alphas_.insert(alphas_.end(), alpha.begin(), alpha.end());
    inverse_.insert(inverse_.end(), gamma.begin(), gamma.end());
}

void HierarchicalInterpolant::evaluate(std::span<const double> z, std::span<double> out) const {
    if (out.size() != payload_size_) throw Error(ErrorCode::invalid_argument, "output length mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        const double h = eval_H(indices_[k], z);
        if (h == 0.0) continue;
        const double* a = alphas_.data() + k * payload_size_;
        for (std::size_t i = 0; i < payload_size_; ++i) out[i] += h * a[i];
    }
}

std::vector<double> HierarchicalInterpolant::evaluate(std::span<const double> z) const {
    std::vector<double> out(payload_size_);
    evaluate(z, out);
    return out;
}

std::span<const double> HierarchicalInterpolant::alpha(std::size_t k) const {
    if (k >= indices_.size()) throw Error(ErrorCode::invalid_argument, "surplus index out of range");
    return std::span<const double>(alphas_).subspan(k * payload_size_, payload_size_);
}

std::span<const double> HierarchicalInterpolant::inverse_row(std::size_t k) const {
    if (k >= indices_.size()) throw Error(ErrorCode::invalid_argument, "inverse row out of range");
    return std::span<const double>(inverse_).subspan(k * (k + 1) / 2, k + 1);
}

std::vector<double> HierarchicalInterpolant::inverse_dense() const {
    const std::size_t n = indices_.size();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        auto row = inverse_row(k);
        std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(k * n));
    }
    return out;
}

double HierarchicalInterpolant::tensor_norm(const MultiIndex& nu) {
    if (nu.max_entry() + 1 > basis_.depth()) basis_.extend(nu.max_entry() + 1);
    return std::as_const(*this).tensor_norm(nu);
}

double HierarchicalInterpolant::tensor_norm(const MultiIndex& nu) const {
    double p = 1.0;
    for (const auto& [dim, value] : nu.entries()) p *= basis_.norm(value);
    return p;
}

void HierarchicalInterpolant::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "indices.csv");
        if (!out) throw Error(ErrorCode::io, "cannot write " + (dir / "indices.csv").string());
        out << "# d_max=" << d_max_ << ",payload_size=" << payload_size_ << "\n";
        out << "k,index\n";
        for (std::size_t k = 0; k < indices_.size(); ++k) {
            out << k << ",\"" << indices_[k].to_string() << "\"\n";
        }
    }
    {
        std::ofstream out(dir / "leja.csv");
        if (!out) throw Error(ErrorCode::io, "cannot write " + (dir / "leja.csv").string());
        out << "k,beta_k\n";
        const auto pts = basis_.sequence().points();
        for (std::size_t k = 0; k < pts.size(); ++k) out << k << ',' << detail::format_double(pts[k]) << '\n';
    }
    detail::write_float64_le(dir / "alphas.bin", alphas_);
}

HierarchicalInterpolant HierarchicalInterpolant::load(const std::filesystem::path& dir) {
    std::ifstream in(dir / "indices.csv");
    if (!in) throw Error(ErrorCode::io, "cannot read " + (dir / "indices.csv").string());
    std::string line;
    std::size_t d_max = 0;
    std::size_t payload = 0;
    std::vector<MultiIndex> indices;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# d_max=", 0) == 0) {
            if (std::sscanf(line.c_str(), "# d_max=%zu,payload_size=%zu", &d_max, &payload) != 2) {
                throw Error(ErrorCode::io, "malformed header in indices.csv");
            }
            continue;
        }
        if (line[0] == '#' || line.rfind("k,", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorCode::io, "malformed row in indices.csv: " + line);
        indices.push_back(MultiIndex::parse(std::string_view(line).substr(comma + 1)));
    }
    if (d_max == 0 || payload == 0) throw Error(ErrorCode::io, "indices.csv lacks the d_max/payload header");

    const std::vector<double> alphas = detail::read_float64_le(dir / "alphas.bin");
    if (alphas.size() != indices.size() * payload) {
        throw Error(ErrorCode::io, "alphas.bin size does not match indices.csv");
    }

    HierarchicalInterpolant interp(d_max, payload);
    // Replay with data reconstructed from the surpluses: f_k = I_{k-1}(z_k) + alpha_k.
    std::vector<double> data(payload);
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const auto z = interp.node_of(indices[k]);
        interp.evaluate(z, data);
        for (std::size_t i = 0; i < payload; ++i) data[i] += alphas[k * payload + i];
        interp.add_node(indices[k], data);
        std::copy(alphas.begin() + static_cast<std::ptrdiff_t>(k * payload),
                  alphas.begin() + static_cast<std::ptrdiff_t>((k + 1) * payload),
                  interp.alphas_.begin() + static_cast<std::ptrdiff_t>(k * payload));
    }
    return interp;
}

std::vector<double> extend_gamma(std::span<const double> old_gamma, double h_new,
                                 std::span<const double> gamma_at_new_node) {
    if (old_gamma.size() != gamma_at_new_node.size()) {
        throw Error(ErrorCode::invalid_argument, "gamma length mismatch");
    }
    std::vector<double> out(old_gamma.size() + 1);
    for (std::size_t k = 0; k < old_gamma.size(); ++k) out[k] = old_gamma[k] - h_new * gamma_at_new_node[k];
    out.back() = h_new;
    return out;
}

}  // namespace kuq
