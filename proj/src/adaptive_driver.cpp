// SPDX-License-Identifier: Apache-2.0
#include "kinetic_uq/adaptive_driver.hpp"

#include <algorithm>
#include <chrono>
#include <iterator>
#include <string>

#include "kinetic_uq/error.hpp"
#include "log.hpp"
#include "parallel.hpp"

namespace kuq {

std::string_view to_string(DriverKind k) {
    switch (k) {
        case DriverKind::aspi: return "aspi";
        case DriverKind::raspi: return "raspi";
        case DriverKind::amc: return "amc";
    }
    return "?";
}

DriverKind parse_driver_kind(std::string_view s) {
    if (s == "aspi") return DriverKind::aspi;
    if (s == "raspi") return DriverKind::raspi;
    if (s == "amc") return DriverKind::amc;
    throw Error(ErrorCode::config, "unknown driver kind '" + std::string(s) + "' (expected aspi, raspi or amc)");
}

namespace {

std::uint32_t resolve_dim(const Model& model, const DriverOptions& options) {
    const std::uint32_t d = options.d_max != 0 ? options.d_max : static_cast<std::uint32_t>(model.parameter_dim());
    if (d == 0) throw Error(ErrorCode::invalid_argument, "driver needs a parameter dimension >= 1");
    return d;
}

std::vector<double> checked_solve(const Model& model, const MultiIndex& nu, std::span<const double> z) {
    try {
        auto f = model.solve(z);
        if (f.size() != model.payload_size()) {
            throw Error(ErrorCode::internal, "model returned " + std::to_string(f.size()) + " values");
        }
        return f;
    } catch (const Error& e) {
        throw Error(e.code(), "model solve failed at index '" + nu.to_string() + "': " + e.what());
    } catch (const std::exception& e) {
        throw Error(ErrorCode::solver, "model solve failed at index '" + nu.to_string() + "': " + e.what());
    }
}

// First strictly largest value in the given order.
template <class It>
std::size_t argmax(It first, It last) {
    std::size_t best = 0;
    std::size_t k = 0;
    double best_value = -1.0;
    for (It it = first; it != last; ++it, ++k) {
        if (*it > best_value) {
            best_value = *it;
            best = k;
        }
    }
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// SamplingDriver

SamplingDriver::SamplingDriver(const Model& model, DriverOptions options)
    : model_(model),
      options_(options),
      interp_(resolve_dim(model, options), model.payload_size()),
      set_(resolve_dim(model, options)) {
    options_.d_max = resolve_dim(model, options);
}

std::vector<double> SamplingDriver::solve_counted(const MultiIndex& nu) {
    auto f = checked_solve(model_, nu, interp_.node_of(nu));
    ++counters_.model_solves;
    return f;
}

std::vector<double> SamplingDriver::obtain(const MultiIndex& nu) { return solve_counted(nu); }

double SamplingDriver::surplus_criterion(const MultiIndex& nu, std::span<const double> data) const {
    const auto z = interp_.node_of(nu);
    std::vector<double> alpha = interp_.evaluate(z);
    for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = data[i] - alpha[i];
    return model_.norm(alpha) * interp_.tensor_norm(nu);
}

const StepRecord& SamplingDriver::step() {
    const auto start = std::chrono::steady_clock::now();
    MultiIndex nu;
    double criterion = 0.0;
    const bool first = interp_.size() == 0;
    if (!first) {
        if (set_.pool().empty()) throw Error(ErrorCode::not_admissible, "candidate pool is empty");
        nu = select(criterion);
    }
    // Make sure the Leja sequence and norms cover nu before obtaining data.
    (void)interp_.node_of(nu);
    (void)interp_.tensor_norm(nu);

    std::vector<double> f = obtain(nu);
    if (first) criterion = model_.norm(f);
    interp_.add_node(nu, f);
    counters_.vector_ops += interp_.size();
    node_data_.push_back(std::move(f));

    std::vector<MultiIndex> fresh;
    if (first) {
        fresh.assign(set_.pool().begin(), set_.pool().end());
    } else {
        fresh = set_.add(nu);
    }
    promoted(nu, fresh);

    StepRecord rec;
    rec.step = interp_.size();
    rec.selected = nu;
    rec.criterion = criterion;
    rec.totals = counters_;
    rec.pool_size = set_.pool().size();
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    history_.push_back(std::move(rec));
    detail::logger().debug("{} step {}: selected '{}' criterion {:.6e} pool {}", to_string(kind()),
                           history_.back().step, nu.to_string(), criterion, history_.back().pool_size);
    return history_.back();
}

void SamplingDriver::run(std::size_t budget, const std::function<void(const StepRecord&)>& on_step) {
    while (interp_.size() < budget) {
        if (interp_.size() > 0 && set_.pool().empty()) {
            detail::logger().warn("candidate pool exhausted after {} nodes", interp_.size());
            break;
        }
        const StepRecord& rec = step();
        if (on_step) on_step(rec);
    }
}

// ---------------------------------------------------------------------------
// ASPI

AspiDriver::AspiDriver(const Model& model, DriverOptions options) : SamplingDriver(model, options) {}

MultiIndex AspiDriver::select(double& criterion) {
    const auto& pool = set_.pool();
    std::vector<MultiIndex> missing;
    for (const auto& nu : pool) {
        if (!candidate_data_.contains(nu)) missing.push_back(nu);
    }
    std::vector<std::vector<double>> z(missing.size());
    for (std::size_t i = 0; i < missing.size(); ++i) z[i] = interp_.node_of(missing[i]);
    std::vector<std::vector<double>> solved(missing.size());
    detail::parallel_for(missing.size(), [&](std::size_t i) { solved[i] = checked_solve(model_, missing[i], z[i]); });
    counters_.model_solves += missing.size();
    for (std::size_t i = 0; i < missing.size(); ++i) candidate_data_.emplace(missing[i], std::move(solved[i]));

    std::vector<const MultiIndex*> order;
    order.reserve(pool.size());
    for (const auto& nu : pool) {
        order.push_back(&nu);
        (void)interp_.tensor_norm(nu);
    }
    std::vector<double> values(order.size());
    detail::parallel_for(order.size(), [&](std::size_t i) {
        values[i] = surplus_criterion(*order[i], candidate_data_.at(*order[i]));
    });
    counters_.vector_ops += order.size() * (interp_.size() + 1);

    const std::size_t best = argmax(values.begin(), values.end());
    criterion = values[best];
    return *order[best];
}

std::vector<double> AspiDriver::obtain(const MultiIndex& nu) {
    auto it = candidate_data_.find(nu);
    if (it == candidate_data_.end()) return solve_counted(nu);
    std::vector<double> f = std::move(it->second);
    candidate_data_.erase(it);
    return f;
}

// ---------------------------------------------------------------------------
// RASPI

RaspiDriver::RaspiDriver(const OperatorModel& model, DriverOptions options)
    : SamplingDriver(model, options), op_model_(model) {}

std::size_t RaspiDriver::refresh_candidate(Candidate& c, bool fresh, std::span<const double> gamma_at_new) const {
    const std::size_t n = interp_.size();
    const MultiIndex& newest = interp_.indices()[n - 1];
    const double h_new = interp_.eval_H(newest, c.z);
    if (fresh) {
        // gamma_n(z) = [H_{n-1}(z) Hinv_{n-1} - H_{nu_n}(z) gamma_{n-1}(z_{nu_n}), H_{nu_n}(z)]
        std::vector<double> row(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) row[k] = interp_.eval_H(interp_.indices()[k], c.z);
        c.gamma = extend_gamma(interp_.times_inverse(row), h_new, gamma_at_new);
    } else {
        c.gamma = extend_gamma(c.gamma, h_new, gamma_at_new);
    }
    if (!options_.cache_cross_products) return 0;
    std::size_t applies = 0;
    const std::size_t m = model_.payload_size();
    for (std::size_t k = c.cross.size(); k < n; ++k) {
        std::vector<double> out(m);
        op_model_.apply_operator(c.z, node_data_[k], out);
        c.cross.push_back(std::move(out));
        ++applies;
    }
    return applies;
}

std::vector<double> RaspiDriver::candidate_residual(const Candidate& c) const {
    const std::size_t m = model_.payload_size();
    const double inv_eps = 1.0 / op_model_.epsilon();
    std::vector<double> s(m, 0.0);
    if (options_.cache_cross_products) {
        for (std::size_t k = 0; k < c.gamma.size(); ++k) {
            const double g = c.gamma[k] * inv_eps;
            if (g == 0.0) continue;
            const auto& bk = node_bf_[k];
            const auto& cross = c.cross[k];
            for (std::size_t i = 0; i < m; ++i) s[i] += g * (bk[i] - cross[i]);
        }
        return s;
    }
    // Linearity route: sum_k gamma_k B_k f_k - B_nu (sum_k gamma_k f_k).
    std::vector<double> interp_value(m, 0.0);
    for (std::size_t k = 0; k < c.gamma.size(); ++k) {
        const double g = c.gamma[k];
        if (g == 0.0) continue;
        const auto& bk = node_bf_[k];
        const auto& fk = node_data_[k];
        for (std::size_t i = 0; i < m; ++i) {
            s[i] += g * bk[i];
            interp_value[i] += g * fk[i];
        }
    }
    std::vector<double> b(m);
    op_model_.apply_operator(c.z, interp_value, b);
    for (std::size_t i = 0; i < m; ++i) s[i] = inv_eps * (s[i] - b[i]);
    return s;
}

std::vector<double> RaspiDriver::residual(const MultiIndex& nu) const {
    if (auto it = candidates_.find(nu); it != candidates_.end()) return candidate_residual(it->second);
    if (!interp_.contains(nu) && !set_.pool().contains(nu)) {
        throw Error(ErrorCode::invalid_argument, "index '" + nu.to_string() + "' is neither selected nor a candidate");
    }
    Candidate c;
    c.z = interp_.node_of(nu);
    c.gamma = interp_.gamma_weights(c.z);
    if (options_.cache_cross_products) {
        for (const auto& fk : node_data_) {
            std::vector<double> out(model_.payload_size());
            op_model_.apply_operator(c.z, fk, out);
            c.cross.push_back(std::move(out));
        }
    }
    return candidate_residual(c);
}

std::span<const double> RaspiDriver::cached_gamma(const MultiIndex& nu) const {
    auto it = candidates_.find(nu);
    if (it == candidates_.end()) throw Error(ErrorCode::invalid_argument, "index '" + nu.to_string() + "' is not a candidate");
    return it->second.gamma;
}

void RaspiDriver::promoted(const MultiIndex& nu, std::span<const MultiIndex> fresh) {
    const std::size_t n = interp_.size();
    const std::size_t m = model_.payload_size();

    // gamma_{n-1}(z_{nu_n}); empty for the null index.
    std::vector<double> gamma_at_new;
    if (auto it = candidates_.find(nu); it != candidates_.end()) {
        gamma_at_new = std::move(it->second.gamma);
        candidates_.erase(it);
    } else if (n > 1) {
        throw Error(ErrorCode::internal, "promoted index '" + nu.to_string() + "' had no cached weights");
    }

    std::vector<double> bf(m);
    op_model_.apply_operator(interp_.node_of(nu), node_data_.back(), bf);
    node_bf_.push_back(std::move(bf));
    std::size_t applies = 1;

    for (const auto& cand : fresh) {
        Candidate c;
        c.z = interp_.node_of(cand);
        (void)interp_.tensor_norm(cand);
        candidates_.emplace(cand, std::move(c));
    }

    std::vector<std::pair<Candidate*, bool>> work;
    work.reserve(candidates_.size());
    for (auto& [idx, c] : candidates_) {
        work.emplace_back(&c, std::find(fresh.begin(), fresh.end(), idx) != fresh.end());
    }
    std::vector<std::size_t> counts(work.size(), 0);
    detail::parallel_for(work.size(), [&](std::size_t i) {
        counts[i] = refresh_candidate(*work[i].first, work[i].second, gamma_at_new);
    });
    for (std::size_t a : counts) applies += a;
    counters_.operator_applies += applies;
    counters_.vector_ops += work.size() * n;
}

MultiIndex RaspiDriver::select(double& criterion) {
    std::vector<std::pair<const MultiIndex*, const Candidate*>> order;
    order.reserve(candidates_.size());
    for (const auto& nu : set_.pool()) order.emplace_back(&nu, &candidates_.at(nu));

    std::vector<double> values(order.size());
    detail::parallel_for(order.size(), [&](std::size_t i) { values[i] = model_.norm(candidate_residual(*order[i].second)); });
    if (!options_.cache_cross_products) counters_.operator_applies += order.size();
    counters_.vector_ops += order.size() * interp_.size();

    if (!warned_flat_ && std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) {
        detail::logger().warn("all residuals vanish: z-independent operator; falling back to index order");
        warned_flat_ = true;
    }
    const std::size_t best = argmax(values.begin(), values.end());
    criterion = values[best];
    return *order[best].first;
}

// ---------------------------------------------------------------------------
// Anisotropic Monte Carlo

AnisotropicMcDriver::AnisotropicMcDriver(const Model& model, DriverOptions options)
    : SamplingDriver(model, options), rng_(options.seed) {}

MultiIndex AnisotropicMcDriver::select(double& criterion) {
    const auto& pool = set_.pool();
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    auto it = pool.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(pick(rng_)));
    criterion = 0.0;
    return *it;
}

std::unique_ptr<SamplingDriver> make_driver(DriverKind kind, const Model& model, DriverOptions options) {
    switch (kind) {
        case DriverKind::aspi: return std::make_unique<AspiDriver>(model, options);
        case DriverKind::amc: return std::make_unique<AnisotropicMcDriver>(model, options);
        case DriverKind::raspi: {
            const auto* op = dynamic_cast<const OperatorModel*>(&model);
            if (op == nullptr) throw Error(ErrorCode::config, "raspi needs a model with an operator");
            return std::make_unique<RaspiDriver>(*op, options);
        }
    }
    throw Error(ErrorCode::internal, "unhandled driver kind");
}

}  // namespace kuq
