// SPDX-License-Identifier: Apache-2.0
#include "kinetic_uq/kinetic_uq.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "kinetic_uq/adaptive_driver.hpp"
#include "kinetic_uq/config.hpp"
#include "kinetic_uq/error.hpp"
#include "kinetic_uq/harness.hpp"
#include "kinetic_uq/leja.hpp"
#include "kinetic_uq/sparse_interp.hpp"
#include "report_io.hpp"

struct kuq_config {
    kuq::ExperimentConfig value;
};

struct kuq_interpolant {
    kuq::HierarchicalInterpolant value;
};

struct kuq_driver {
    std::unique_ptr<kuq::VfpModel> model;
    std::unique_ptr<kuq::SamplingDriver> driver;
};

namespace {

thread_local std::string last_error;

kuq_status to_status(kuq::ErrorCode c) {
    switch (c) {
        case kuq::ErrorCode::invalid_argument: return KUQ_INVALID_ARGUMENT;
        case kuq::ErrorCode::not_admissible: return KUQ_NOT_ADMISSIBLE;
        case kuq::ErrorCode::solver: return KUQ_SOLVER;
        case kuq::ErrorCode::io: return KUQ_IO;
        case kuq::ErrorCode::config: return KUQ_CONFIG;
        case kuq::ErrorCode::internal: return KUQ_INTERNAL;
    }
    return KUQ_INTERNAL;
}

template <class F>
kuq_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return KUQ_OK;
    } catch (const kuq::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return KUQ_INTERNAL;
    } catch (const std::filesystem::filesystem_error& e) {
        last_error = e.what();
        return KUQ_IO;
    } catch (const std::exception& e) {
        last_error = e.what();
        return KUQ_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw kuq::Error(kuq::ErrorCode::invalid_argument, what);
}

std::vector<double> padded_z(const kuq::ExperimentConfig& cfg, const double* z, std::size_t z_len) {
    require(z != nullptr || z_len == 0, "z is NULL");
    if (z_len > cfg.dim) {
        throw kuq::Error(kuq::ErrorCode::invalid_argument,
                         "got " + std::to_string(z_len) + " parameters, field.dim is " + std::to_string(cfg.dim));
    }
    std::vector<double> out(cfg.dim, 0.0);
    std::copy(z, z + z_len, out.begin());
    return out;
}

}  // namespace

extern "C" {

const char* kuq_status_string(kuq_status status) {
    switch (status) {
        case KUQ_OK: return "ok";
        case KUQ_INVALID_ARGUMENT: return "invalid argument";
        case KUQ_NOT_ADMISSIBLE: return "index not admissible";
        case KUQ_SOLVER: return "solver failure";
        case KUQ_IO: return "i/o error";
        case KUQ_CONFIG: return "configuration error";
        case KUQ_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* kuq_last_error_message(void) { return last_error.c_str(); }

const char* kuq_version(void) { return "0.1.0"; }

kuq_status kuq_config_create(kuq_config** out) {
    return guarded([&] {
        require(out != nullptr, "out is NULL");
        *out = new kuq_config{};
    });
}

kuq_status kuq_config_load(const char* path, kuq_config** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "NULL argument");
        *out = new kuq_config{kuq::ExperimentConfig::load(path)};
    });
}

kuq_status kuq_config_parse(const char* text, kuq_config** out) {
    return guarded([&] {
        require(text != nullptr && out != nullptr, "NULL argument");
        *out = new kuq_config{kuq::ExperimentConfig::parse(text)};
    });
}

kuq_status kuq_config_set(kuq_config* config, const char* key, const char* value) {
    return guarded([&] {
        require(config != nullptr && key != nullptr && value != nullptr, "NULL argument");
        kuq::ExperimentConfig next = config->value;
        next.set(key, value);
        next.validate();
        config->value = std::move(next);
    });
}

kuq_status kuq_config_get(const kuq_config* config, const char* key, char* buf, size_t buf_size, size_t* needed) {
    return guarded([&] {
        require(config != nullptr && key != nullptr, "NULL argument");
        const std::string v = config->value.get(key);
        if (needed) *needed = v.size() + 1;
        require(buf != nullptr && buf_size > v.size(), "buffer too small");
        std::memcpy(buf, v.c_str(), v.size() + 1);
    });
}

void kuq_config_destroy(kuq_config* config) { delete config; }

kuq_status kuq_leja_points(size_t depth, double* out) {
    return guarded([&] {
        require(out != nullptr || depth == 0, "out is NULL");
        kuq::LejaSequence seq;
        seq.extend(depth);
        const auto pts = seq.points();
        std::copy(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(depth), out);
    });
}

kuq_status kuq_model_payload_size(const kuq_config* config, size_t* out) {
    return guarded([&] {
        require(config != nullptr && out != nullptr, "NULL argument");
        *out = config->value.nx * config->value.nv;
    });
}

kuq_status kuq_solve(const kuq_config* config, const double* z, size_t z_len, double* out, size_t out_len) {
    return guarded([&] {
        require(config != nullptr && out != nullptr, "NULL argument");
        const auto& cfg = config->value;
        const auto model = kuq::make_model(cfg, cfg.epsilons.front());
        require(out_len == model->payload_size(), "output length does not match nx * nv");
        const auto f = model->solve(padded_z(cfg, z, z_len));
        std::copy(f.begin(), f.end(), out);
    });
}

kuq_status kuq_write_solution(const kuq_config* config, const double* f, size_t len, const char* prefix) {
    return guarded([&] {
        require(config != nullptr && f != nullptr && prefix != nullptr, "NULL argument");
        const auto& cfg = config->value;
        require(len == cfg.nx * cfg.nv, "solution length does not match nx * nv");
        const std::string p(prefix);
        const std::filesystem::path parent = std::filesystem::path(p).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        kuq::detail::write_float64_le(p + ".bin", std::span<const double>(f, len));
        const kuq::PhaseGrid grid(cfg.nx, cfg.nv, cfg.epsilons.front(), cfg.dt);
        std::ofstream out(p + ".csv");
        if (!out) throw kuq::Error(kuq::ErrorCode::io, "cannot write " + p + ".csv");
        out << "key,value\n"
            << "layout,row-major float64 little-endian; index = i*nv + j\n"
            << "nx," << grid.nx() << '\n'
            << "nv," << grid.nv() << '\n'
            << "x_min,0\n"
            << "dx," << kuq::detail::format_double(grid.dx()) << '\n'
            << "v_min," << kuq::detail::format_double(kuq::PhaseGrid::v_min) << '\n'
            << "dv," << kuq::detail::format_double(grid.dv()) << '\n'
            << "dt," << kuq::detail::format_double(grid.dt()) << '\n'
            << "epsilon," << kuq::detail::format_double(grid.eps()) << '\n'
            << "final_time," << kuq::detail::format_double(cfg.final_time) << '\n'
            << "field_family," << to_string(cfg.family) << '\n'
            << "time_dependent," << (cfg.time_dependent ? "true" : "false") << '\n'
            << "dim," << cfg.dim << '\n';
        if (!out) throw kuq::Error(kuq::ErrorCode::io, "short write to " + p + ".csv");
    });
}

kuq_status kuq_run_experiment(const kuq_config* config, double* final_error, double* slope) {
    return guarded([&] {
        require(config != nullptr, "config is NULL");
        const auto results = kuq::run_experiment(config->value);
        const auto& first = results.front();
        if (final_error) {
            *final_error = first.records.empty() ? std::numeric_limits<double>::quiet_NaN() : first.records.back().error;
        }
        if (slope) *slope = first.slope;
    });
}

kuq_status kuq_best_n_oracle(const kuq_config* config, size_t dim, size_t max_degree, size_t n_terms,
                             double* errors) {
    return guarded([&] {
        require(config != nullptr && (errors != nullptr || n_terms == 0), "NULL argument");
        const auto& cfg = config->value;
        require(dim <= cfg.dim, "oracle dimension exceeds field.dim");
        const auto model = kuq::make_model(cfg, cfg.epsilons.front());
        const auto expansion = kuq::legendre_expansion(*model, dim, max_degree);
        for (std::size_t k = 0; k < n_terms; ++k) errors[k] = expansion.tail(k + 1);
    });
}

kuq_status kuq_interpolant_create(size_t d_max, size_t payload_size, kuq_interpolant** out) {
    return guarded([&] {
        require(out != nullptr, "out is NULL");
        *out = new kuq_interpolant{kuq::HierarchicalInterpolant(d_max, payload_size)};
    });
}

kuq_status kuq_interpolant_add_node(kuq_interpolant* interp, const char* index, const double* data, size_t len) {
    return guarded([&] {
        require(interp != nullptr && index != nullptr && data != nullptr, "NULL argument");
        interp->value.add_node(kuq::MultiIndex::parse(index), std::span<const double>(data, len));
    });
}

kuq_status kuq_interpolant_node(kuq_interpolant* interp, const char* index, double* z_out, size_t len) {
    return guarded([&] {
        require(interp != nullptr && index != nullptr && z_out != nullptr, "NULL argument");
        require(len == interp->value.d_max(), "output length must equal d_max");
        const auto z = interp->value.node_of(kuq::MultiIndex::parse(index));
        std::copy(z.begin(), z.end(), z_out);
    });
}

kuq_status kuq_interpolant_evaluate(const kuq_interpolant* interp, const double* z, size_t z_len, double* out,
                                    size_t out_len) {
    return guarded([&] {
        require(interp != nullptr && out != nullptr && (z != nullptr || z_len == 0), "NULL argument");
        interp->value.evaluate(std::span<const double>(z, z_len), std::span<double>(out, out_len));
    });
}

kuq_status kuq_interpolant_size(const kuq_interpolant* interp, size_t* out) {
    return guarded([&] {
        require(interp != nullptr && out != nullptr, "NULL argument");
        *out = interp->value.size();
    });
}

kuq_status kuq_interpolant_save(const kuq_interpolant* interp, const char* dir) {
    return guarded([&] {
        require(interp != nullptr && dir != nullptr, "NULL argument");
        interp->value.save(dir);
    });
}

kuq_status kuq_interpolant_load(const char* dir, kuq_interpolant** out) {
    return guarded([&] {
        require(dir != nullptr && out != nullptr, "NULL argument");
        *out = new kuq_interpolant{kuq::HierarchicalInterpolant::load(dir)};
    });
}

void kuq_interpolant_destroy(kuq_interpolant* interp) { delete interp; }

kuq_status kuq_driver_create(const kuq_config* config, kuq_driver** out) {
    return guarded([&] {
        require(config != nullptr && out != nullptr, "NULL argument");
        const auto& cfg = config->value;
        auto d = std::make_unique<kuq_driver>();
        d->model = kuq::make_model(cfg, cfg.epsilons.front());
        kuq::DriverOptions opts;
        opts.d_max = static_cast<std::uint32_t>(cfg.dim);
        opts.seed = cfg.driver_seed;
        d->driver = kuq::make_driver(cfg.driver, *d->model, opts);
        *out = d.release();
    });
}

kuq_status kuq_driver_step(kuq_driver* driver, kuq_step_info* info) {
    return guarded([&] {
        require(driver != nullptr, "driver is NULL");
        const auto& rec = driver->driver->step();
        if (info) {
            info->step = rec.step;
            info->criterion = rec.criterion;
            info->model_solves_total = rec.totals.model_solves;
            info->operator_applies_total = rec.totals.operator_applies;
            info->pool_size = rec.pool_size;
            info->wall_ms = rec.wall_ms;
            const std::string s = rec.selected.to_string();
            const std::size_t n = std::min(s.size(), sizeof(info->selected_index) - 1);
            std::memcpy(info->selected_index, s.data(), n);
            info->selected_index[n] = '\0';
        }
    });
}

kuq_status kuq_driver_save_interpolant(const kuq_driver* driver, const char* dir) {
    return guarded([&] {
        require(driver != nullptr && dir != nullptr, "NULL argument");
        driver->driver->interpolant().save(dir);
    });
}

void kuq_driver_destroy(kuq_driver* driver) { delete driver; }

}  // extern "C"
