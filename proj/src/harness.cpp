// SPDX-License-Identifier: Apache-2.0
#include "kinetic_uq/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "kinetic_uq/error.hpp"
#include "kinetic_uq/leja.hpp"
#include "log.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "report_io.hpp"

namespace kuq {

namespace {

ErrorEstimate summarize(std::span<const double> squared) {
    const auto n = static_cast<double>(squared.size());
    const double mean = std::accumulate(squared.begin(), squared.end(), 0.0) / n;
    double var = 0.0;
    if (squared.size() > 1) {
        for (double s : squared) var += (s - mean) * (s - mean);
        var /= n - 1.0;
    }
    ErrorEstimate e;
    e.error = std::sqrt(mean);
    // d sqrt(m) = dm / (2 sqrt(m))
    e.std_error = mean > 0.0 ? std::sqrt(var / n) / (2.0 * e.error) : 0.0;
    return e;
}

std::string short_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::io, "short write to " + path.string());
}

}  // namespace

// ---------------------------------------------------------------------------
// Reference samples

std::vector<std::vector<double>> ReferenceSet::draw(std::size_t count, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    std::vector<std::vector<double>> z(count, std::vector<double>(dim));
    for (auto& row : z) {
        for (double& x : row) x = uniform(rng);
    }
    return z;
}

ReferenceSet::ReferenceSet(const Model& model, std::size_t count, std::uint64_t seed,
                           const std::filesystem::path& cache_dir, std::uint64_t model_key) {
    if (count == 0) throw Error(ErrorCode::invalid_argument, "reference set needs at least one sample");
    z_ = draw(count, model.parameter_dim(), seed);
    f_.resize(count);
    const std::size_t m = model.payload_size();

    std::vector<std::filesystem::path> files(count);
    std::vector<std::size_t> missing;
    if (!cache_dir.empty()) std::filesystem::create_directories(cache_dir);
    for (std::size_t i = 0; i < count; ++i) {
        if (!cache_dir.empty()) {
            files[i] = cache_dir / (detail::hex64(model_key) + "_" + detail::hex64(detail::fnv1a(z_[i])) + ".bin");
            if (std::filesystem::exists(files[i])) {
                auto cached = detail::read_float64_le(files[i]);
                if (cached.size() == m) {
                    f_[i] = std::move(cached);
                    ++cache_hits_;
                    continue;
                }
                detail::logger().warn("ignoring cached reference {} of wrong size", files[i].string());
            }
        }
        missing.push_back(i);
    }
    detail::parallel_for(missing.size(), [&](std::size_t k) {
        const std::size_t i = missing[k];
        f_[i] = model.solve(z_[i]);
        if (!files[i].empty()) detail::write_float64_le(files[i], f_[i]);
    });
    solves_ = missing.size();
}

ErrorEstimate mc_error(const HierarchicalInterpolant& interp, const ReferenceSet& refs, const Model& model) {
    std::vector<double> squared(refs.size());
    detail::parallel_for(refs.size(), [&](std::size_t i) {
        std::vector<double> v = interp.evaluate(refs.z(i));
        const auto f = refs.reference(i);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= f[k];
        const double e = model.norm(v);
        squared[i] = e * e;
    });
    return summarize(squared);
}

ErrorEstimate mc_error(const HierarchicalInterpolant& interp, const Model& model, std::size_t sample_count,
                       std::uint64_t seed) {
    const ReferenceSet refs(model, sample_count, seed);
    return mc_error(interp, refs, model);
}

ProgressiveError::ProgressiveError(const ReferenceSet& refs, const Model& model)
    : refs_(refs), model_(model), values_(refs.size(), std::vector<double>(model.payload_size(), 0.0)) {}

void ProgressiveError::sync(const HierarchicalInterpolant& interp) {
    const std::size_t n = interp.size();
    if (n < synced_) throw Error(ErrorCode::invalid_argument, "interpolant shrank since the last sync");
    if (n == synced_) return;
    const std::size_t m = model_.payload_size();
    detail::parallel_for(refs_.size(), [&](std::size_t i) {
        auto& v = values_[i];
        for (std::size_t k = synced_; k < n; ++k) {
            const double h = interp.eval_H(interp.indices()[k], refs_.z(i));
            if (h == 0.0) continue;
            const auto a = interp.alpha(k);
            for (std::size_t j = 0; j < m; ++j) v[j] += h * a[j];
        }
    });
    synced_ = n;
}

ErrorEstimate ProgressiveError::estimate() const {
    std::vector<double> squared(refs_.size());
    std::vector<double> diff(model_.payload_size());
    for (std::size_t i = 0; i < refs_.size(); ++i) {
        const auto f = refs_.reference(i);
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = values_[i][j] - f[j];
        const double e = model_.norm(diff);
        squared[i] = e * e;
    }
    return summarize(squared);
}

// ---------------------------------------------------------------------------
// Slopes, oracle, projections

double slope_fit(std::span<const double> n, std::span<const double> error, double window) {
    if (n.size() != error.size()) throw Error(ErrorCode::invalid_argument, "slope_fit: length mismatch");
    if (n.size() < 4) throw Error(ErrorCode::invalid_argument, "slope_fit needs at least 4 points");
    if (!(window > 0.0 && window <= 1.0)) throw Error(ErrorCode::invalid_argument, "slope window must lie in (0, 1]");
    const std::size_t count = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(window * static_cast<double>(n.size()))));
    const std::size_t first = n.size() - std::min(count, n.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i < n.size(); ++i) {
        if (!(n[i] > 0.0) || !(error[i] > 0.0)) {
            throw Error(ErrorCode::invalid_argument, "slope_fit needs positive node counts and errors");
        }
        const double x = std::log(n[i]);
        const double y = std::log(error[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const auto k = static_cast<double>(n.size() - first);
    const double denom = k * sxx - sx * sx;
    if (denom <= 0.0) throw Error(ErrorCode::invalid_argument, "slope_fit needs distinct node counts");
    return (k * sxy - sx * sy) / denom;
}

double LegendreExpansion::tail(std::size_t n) const {
    double s = 0.0;
    for (std::size_t i = coefficient_norms.size(); i > n; --i) s += coefficient_norms[i - 1] * coefficient_norms[i - 1];
    return std::sqrt(s);
}

LegendreExpansion legendre_expansion(const Model& model, std::size_t d, std::size_t max_degree,
                                     std::size_t quadrature_points) {
    if (d < 1 || d > 3) throw Error(ErrorCode::invalid_argument, "best-N oracle supports 1 <= d <= 3");
    if (max_degree > 10) throw Error(ErrorCode::invalid_argument, "best-N oracle supports max_degree <= 10");
    if (model.parameter_dim() < d) throw Error(ErrorCode::invalid_argument, "model has fewer parameters than d");
    const std::size_t q = quadrature_points == 0 ? max_degree + 1 : quadrature_points;
    const std::size_t kdeg = max_degree + 1;
    const std::size_t m = model.payload_size();
    const GaussLegendreRule rule = gauss_legendre(q);

    // A[k][i] = (w_i / 2) L_k(x_i)
    std::vector<double> a(kdeg * q);
    for (std::size_t k = 0; k < kdeg; ++k) {
        const double scale = std::sqrt(2.0 * static_cast<double>(k) + 1.0);
        for (std::size_t i = 0; i < q; ++i) {
            a[k * q + i] = 0.5 * rule.weights[i] * scale * std::legendre(static_cast<unsigned>(k), rule.nodes[i]);
        }
    }

    std::size_t points = 1;
    for (std::size_t j = 0; j < d; ++j) points *= q;
    // Flattened node index: i_1 + q i_2 + q^2 i_3.
    std::vector<double> values(points * m);
    detail::parallel_for(points, [&](std::size_t p) {
        std::vector<double> z(model.parameter_dim(), 0.0);
        std::size_t r = p;
        for (std::size_t j = 0; j < d; ++j) {
            z[j] = rule.nodes[r % q];
            r /= q;
        }
        const auto f = model.solve(z);
        std::copy(f.begin(), f.end(), values.begin() + static_cast<std::ptrdiff_t>(p * m));
    });

    // Contract one axis at a time; shape[j] goes from q to kdeg.
    std::vector<std::size_t> shape(d, q);
    for (std::size_t axis = 0; axis < d; ++axis) {
        std::size_t inner = 1;
        for (std::size_t j = 0; j < axis; ++j) inner *= shape[j];
        std::size_t outer = 1;
        for (std::size_t j = axis + 1; j < d; ++j) outer *= shape[j];
        std::vector<double> next(inner * kdeg * outer * m, 0.0);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t k = 0; k < kdeg; ++k) {
                for (std::size_t i = 0; i < q; ++i) {
                    const double w = a[k * q + i];
                    for (std::size_t in = 0; in < inner; ++in) {
                        const double* src = values.data() + ((o * q + i) * inner + in) * m;
                        double* dst = next.data() + ((o * kdeg + k) * inner + in) * m;
                        for (std::size_t c = 0; c < m; ++c) dst[c] += w * src[c];
                    }
                }
            }
        }
        values = std::move(next);
        shape[axis] = kdeg;
    }

    std::size_t terms = 1;
    for (std::size_t j = 0; j < d; ++j) terms *= kdeg;
    LegendreExpansion out;
    std::vector<MultiIndex> idx(terms);
    std::vector<double> norms(terms);
    for (std::size_t t = 0; t < terms; ++t) {
        std::vector<std::uint32_t> dense(d);
        std::size_t r = t;
        for (std::size_t j = 0; j < d; ++j) {
            dense[j] = static_cast<std::uint32_t>(r % kdeg);
            r /= kdeg;
        }
        idx[t] = MultiIndex::from_dense(dense);
        norms[t] = model.norm(std::span<const double>(values).subspan(t * m, m));
    }
    std::vector<std::size_t> order(terms);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (norms[x] != norms[y]) return norms[x] > norms[y];
        return idx[x] < idx[y];
    });
    for (std::size_t t : order) {
        out.indices.push_back(idx[t]);
        out.coefficient_norms.push_back(norms[t]);
        out.coefficients.emplace_back(values.begin() + static_cast<std::ptrdiff_t>(t * m),
                                      values.begin() + static_cast<std::ptrdiff_t>((t + 1) * m));
    }
    return out;
}

double best_n_oracle(const Model& model, std::size_t d, std::size_t max_degree, std::size_t n) {
    return legendre_expansion(model, d, max_degree).tail(n);
}

std::vector<std::size_t> projection_histogram(std::span<const MultiIndex> set, std::size_t d) {
    std::vector<std::vector<std::uint32_t>> seen(d);
    for (const auto& nu : set) {
        for (std::size_t j = 1; j <= d; ++j) seen[j - 1].push_back(nu[static_cast<std::uint32_t>(j)]);
    }
    std::vector<std::size_t> counts(d, 0);
    for (std::size_t j = 0; j < d; ++j) {
        auto& v = seen[j];
        std::sort(v.begin(), v.end());
        counts[j] = static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
        if (counts[j] == 0) counts[j] = 1;  // empty set: the null index projects to 0
    }
    return counts;
}

// ---------------------------------------------------------------------------
// Experiment pipeline

std::unique_ptr<VfpModel> make_model(const ExperimentConfig& config, double epsilon) {
    PhaseGrid grid(config.nx, config.nv, epsilon, config.dt);
    auto field = ParametricField::family(config.family, config.dim, config.time_dependent);
    return std::make_unique<VfpModel>(grid, std::move(field), config.final_time, config.solver_options(), config.norm);
}

namespace {

std::string csv_header(const ExperimentConfig& config, double epsilon) {
    return "# seed=" + std::to_string(config.mc_seed) + ",config_hash=" + detail::hex64(config.hash()) +
           ",driver=" + std::string(to_string(config.driver)) + ",driver_seed=" + std::to_string(config.driver_seed) +
           ",epsilon=" + detail::format_double(epsilon) + "\n";
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& r, double total_ms,
                   const ReferenceSet& refs) {
    const std::string header = csv_header(config, r.epsilon);
    {
        std::ostringstream os;
        os << header << "n,error,std_error,model_solves_total,operator_applies_total\n";
        for (const auto& c : r.records) {
            os << c.n << ',' << detail::format_double(c.error) << ',' << detail::format_double(c.std_error) << ','
               << c.model_solves << ',' << c.operator_applies << '\n';
        }
        write_text(r.dir / "convergence.csv", os.str());
    }
    {
        std::ostringstream os;
        os << header << "step,selected_index,criterion_value,model_solves_total,operator_applies_total,wall_ms\n";
        for (const auto& s : r.steps) {
            char ms[32];
            std::snprintf(ms, sizeof ms, "%.3f", s.wall_ms);
            os << s.step << ',' << detail::csv_field(s.selected.to_string()) << ','
               << detail::format_double(s.criterion) << ',' << s.totals.model_solves << ','
               << s.totals.operator_applies << ',' << ms << '\n';
        }
        write_text(r.dir / "selection.csv", os.str());
    }
    {
        std::ostringstream os;
        os << header << "dim,count\n";
        for (std::size_t j = 0; j < r.projections.size(); ++j) os << j + 1 << ',' << r.projections[j] << '\n';
        write_text(r.dir / "projections.csv", os.str());
    }
    {
        detail::PlotSeries s;
        s.label = std::string(to_string(config.driver)) + " eps=" + short_real(r.epsilon);
        for (const auto& c : r.records) {
            s.x.push_back(static_cast<double>(c.n));
            s.y.push_back(c.error);
        }
        const std::string title = "MC error, field " + std::string(to_string(config.family)) +
                                  (config.time_dependent ? " (time dependent)" : "") + ", d=" +
                                  std::to_string(config.dim);
        write_text(r.dir / "plot.svg", detail::loglog_svg(std::span(&s, 1), title, "nodes n", "error", true));
        write_text(r.dir / "projections.svg",
                   detail::bar_svg(r.projections, "distinct projections per dimension"));
    }
    {
        std::ostringstream os;
        os << "config_hash = " << detail::hex64(config.hash()) << '\n'
           << "epsilon = " << detail::format_double(r.epsilon) << '\n'
           << "nodes = " << (r.records.empty() ? 0 : r.records.back().n) << '\n'
           << "slope = " << detail::format_double(r.slope) << '\n'
           << "reference_solves = " << refs.solves() << '\n'
           << "reference_cache_hits = " << refs.cache_hits() << '\n';
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.1f", total_ms);
        os << "wall_ms = " << ms << "\n\n" << config.canonical();
        write_text(r.dir / "run_info.txt", os.str());
    }
}

}  // namespace

ExperimentResult run_single(const ExperimentConfig& config, double epsilon, const std::filesystem::path& dir) {
    config.validate();
    std::filesystem::create_directories(dir);
    const auto marker = dir / "PARTIAL";
    std::filesystem::remove(marker);
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto model = make_model(config, epsilon);
        const ReferenceSet refs(*model, config.mc_samples, config.mc_seed, config.cache_dir,
                                config.model_hash(epsilon));
        DriverOptions opts;
        opts.d_max = static_cast<std::uint32_t>(config.dim);
        opts.seed = config.driver_seed;
        auto driver = make_driver(config.driver, *model, opts);
        ProgressiveError progress(refs, *model);

        ExperimentResult r;
        r.dir = dir;
        r.epsilon = epsilon;
        r.config_hash = config.hash();
        auto record = [&] {
            progress.sync(driver->interpolant());
            const auto e = progress.estimate();
            ConvergenceRecord c;
            c.n = driver->interpolant().size();
            c.error = e.error;
            c.std_error = e.std_error;
            c.model_solves = driver->counters().model_solves;
            c.operator_applies = driver->counters().operator_applies;
            r.records.push_back(c);
        };
        driver->run(config.budget, [&](const StepRecord& s) {
            if (s.step % config.mc_every == 0 || s.step == config.budget) record();
        });
        if (r.records.empty() || r.records.back().n != driver->interpolant().size()) record();

        r.steps.assign(driver->history().begin(), driver->history().end());
        r.projections = projection_histogram(driver->index_set().members(), config.dim);
        r.slope = std::numeric_limits<double>::quiet_NaN();
        if (r.records.size() >= 4) {
            std::vector<double> n, e;
            for (const auto& c : r.records) {
                n.push_back(static_cast<double>(c.n));
                e.push_back(c.error);
            }
            try {
                r.slope = slope_fit(n, e, config.slope_window);
            } catch (const Error& err) {
                detail::logger().warn("slope fit skipped: {}", err.what());
            }
        }
        const double total_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        write_outputs(config, r, total_ms, refs);
        return r;
    } catch (const std::exception& e) {
        std::ofstream out(marker);
        out << "run failed: " << e.what() << '\n';
        throw;
    }
}

std::vector<ExperimentResult> run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<ExperimentResult> results;
    if (config.epsilons.size() == 1) {
        results.push_back(run_single(config, config.epsilons.front(), config.output_dir));
        return results;
    }
    std::vector<detail::PlotSeries> series;
    for (double eps : config.epsilons) {
        results.push_back(run_single(config, eps, config.output_dir / ("eps_" + short_real(eps))));
        detail::PlotSeries s;
        s.label = "eps=" + short_real(eps);
        for (const auto& c : results.back().records) {
            s.x.push_back(static_cast<double>(c.n));
            s.y.push_back(c.error);
        }
        series.push_back(std::move(s));
    }
    write_text(config.output_dir / "plot.svg",
               detail::loglog_svg(series, "MC error by epsilon", "nodes n", "error", true));
    return results;
}

std::vector<ConvergenceRecord> read_convergence_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
    std::vector<ConvergenceRecord> out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("n,error", 0) != 0) throw Error(ErrorCode::io, "unexpected header in " + path.string());
            header_seen = true;
            continue;
        }
        const auto f = detail::split_csv_line(line);
        if (f.size() != 5) throw Error(ErrorCode::io, "malformed row in " + path.string() + ": " + line);
        try {
            ConvergenceRecord c;
            c.n = std::stoull(f[0]);
            c.error = std::stod(f[1]);
            c.std_error = std::stod(f[2]);
            c.model_solves = std::stoull(f[3]);
            c.operator_applies = std::stoull(f[4]);
            out.push_back(c);
        } catch (const std::exception&) {
            throw Error(ErrorCode::io, "malformed row in " + path.string() + ": " + line);
        }
    }
    return out;
}

}  // namespace kuq
