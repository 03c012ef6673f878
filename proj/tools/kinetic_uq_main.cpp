// SPDX-License-Identifier: Apache-2.0
//
// kinetic-uq command line front end. Uses only the C interface.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinetic_uq/kinetic_uq.h"

namespace {

struct ConfigHandle {
    kuq_config* ptr = nullptr;
    ~ConfigHandle() { kuq_config_destroy(ptr); }
};

int fail(kuq_status st) {
    std::fprintf(stderr, "kinetic-uq: %s: %s\n", kuq_status_string(st), kuq_last_error_message());
    return static_cast<int>(st);
}

int load_config(const std::string& path, ConfigHandle& cfg) {
    const kuq_status st = path.empty() ? kuq_config_create(&cfg.ptr) : kuq_config_load(path.c_str(), &cfg.ptr);
    return st == KUQ_OK ? 0 : fail(st);
}

// First line with numeric fields; a leading header line is skipped.
bool read_z_file(const std::string& path, std::vector<double>& z, std::string& err) {
    std::ifstream in(path);
    if (!in) {
        err = "cannot read " + path;
        return false;
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> values;
        std::stringstream ss(line);
        std::string tok;
        bool numeric = true;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(tok, &used));
                while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
                if (used != tok.size()) numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
            if (!numeric) break;
        }
        if (!numeric) continue;
        z = std::move(values);
        return true;
    }
    err = path + " has no numeric row";
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive sparse interpolation for the parametric Vlasov-Fokker-Planck model"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kuq_version()));

    std::size_t depth = 0;
    auto* leja = app.add_subcommand("leja", "Print the first N Leja points");
    leja->add_option("--depth", depth, "number of points")->required()->check(CLI::PositiveNumber);

    std::string z_file, solve_config, solve_output = "solution";
    auto* solve = app.add_subcommand("solve", "Solve the model at one parameter vector");
    solve->add_option("--z-file", z_file, "CSV with one row of parameters z_1, z_2, ...")
        ->required()
        ->check(CLI::ExistingFile);
    solve->add_option("--config", solve_config, "config file (defaults when omitted)")->check(CLI::ExistingFile);
    solve->add_option("--output", solve_output, "output prefix for .bin and .csv");

    std::string run_config, run_output;
    auto* run = app.add_subcommand("run", "Run an experiment");
    run->add_option("--config", run_config, "config file")->required()->check(CLI::ExistingFile);
    run->add_option("--output", run_output, "output directory (overrides output.dir)");

    std::string oracle_config;
    std::size_t oracle_dim = 2, oracle_degree = 6, oracle_terms = 10;
    auto* oracle = app.add_subcommand("oracle", "Best-n Legendre truncation errors in low dimension");
    oracle->add_option("--config", oracle_config, "config file (defaults when omitted)")->check(CLI::ExistingFile);
    oracle->add_option("--dim", oracle_dim, "number of leading parameters (1..3)")->check(CLI::Range(1, 3));
    oracle->add_option("--max-degree", oracle_degree, "max degree per dimension (<= 10)")->check(CLI::Range(0, 10));
    oracle->add_option("--terms", oracle_terms, "largest n to report")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    if (leja->parsed()) {
        std::vector<double> pts(depth);
        if (const kuq_status st = kuq_leja_points(depth, pts.data()); st != KUQ_OK) return fail(st);
        std::printf("k,beta_k\n");
        for (std::size_t k = 0; k < depth; ++k) std::printf("%zu,%.17g\n", k, pts[k]);
        return 0;
    }

    if (solve->parsed()) {
        ConfigHandle cfg;
        if (int rc = load_config(solve_config, cfg)) return rc;
        std::vector<double> z;
        std::string err;
        if (!read_z_file(z_file, z, err)) {
            std::fprintf(stderr, "kinetic-uq: %s\n", err.c_str());
            return KUQ_IO;
        }
        std::size_t m = 0;
        if (const kuq_status st = kuq_model_payload_size(cfg.ptr, &m); st != KUQ_OK) return fail(st);
        std::vector<double> f(m);
        if (const kuq_status st = kuq_solve(cfg.ptr, z.data(), z.size(), f.data(), f.size()); st != KUQ_OK) {
            return fail(st);
        }
        if (const kuq_status st = kuq_write_solution(cfg.ptr, f.data(), f.size(), solve_output.c_str());
            st != KUQ_OK) {
            return fail(st);
        }
        std::printf("wrote %s.bin and %s.csv\n", solve_output.c_str(), solve_output.c_str());
        return 0;
    }

    if (run->parsed()) {
        ConfigHandle cfg;
        if (int rc = load_config(run_config, cfg)) return rc;
        if (!run_output.empty()) {
            if (const kuq_status st = kuq_config_set(cfg.ptr, "output.dir", run_output.c_str()); st != KUQ_OK) {
                return fail(st);
            }
        }
        double error = 0.0, slope = 0.0;
        if (const kuq_status st = kuq_run_experiment(cfg.ptr, &error, &slope); st != KUQ_OK) return fail(st);
        char dir[4096];
        std::size_t needed = 0;
        if (const kuq_status st = kuq_config_get(cfg.ptr, "output.dir", dir, sizeof dir, &needed); st != KUQ_OK) {
            return fail(st);
        }
        std::printf("output: %s\nfinal_error: %.6e\nslope: %.4f\n", dir, error, slope);
        return 0;
    }

    if (oracle->parsed()) {
        ConfigHandle cfg;
        if (int rc = load_config(oracle_config, cfg)) return rc;
        std::vector<double> errors(oracle_terms);
        if (const kuq_status st = kuq_best_n_oracle(cfg.ptr, oracle_dim, oracle_degree, oracle_terms, errors.data());
            st != KUQ_OK) {
            return fail(st);
        }
        std::printf("n,best_n_error\n");
        for (std::size_t k = 0; k < oracle_terms; ++k) std::printf("%zu,%.17g\n", k + 1, errors[k]);
        return 0;
    }
    return 0;
}
