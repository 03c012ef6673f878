// SPDX-License-Identifier: Apache-2.0
#include "parallel.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>

#include "log.hpp"

namespace kuq::detail {

std::size_t worker_count() {
    if (const char* env = std::getenv("KINETIC_UQ_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n >= 1) return static_cast<std::size_t>(n);
        } catch (const std::exception&) {
        }
        logger().warn("ignoring invalid KINETIC_UQ_THREADS='{}'", env);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

spdlog::logger& logger() {
    static std::shared_ptr<spdlog::logger> instance = [] {
        auto l = std::make_shared<spdlog::logger>("kinetic_uq",
                                                 std::make_shared<spdlog::sinks::stderr_sink_mt>());
        spdlog::level::level_enum level = spdlog::level::warn;
        if (const char* env = std::getenv("KINETIC_UQ_LOG")) level = spdlog::level::from_str(env);
        l->set_level(level);
        return l;
    }();
    return *instance;
}

}  // namespace kuq::detail
