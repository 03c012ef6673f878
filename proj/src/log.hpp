// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <spdlog/spdlog.h>

namespace kuq::detail {

/// Library logger. Level follows KINETIC_UQ_LOG (trace..off), default warn.
spdlog::logger& logger();

}  // namespace kuq::detail
