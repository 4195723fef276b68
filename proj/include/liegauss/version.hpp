#pragma once

namespace liegauss {
inline constexpr const char* kVersion = "0.1.0";
}
