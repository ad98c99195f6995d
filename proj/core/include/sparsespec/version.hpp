#pragma once

namespace sparsespec {

inline constexpr const char* kVersion = "0.1.0";

} // namespace sparsespec
