#pragma once

namespace metapac {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace metapac
