#pragma once

namespace prbshare {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace prbshare
