#pragma once

namespace bsgs {

inline constexpr const char* kVersion = "bsgs-0.1.0";

} // namespace bsgs
