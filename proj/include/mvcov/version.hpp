#pragma once

namespace mvcov {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kScenarioSchemaVersion = 1;

}  // namespace mvcov
