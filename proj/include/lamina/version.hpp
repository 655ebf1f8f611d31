#pragma once

namespace lamina {

inline constexpr const char* kVersion = "0.1.0";
// Version of the CSV / JSON output schemas. Bump whenever a column or key changes.
inline constexpr int kSchemaVersion = 1;

}  // namespace lamina
