#pragma once

namespace levyfield {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kConfigSchemaTag = "levyfield-config/1";
inline constexpr const char* kReportSchemaTag = "levyfield-report/1";

}  // namespace levyfield
