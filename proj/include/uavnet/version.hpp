#pragma once

namespace uavnet {

inline constexpr const char* kVersion = "1.0.0";

/// Version tag for CSV/manifest layouts; bumped on any column or key change.
inline constexpr int kManifestSchemaVersion = 1;

}  // namespace uavnet
