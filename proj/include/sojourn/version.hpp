#ifndef SOJOURN_VERSION_HPP
#define SOJOURN_VERSION_HPP

namespace sojourn {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

}  // namespace sojourn

#endif
