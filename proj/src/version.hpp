#ifndef HOLTERISK_VERSION_HPP
#define HOLTERISK_VERSION_HPP

namespace holterisk {

inline constexpr const char* kVersion = "0.1.0";

} // namespace holterisk

#endif
