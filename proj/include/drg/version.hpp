#ifndef DRG_VERSION_HPP
#define DRG_VERSION_HPP

namespace drg {

inline constexpr const char* kVersion = "0.1.0";

} // namespace drg

#endif
