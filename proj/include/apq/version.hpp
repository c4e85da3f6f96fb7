#ifndef APQ_VERSION_HPP
#define APQ_VERSION_HPP

namespace apq {

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace apq

#endif  // APQ_VERSION_HPP
