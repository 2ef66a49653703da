#ifndef PROBCUB_SOBOL_DIRECTIONS_HPP
#define PROBCUB_SOBOL_DIRECTIONS_HPP

namespace probcub::detail {

inline constexpr int kSobolMaxDim = 64;
inline constexpr int kSobolBits = 32;

extern const unsigned int kSobolDirections[kSobolMaxDim][kSobolBits];

}  // namespace probcub::detail

#endif
