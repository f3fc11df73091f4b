#ifndef UNIFILT_OPCOUNT_HPP
#define UNIFILT_OPCOUNT_HPP

#include <cstdint>

namespace unifilt::opcount {

// Thread-local tally of floating-point work. Hot routines bump it by the
// arithmetic size of the vector expressions they evaluate, which makes
// per-step cost measurable without timing noise.

inline std::uint64_t& counter() {
  thread_local std::uint64_t count = 0;
  return count;
}

inline void add(std::uint64_t flops) { counter() += flops; }
inline void reset() { counter() = 0; }
inline std::uint64_t value() { return counter(); }

}  // namespace unifilt::opcount

#endif  // UNIFILT_OPCOUNT_HPP
