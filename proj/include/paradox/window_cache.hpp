#pragma once

#include <cstdint>

#include "paradox/group.hpp"

namespace paradox {

// Upper bound on the size of ball(radius) from the growth of the
// generating set; saturates at UINT64_MAX.
std::uint64_t ball_size_bound(const Group& g, int radius);

/// ball(radius), reused from PARADOX_CACHE_DIR when that variable names a
/// directory. A cache file is trusted only if its header matches the group,
/// the radius and the digest of its element lines; otherwise the ball is
/// recomputed and the file rewritten. Cache write failures are ignored.
Window cached_ball(const Group& g, int radius);

}  // namespace paradox
