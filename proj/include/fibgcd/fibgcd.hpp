#pragma once

// Umbrella header for the fibgcd toolkit.

#include "fibgcd/arith.hpp"
#include "fibgcd/density.hpp"
#include "fibgcd/fib.hpp"
#include "fibgcd/members.hpp"
#include "fibgcd/rank.hpp"
#include "fibgcd/rational.hpp"

namespace fibgcd {

inline constexpr const char* kVersion = "1.0.0";

} // namespace fibgcd
