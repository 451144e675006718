#pragma once

#include <cstddef>
#include <string>

#include "compmdp/model.hpp"

namespace compmdp {

// Explicit-state PRISM MDP starting at the given entrance (1-based). Exits
// become absorbing states labelled "exit_j"; positions without an enabled
// action move to an absorbing "lost" state.
std::string export_prism(const RoMDP& a, std::size_t entrance);

}  // namespace compmdp
