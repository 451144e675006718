#pragma once

#include <string>
#include <vector>

#include "compmdp/model.hpp"

namespace compmdp {

struct TerminationReport {
    // Every memoryless scheduler leaves the positions almost surely, either
    // through an exit or at a dead end.
    bool certified = true;
    // Positions reachable from an entrance where some scheduler can keep the
    // run inside exit-free end components forever.
    std::vector<std::string> trapped;
    // Reachable positions without any enabled action; mass entering them is lost.
    std::vector<std::string> dead_ends;
};

TerminationReport check_termination(const RoMDP& a);

}  // namespace compmdp
