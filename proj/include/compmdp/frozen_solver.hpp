#pragma once

#include <chrono>
#include <cstddef>
#include <optional>

#include "compmdp/mc_engine.hpp"
#include "compmdp/model.hpp"

namespace compmdp {

struct FrozenSolution {
    Scheduler scheduler;
    SemanticArrowMC value;
    std::size_t sweeps = 0;
    std::size_t improvements = 0;
};

inline constexpr double kValueIterationTolerance = 1e-10;

// One memoryless scheduler for a model with exactly one exit, used from every
// entrance. Value iteration finds the maximal probability of reaching the
// exit; a policy attaining it is then improved on the weighted reward as long
// as no position loses value. Such a scheduler need not exist in general (the
// best action can depend on the reward collected before), so the result is
// optimal when one exists and a lower bound otherwise.
FrozenSolution solve_single_exit(
    const RoMDP& a,
    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

}  // namespace compmdp
