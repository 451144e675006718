#pragma once

// Seeded generators of valid random models and well-typed random diagrams,
// shared by the tests, the self-test and the acceptance binary.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "compmdp/diagram.hpp"
#include "compmdp/model.hpp"

namespace compmdp {

using Rng = std::mt19937_64;

// Uniform integer in [lo, hi].
std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi);
bool coin(Rng& rng, double p);

struct ModelParams {
    std::size_t min_positions = 1;
    std::size_t max_positions = 3;
    // Probability that the second action is enabled at a position.
    double second_action = 0.6;
    // Probability that an exit is fed directly by an entrance.
    double direct_entry = 0.15;
    // Probability that a transition row also points backwards.
    double back_edge = 0.5;
    bool single_action = false;
};

// Valid roMDP with actions {a, b} (or {a} when single_action). Every row has
// probability towards the next position or an exit, so each component alone
// terminates almost surely under every scheduler. Probabilities are multiples
// of 1/16 and rewards multiples of 1/1024 in [0.25, 5].
RoMDP random_romdp(Rng& rng, std::size_t m, std::size_t n, const ModelParams& params = {});
RoMC random_romc(Rng& rng, std::size_t m, std::size_t n, ModelParams params = {});
OpenMDP random_omdp(Rng& rng, Arity dom, Arity cod, const ModelParams& params = {});

struct DiagramParams {
    std::size_t max_depth = 4;
    std::size_t max_ports = 3;
    // Bounds on the flattened model.
    std::size_t max_positions = 12;
    double max_schedulers = 4096;
    bool bidirectional = false;
    bool allow_trace = true;
    // Probability that a leaf reuses an existing binding of the same type.
    double reuse = 0.3;
    ModelParams model{1, 3};
};

// Random diagram whose bindings are components named C0, C1, ... (loaded from
// "C0.omdp", ...) and, occasionally, composite subdiagrams D0, D1, ...
// Samples whose flattening contains wire cycles or may fail to terminate are
// rejected and redrawn, so the flattened model is always certified terminating.
Diagram random_diagram(Rng& rng, const DiagramParams& params = {});

// Random diagram with the given outer type.
Diagram random_diagram(Rng& rng, Arity dom, const DiagramParams& params);

// Product over positions of the enabled-action counts.
double scheduler_count(const RoMDP& a);

}  // namespace compmdp
