#pragma once

// Equational laws of traced symmetric monoidal categories, plus a few laws of
// the bidirectional (compact closed) layer, checked on seeded random instances.
// Each law is evaluated twice: on open MDPs up to isomorphism, and on their
// semantics (scheduler-set arrows) up to a tolerance.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "compmdp/semantics.hpp"

namespace compmdp {

struct AxiomReport {
    std::string name;
    bool wire_only = false;
    std::size_t instances = 0;
    // Draws rejected because one side contains a wire cycle.
    std::size_t redrawn = 0;
    std::size_t structural_failures = 0;
    std::size_t semantic_failures = 0;
    std::string first_failure;

    bool ok() const { return structural_failures == 0 && semantic_failures == 0; }
};

struct SelftestConfig {
    std::uint64_t seed = 1;
    std::size_t instances = 100;
    double tolerance = 1e-9;
    // Check laws of the bidirectional layer as well.
    bool bidirectional = true;
    // Require isomorphism for every law, not only for wire-only ones.
    bool structural_everywhere = true;
};

std::vector<AxiomReport> run_axiom_suite(const SelftestConfig& cfg);

// Two fronts are equivalent when every element of one is matched within tol by
// an element of the other. An unmatched element is tolerated only when both
// fronts contain an element that dominates it up to tol, i.e. it survived
// pruning on one side through rounding alone.
bool fronts_equivalent(const SemanticArrow& f, const SemanticArrow& g, double tol,
                       std::string* why = nullptr);

}  // namespace compmdp
