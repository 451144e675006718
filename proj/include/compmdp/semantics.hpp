#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compmdp/diagram.hpp"
#include "compmdp/mc_engine.hpp"
#include "compmdp/model.hpp"
#include "compmdp/scheduler_tag.hpp"

namespace compmdp {

struct SemanticElement {
    SemanticArrowMC value;
    Tag tag;
};

// Set of Markov chain arrows, one per (surviving) scheduler combination.
// `wiring[i]` holds the exit an entrance is connected to by bare wires, if any;
// it is used to detect wire cycles under trace exactly as the structural side does.
struct SemanticArrow {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<SemanticElement> elements;
    std::vector<std::optional<std::size_t>> wiring;
};

struct EvalConfig {
    std::size_t max_schedulers = 65536;
    double prune_epsilon = 0.0;
    bool prune = true;
    bool memoization = true;
    unsigned threads = 1;

    std::string fingerprint() const;
};

SemanticArrow lift_romdp(const RoMDP& a, const std::string& component, const EvalConfig& cfg);

SemanticArrow identity_sem(std::size_t n);
SemanticArrow swap_sem(std::size_t m, std::size_t n);
SemanticArrow seq_sem(const SemanticArrow& f, const SemanticArrow& g, const EvalConfig& cfg);
SemanticArrow sum_sem(const SemanticArrow& f, const SemanticArrow& g, const EvalConfig& cfg);
SemanticArrow trace_sem(std::size_t l, const SemanticArrow& f, const EvalConfig& cfg);

// Bidirectional composites; arities are those of the operands.
SemanticArrow seq_sem_o(const SemanticArrow& f, Arity f_dom, Arity mid, const SemanticArrow& g,
                        Arity g_cod, const EvalConfig& cfg);
SemanticArrow sum_sem_o(const SemanticArrow& f, Arity f_dom, Arity f_cod, const SemanticArrow& g,
                        Arity g_dom, Arity g_cod, const EvalConfig& cfg);

// Drops every element weakly dominated (within eps) by a retained one; among
// identical elements the one with the smallest tag is kept.
SemanticArrow prune(SemanticArrow f, double eps = 0.0);

struct Optimum {
    double p = 0.0;
    double r = 0.0;
    Tag tag;
    std::size_t index = 0;
};

// Maximizes r at (i, j), 1-based; ties go to larger p, then to the smaller tag.
Optimum extract_optimal(const SemanticArrow& f, std::size_t i, std::size_t j);

struct SolveStats {
    std::size_t component_solves = 0;
    std::size_t cache_hits = 0;
    std::vector<std::pair<std::string, std::size_t>> front_sizes;
};

SemanticArrow solve_diagram(const Diagram& env, const ExprPtr& e, const EvalConfig& cfg,
                            SolveStats* stats = nullptr);

// (position name, action name) over the positions of flatten(env, e).
std::vector<std::pair<std::string, std::string>> witness_assignments(const Diagram& env,
                                                                     const ExprPtr& e,
                                                                     const Tag& tag);
Scheduler witness_scheduler(const RoMDP& flat,
                            const std::vector<std::pair<std::string, std::string>>& assignments);

}  // namespace compmdp
