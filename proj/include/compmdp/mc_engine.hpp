#pragma once

#include <cstddef>

#include "compmdp/linear_solver.hpp"
#include "compmdp/model.hpp"

namespace compmdp {

// Reachability probabilities p and weighted rewards r from each entrance to
// each exit. Indices are 0-based here; extract_optimal and the CLI use 1-based.
struct SemanticArrowMC {
    std::size_t m = 0;
    std::size_t n = 0;
    Matrix p;
    Matrix r;

    SemanticArrowMC() = default;
    SemanticArrowMC(std::size_t m_, std::size_t n_) : m(m_), n(n_), p(m_, n_), r(m_, n_) {}

    bool operator==(const SemanticArrowMC&) const = default;
};

inline constexpr double kSnapThreshold = 1e-15;
inline constexpr double kSubnormalTolerance = 1e-9;

// Entries with p below kSnapThreshold become (0, 0).
void snap(SemanticArrowMC& f);
bool is_subnormal(const SemanticArrowMC& f, double tol = kSubnormalTolerance);
bool is_realizable(const SemanticArrowMC& f);

SemanticArrowMC solve_component_mc(const RoMC& c);
// Same as solving induced_mc(a, tau) but without materializing the chain.
SemanticArrowMC solve_under(const RoMDP& a, const Scheduler& tau);

SemanticArrowMC identity_mc(std::size_t n);
SemanticArrowMC swap_mc(std::size_t m, std::size_t n);
SemanticArrowMC seq_mc(const SemanticArrowMC& f, const SemanticArrowMC& g);
SemanticArrowMC sum_mc(const SemanticArrowMC& f, const SemanticArrowMC& g);
SemanticArrowMC trace_mc(std::size_t l, const SemanticArrowMC& f);

struct PathBounds {
    double p_lower = 0.0;
    double r_lower = 0.0;
    double residual_mass = 0.0;    // probability of paths still running at the horizon
    double residual_reward = 0.0;  // reward already collected by those paths
};

// Sums over all paths from entrance i to exit j that visit at most `horizon`
// positions. Paths are grouped by their current position, so the work is
// |Q| * horizon; BudgetExceeded is thrown when that exceeds `budget`.
PathBounds path_oracle(const RoMC& c, std::size_t entrance, std::size_t exit, std::size_t horizon,
                       std::size_t budget = 100000000);

}  // namespace compmdp
