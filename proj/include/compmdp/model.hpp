#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace compmdp {

// Pair of port counts: rightward and leftward.
struct Arity {
    std::size_t right = 0;
    std::size_t left = 0;

    auto operator<=>(const Arity&) const = default;
    std::size_t total() const { return right + left; }
};

std::string to_string(const Arity& a);

// Destination of an entry or a transition. Positions are 0-based indices into
// the position table; exits are numbered from 1.
struct Target {
    enum class Kind : std::uint8_t { None, Position, Exit };

    Kind kind = Kind::None;
    std::size_t index = 0;

    static constexpr Target position(std::size_t q) { return {Kind::Position, q}; }
    static constexpr Target exit(std::size_t j) { return {Kind::Exit, j}; }

    constexpr bool is_position() const { return kind == Kind::Position; }
    constexpr bool is_exit() const { return kind == Kind::Exit; }
    constexpr bool is_none() const { return kind == Kind::None; }

    auto operator<=>(const Target&) const = default;
};

struct Edge {
    Target to;
    double prob = 0.0;

    bool operator==(const Edge&) const = default;
};

using Row = std::vector<Edge>;

inline constexpr double kRowSumTolerance = 1e-12;

// Rightward open MDP with m entrances and n exits. Transition rows are stored
// per (position, action) in position-major order. Rows are kept sorted by
// target with duplicate targets merged.
struct RoMDP {
    std::size_t entrances = 0;
    std::size_t exits = 0;
    std::vector<std::string> actions;
    std::vector<std::string> positions;
    std::vector<double> rewards;
    std::vector<Target> entry;
    std::vector<Row> rows;

    RoMDP() = default;
    RoMDP(std::size_t m, std::size_t n, std::vector<std::string> action_names);

    std::size_t num_positions() const { return positions.size(); }
    std::size_t num_actions() const { return actions.size(); }
    bool is_chain() const { return actions.size() == 1; }

    const Row& row(std::size_t q, std::size_t a) const { return rows[q * actions.size() + a]; }
    Row& row(std::size_t q, std::size_t a) { return rows[q * actions.size() + a]; }

    double row_sum(std::size_t q, std::size_t a) const;
    bool enabled(std::size_t q, std::size_t a) const;
    // Actions with positive row mass; a position without any gets {0}.
    std::vector<std::size_t> choices(std::size_t q) const;

    std::size_t add_position(std::string name, double reward);
    void add_edge(std::size_t q, std::size_t a, Target to, double prob);

    std::optional<std::size_t> action_index(const std::string& name) const;
    std::optional<std::size_t> position_index(const std::string& name) const;

    // Sort every row by target and merge duplicates; drops zero entries.
    void canonicalize();

    bool operator==(const RoMDP&) const = default;
};

using RoMC = RoMDP;

// Open MDP with bidirectional arities; `body` is the twisted rightward form
// with dom.right + cod.left entrances and cod.right + dom.left exits.
struct OpenMDP {
    std::string name;
    Arity dom;
    Arity cod;
    RoMDP body;

    bool rightward() const { return dom.left == 0 && cod.left == 0; }
};

// Memoryless scheduler: one action index per position.
struct Scheduler {
    std::vector<std::size_t> choice;

    bool operator==(const Scheduler&) const = default;
    auto operator<=>(const Scheduler&) const = default;
};

struct Violation {
    std::string rule;
    std::string message;
    std::string element;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(const std::string& rule) const;
    std::string summary() const;
};

ValidationReport validate(const RoMDP& a);
ValidationReport validate(const OpenMDP& a);
// Throws ValidationError when the report is not ok.
void require_valid(const RoMDP& a, const std::string& what);

// Routes every exit that has more than one accessor through a fresh
// zero-reward position.
RoMDP normalize_exits(const RoMDP& a);

RoMC induced_mc(const RoMDP& a, const Scheduler& tau);

// Returns the position bijection a -> b when one exists.
std::optional<std::vector<std::size_t>> find_isomorphism(const RoMDP& a, const RoMDP& b);
bool isomorphic(const RoMDP& a, const RoMDP& b);

// Fresh action label used by induced chains.
inline const std::string kChainAction = "star";

}  // namespace compmdp
