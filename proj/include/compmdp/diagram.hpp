#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compmdp/model.hpp"

namespace compmdp {

struct WireSpec {
    enum class Kind : std::uint8_t { Identity, Swap, Unit, Counit };

    Kind kind = Kind::Identity;
    std::size_t a = 0;
    std::size_t b = 0;

    bool operator==(const WireSpec&) const = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Typed string diagram. Arities are filled in by the make_* constructors.
struct Expr {
    enum class Kind : std::uint8_t { Prim, Seq, Sum, Trace, Freeze, Wire, Var };

    Kind kind = Kind::Wire;
    ExprPtr left;   // Seq, Sum; inner expression of Trace and Freeze
    ExprPtr right;  // Seq, Sum
    std::size_t loops = 0;
    WireSpec wire;
    std::string name;  // Var: binding name. Prim: path it was loaded from
    std::shared_ptr<const OpenMDP> component;
    Arity dom;
    Arity cod;
};

class Diagram {
public:
    // Throws Error if the name is already bound.
    void bind(const std::string& name, ExprPtr e);
    ExprPtr lookup(const std::string& name) const;
    bool has(const std::string& name) const { return index_.count(name) != 0; }
    const std::vector<std::pair<std::string, ExprPtr>>& bindings() const { return bindings_; }

    ExprPtr main;
    std::optional<std::size_t> entrance;
    std::optional<std::size_t> exit;

private:
    std::vector<std::pair<std::string, ExprPtr>> bindings_;
    std::map<std::string, std::size_t> index_;
};

ExprPtr make_prim(std::string path, std::shared_ptr<const OpenMDP> component);
ExprPtr make_var(const Diagram& env, const std::string& name);
ExprPtr make_seq(ExprPtr a, ExprPtr b);
ExprPtr make_sum(ExprPtr a, ExprPtr b);
ExprPtr make_trace(std::size_t loops, ExprPtr e);
ExprPtr make_freeze(ExprPtr e);
ExprPtr make_wire(WireSpec w);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

inline const std::string kDefaultAction = "act";

// Union of the action sets of all components reachable from e.
std::vector<std::string> diagram_actions(const Diagram& env, const ExprPtr& e);

// Monolithic open MDP of a diagram. Components are padded to a common action
// set. Seq and Sum prefix their operands with "L/" and "R/".
OpenMDP flatten(const Diagram& env, const ExprPtr& e);
OpenMDP flatten(const Diagram& env, const ExprPtr& e, const std::vector<std::string>& actions);

// Number of positions of flatten(env, e), computed without flattening.
std::size_t count_positions(const Diagram& env, const ExprPtr& e);

}  // namespace compmdp
