#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "compmdp/model.hpp"

namespace compmdp {

// Prefixes applied to the position names of the left and right operand.
struct Naming {
    std::string left = "L/";
    std::string right = "R/";
};

inline const Naming kNoRenaming{"", ""};

RoMDP identity_wire(std::size_t m, const std::vector<std::string>& actions);
RoMDP swap_wire(std::size_t m, std::size_t n, const std::vector<std::string>& actions);

RoMDP seq_ro(const RoMDP& a, const RoMDP& b, const Naming& naming = {});
RoMDP sum_ro(const RoMDP& a, const RoMDP& b, const Naming& naming = {});
RoMDP trace_ro(std::size_t l, const RoMDP& a);

RoMDP with_prefix(const RoMDP& a, const std::string& prefix);

// Extends the action set; the new actions get empty rows at every position.
RoMDP pad_actions(const RoMDP& a, const std::vector<std::string>& actions);
std::vector<std::string> merge_actions(const std::vector<std::string>& x,
                                       const std::vector<std::string>& y);

RoMDP twist_to_ro(const OpenMDP& a);
OpenMDP twist_to_o(RoMDP body, Arity dom, Arity cod, std::string name = {});

OpenMDP identity_o(Arity a, const std::vector<std::string>& actions);
OpenMDP swap_o(Arity a, Arity b, const std::vector<std::string>& actions);
OpenMDP unit_o(Arity a, const std::vector<std::string>& actions);
OpenMDP counit_o(Arity a, const std::vector<std::string>& actions);

OpenMDP seq_o(const OpenMDP& a, const OpenMDP& b, const Naming& naming = {});
OpenMDP sum_o(const OpenMDP& a, const OpenMDP& b, const Naming& naming = {});
// Trace over l rightward loop wires.
OpenMDP trace_o(std::size_t l, const OpenMDP& a);

}  // namespace compmdp
