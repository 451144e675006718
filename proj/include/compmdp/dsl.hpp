#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "compmdp/diagram.hpp"
#include "compmdp/model.hpp"

namespace compmdp {

// Component text:
//   mdp NAME { arity 1 -> 1  actions [a]  positions { q reward 4 }
//              entry 1 -> q  trans q a { q: 0.2, exit 1: 0.8 } }
// `omdp` components take `arity (m>, m<) -> (n>, n<)`; their entrances and
// exits are numbered as in the twisted body.
OpenMDP parse_component(std::string_view text);

using ComponentLoader = std::function<std::shared_ptr<const OpenMDP>(const std::string& path)>;

// Loads component files relative to `base`, parsing each path once.
ComponentLoader file_loader(const std::filesystem::path& base);

// Diagram text: ("let" NAME "=" expr ";")* ["solve"] expr ["entrance" INT "exit" INT]
// A `;` at the top level of a let body ends the binding, so sequential
// composition inside a binding is written in parentheses.
Diagram parse_diagram(std::string_view text, const ComponentLoader& loader);

std::string print_component(const OpenMDP& c);
std::string print_expr(const ExprPtr& e);
std::string print_diagram(const Diagram& d);

// Shortest decimal with 12 significant digits.
std::string format_real(double v);

// True when the text starts with `mdp` or `omdp` (after comments).
bool looks_like_component(std::string_view text);

std::string read_file(const std::filesystem::path& p);

}  // namespace compmdp
