#pragma once

// Loading generated or inline component files without touching the disk.

#include <map>
#include <memory>
#include <string>

#include "compmdp/dsl.hpp"
#include "compmdp/error.hpp"

namespace fixtures {

inline compmdp::ComponentLoader memory_loader(std::map<std::string, std::string> files) {
    auto shared = std::make_shared<std::map<std::string, std::string>>(std::move(files));
    return [shared](const std::string& path) -> std::shared_ptr<const compmdp::OpenMDP> {
        auto it = shared->find(path);
        if (it == shared->end()) throw compmdp::Error("no such file: " + path);
        return std::make_shared<const compmdp::OpenMDP>(compmdp::parse_component(it->second));
    };
}

// Parses the one diagram file among `files`; the rest are components.
inline compmdp::Diagram parse_generated(const std::map<std::string, std::string>& files) {
    std::string main_name;
    for (const auto& [name, text] : files)
        if (!compmdp::looks_like_component(text)) main_name = name;
    if (main_name.empty()) throw compmdp::Error("no diagram file");
    return compmdp::parse_diagram(files.at(main_name), memory_loader(files));
}

}  // namespace fixtures
