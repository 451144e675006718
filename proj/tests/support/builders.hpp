#pragma once

// Small hand-built models shared by the unit tests.

#include <string>
#include <vector>

#include "compmdp/model.hpp"

namespace fixtures {

using namespace compmdp;

// One position, reward 4, self-loop 0.2 and exit 0.8.
inline RoMDP task(double reward = 4.0, double loop = 0.2) {
    RoMDP t(1, 1, {"go"});
    t.add_position("q", reward);
    t.add_edge(0, 0, Target::position(0), loop);
    t.add_edge(0, 0, Target::exit(1), 1.0 - loop);
    t.entry[0] = Target::position(0);
    t.canonicalize();
    return t;
}

// Chain q0 -> q1 -> ... -> exit with the given rewards and per-step loop.
inline RoMDP chain(const std::vector<double>& rewards, double loop, const std::string& action = "go") {
    RoMDP c(1, 1, {action});
    for (std::size_t i = 0; i < rewards.size(); ++i) c.add_position("c" + std::to_string(i), rewards[i]);
    for (std::size_t i = 0; i < rewards.size(); ++i) {
        Target next = i + 1 == rewards.size() ? Target::exit(1) : Target::position(i + 1);
        if (loop > 0) c.add_edge(i, 0, Target::position(i), loop);
        c.add_edge(i, 0, next, 1.0 - loop);
    }
    c.entry[0] = rewards.empty() ? Target::exit(1) : Target::position(0);
    c.canonicalize();
    return c;
}

}  // namespace fixtures
