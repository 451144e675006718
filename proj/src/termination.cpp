#include "compmdp/termination.hpp"

namespace compmdp {

TerminationReport check_termination(const RoMDP& a) {
    const std::size_t nq = a.num_positions();
    std::vector<std::vector<std::size_t>> enabled(nq);
    for (std::size_t q = 0; q < nq; ++q)
        for (std::size_t ac = 0; ac < a.num_actions(); ++ac)
            if (a.enabled(q, ac)) enabled[q].push_back(ac);

    // Greatest set Z of positions where some action keeps all its mass in Z.
    std::vector<bool> in_z(nq);
    for (std::size_t q = 0; q < nq; ++q) in_z[q] = !enabled[q].empty();
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t q = 0; q < nq; ++q) {
            if (!in_z[q]) continue;
            bool stays = false;
            for (std::size_t ac : enabled[q]) {
                bool closed = true;
                for (const Edge& e : a.row(q, ac))
                    if (e.prob > 0.0 && (!e.to.is_position() || !in_z[e.to.index])) closed = false;
                if (closed) {
                    stays = true;
                    break;
                }
            }
            if (!stays) {
                in_z[q] = false;
                changed = true;
            }
        }
    }

    std::vector<bool> reach(nq);
    std::vector<std::size_t> stack;
    for (const Target& t : a.entry)
        if (t.is_position() && !reach[t.index]) {
            reach[t.index] = true;
            stack.push_back(t.index);
        }
    while (!stack.empty()) {
        std::size_t q = stack.back();
        stack.pop_back();
        for (std::size_t ac : enabled[q])
            for (const Edge& e : a.row(q, ac))
                if (e.prob > 0.0 && e.to.is_position() && !reach[e.to.index]) {
                    reach[e.to.index] = true;
                    stack.push_back(e.to.index);
                }
    }

    TerminationReport rep;
    for (std::size_t q = 0; q < nq; ++q) {
        if (!reach[q]) continue;
        if (in_z[q]) rep.trapped.push_back(a.positions[q]);
        if (enabled[q].empty()) rep.dead_ends.push_back(a.positions[q]);
    }
    rep.certified = rep.trapped.empty();
    return rep;
}

}  // namespace compmdp
