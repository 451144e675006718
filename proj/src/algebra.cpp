#include "compmdp/algebra.hpp"

#include <algorithm>

#include "compmdp/error.hpp"
#include "compmdp/int_construction.hpp"

namespace compmdp {

namespace {

void require_same_actions(const RoMDP& a, const RoMDP& b) {
    if (a.actions != b.actions) throw ActionSetMismatch("operands have different action sets");
}

void copy_positions(RoMDP& out, const RoMDP& src, const std::string& prefix) {
    for (std::size_t q = 0; q < src.positions.size(); ++q)
        out.add_position(prefix + src.positions[q], src.rewards[q]);
}

template <class Map>
void copy_rows(RoMDP& out, const RoMDP& src, std::size_t offset, Map&& map) {
    for (std::size_t q = 0; q < src.positions.size(); ++q)
        for (std::size_t a = 0; a < src.actions.size(); ++a) {
            Row& dst = out.row(q + offset, a);
            for (const Edge& e : src.row(q, a)) dst.push_back({map(e.to), e.prob});
        }
}

}  // namespace

RoMDP identity_wire(std::size_t m, const std::vector<std::string>& actions) {
    RoMDP w(m, m, actions);
    for (std::size_t i = 0; i < m; ++i) w.entry[i] = Target::exit(i + 1);
    return w;
}

RoMDP swap_wire(std::size_t m, std::size_t n, const std::vector<std::string>& actions) {
    RoMDP w(m + n, n + m, actions);
    for (std::size_t i = 1; i <= m + n; ++i)
        w.entry[i - 1] = Target::exit(i <= m ? i + n : i - m);
    return w;
}

RoMDP seq_ro(const RoMDP& a, const RoMDP& b, const Naming& naming) {
    if (a.exits != b.entrances)
        throw ArityMismatch("sequential composition of " + std::to_string(a.entrances) + "->" +
                            std::to_string(a.exits) + " with " + std::to_string(b.entrances) +
                            "->" + std::to_string(b.exits));
    require_same_actions(a, b);
    const std::size_t na = a.positions.size();

    RoMDP out(a.entrances, b.exits, a.actions);
    copy_positions(out, a, naming.left);
    copy_positions(out, b, naming.right);

    auto map_b = [&](Target t) { return t.is_position() ? Target::position(t.index + na) : t; };
    auto map_a = [&](Target t) { return t.is_exit() ? map_b(b.entry[t.index - 1]) : t; };

    for (std::size_t i = 0; i < a.entrances; ++i) out.entry[i] = map_a(a.entry[i]);
    copy_rows(out, a, 0, map_a);
    copy_rows(out, b, na, map_b);
    out.canonicalize();
    return out;
}

RoMDP sum_ro(const RoMDP& a, const RoMDP& b, const Naming& naming) {
    require_same_actions(a, b);
    const std::size_t na = a.positions.size();

    RoMDP out(a.entrances + b.entrances, a.exits + b.exits, a.actions);
    copy_positions(out, a, naming.left);
    copy_positions(out, b, naming.right);

    auto map_a = [](Target t) { return t; };
    auto map_b = [&](Target t) {
        return t.is_position() ? Target::position(t.index + na) : Target::exit(t.index + a.exits);
    };
    for (std::size_t i = 0; i < a.entrances; ++i) out.entry[i] = a.entry[i];
    for (std::size_t i = 0; i < b.entrances; ++i) out.entry[a.entrances + i] = map_b(b.entry[i]);
    copy_rows(out, a, 0, map_a);
    copy_rows(out, b, na, map_b);
    out.canonicalize();
    return out;
}

RoMDP trace_ro(std::size_t l, const RoMDP& a) {
    if (l > a.entrances || l > a.exits)
        throw ArityMismatch("trace over " + std::to_string(l) + " wires of a " +
                            std::to_string(a.entrances) + "->" + std::to_string(a.exits) +
                            " model");

    // Where mass arriving at loop exit k ends up after following bare wires.
    std::vector<Target> resolved(l + 1);
    for (std::size_t k = 1; k <= l; ++k) {
        std::vector<bool> visited(l + 1);
        std::size_t port = k;
        Target t;
        while (true) {
            visited[port] = true;
            t = a.entry[port - 1];
            if (!t.is_exit() || t.index > l) break;
            if (visited[t.index]) throw WireCycle(t.index);
            port = t.index;
        }
        resolved[k] = t.is_exit() ? Target::exit(t.index - l) : t;
    }
    auto map = [&](Target t) {
        if (!t.is_exit()) return t;
        return t.index <= l ? resolved[t.index] : Target::exit(t.index - l);
    };

    RoMDP out(a.entrances - l, a.exits - l, a.actions);
    out.positions = a.positions;
    out.rewards = a.rewards;
    out.rows.resize(a.rows.size());
    for (std::size_t i = 0; i < out.entrances; ++i) out.entry[i] = map(a.entry[l + i]);
    copy_rows(out, a, 0, map);
    out.canonicalize();
    return out;
}

RoMDP with_prefix(const RoMDP& a, const std::string& prefix) {
    RoMDP out = a;
    for (auto& s : out.positions) s = prefix + s;
    return out;
}

std::vector<std::string> merge_actions(const std::vector<std::string>& x,
                                       const std::vector<std::string>& y) {
    std::vector<std::string> out = x;
    out.insert(out.end(), y.begin(), y.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RoMDP pad_actions(const RoMDP& a, const std::vector<std::string>& actions) {
    if (a.actions == actions) return a;
    std::vector<std::optional<std::size_t>> src(actions.size());
    for (std::size_t k = 0; k < actions.size(); ++k) src[k] = a.action_index(actions[k]);
    for (const auto& name : a.actions)
        if (std::find(actions.begin(), actions.end(), name) == actions.end())
            throw ActionSetMismatch("action '" + name + "' missing from padded action set");

    RoMDP out(a.entrances, a.exits, actions);
    out.entry = a.entry;
    copy_positions(out, a, "");
    for (std::size_t q = 0; q < a.positions.size(); ++q)
        for (std::size_t k = 0; k < actions.size(); ++k)
            if (src[k]) out.row(q, k) = a.row(q, *src[k]);
    return out;
}

RoMDP twist_to_ro(const OpenMDP& a) { return a.body; }

OpenMDP twist_to_o(RoMDP body, Arity dom, Arity cod, std::string name) {
    if (body.entrances != dom.right + cod.left || body.exits != cod.right + dom.left)
        throw ArityMismatch("model " + std::to_string(body.entrances) + "->" +
                            std::to_string(body.exits) + " cannot be typed " + to_string(dom) +
                            " -> " + to_string(cod));
    return OpenMDP{std::move(name), dom, cod, std::move(body)};
}

OpenMDP identity_o(Arity a, const std::vector<std::string>& actions) {
    return OpenMDP{"", a, a, identity_wire(a.right + a.left, actions)};
}

OpenMDP swap_o(Arity a, Arity b, const std::vector<std::string>& actions) {
    Arity dom{a.right + b.right, b.left + a.left};
    Arity cod{b.right + a.right, a.left + b.left};
    RoMDP body = sum_ro(swap_wire(a.right, b.right, actions), swap_wire(a.left, b.left, actions));
    return OpenMDP{"", dom, cod, std::move(body)};
}

OpenMDP unit_o(Arity a, const std::vector<std::string>& actions) {
    const std::size_t t = a.right + a.left;
    return OpenMDP{"", {0, 0}, {t, t}, identity_wire(t, actions)};
}

OpenMDP counit_o(Arity a, const std::vector<std::string>& actions) {
    const std::size_t t = a.right + a.left;
    return OpenMDP{"", {t, t}, {0, 0}, identity_wire(t, actions)};
}

namespace {

struct StructuralOps {
    using Arrow = RoMDP;
    std::vector<std::string> actions;

    RoMDP identity(std::size_t n) const { return identity_wire(n, actions); }
    RoMDP swap(std::size_t m, std::size_t n) const { return swap_wire(m, n, actions); }
    RoMDP seq(const RoMDP& x, const RoMDP& y) const { return seq_ro(x, y, kNoRenaming); }
    RoMDP sum(const RoMDP& x, const RoMDP& y) const { return sum_ro(x, y, kNoRenaming); }
    RoMDP trace(std::size_t l, const RoMDP& x) const { return trace_ro(l, x); }
};

static_assert(TracedMonoidalOps<StructuralOps>);

}  // namespace

OpenMDP seq_o(const OpenMDP& a, const OpenMDP& b, const Naming& naming) {
    if (a.cod != b.dom)
        throw ArityMismatch("sequential composition: codomain " + to_string(a.cod) +
                            " does not match domain " + to_string(b.dom));
    require_same_actions(a.body, b.body);
    if (a.rightward() && b.rightward())
        return OpenMDP{"", a.dom, b.cod, seq_ro(a.body, b.body, naming)};
    StructuralOps ops{a.body.actions};
    RoMDP body = int_seq(ops, with_prefix(a.body, naming.left), a.dom, a.cod,
                         with_prefix(b.body, naming.right), b.cod);
    return OpenMDP{"", a.dom, b.cod, std::move(body)};
}

OpenMDP sum_o(const OpenMDP& a, const OpenMDP& b, const Naming& naming) {
    require_same_actions(a.body, b.body);
    Arity dom = int_sum_dom(a.dom, b.dom), cod = int_sum_cod(a.cod, b.cod);
    if (a.rightward() && b.rightward())
        return OpenMDP{"", dom, cod, sum_ro(a.body, b.body, naming)};
    StructuralOps ops{a.body.actions};
    RoMDP body = int_sum(ops, with_prefix(a.body, naming.left), a.dom, a.cod,
                         with_prefix(b.body, naming.right), b.dom, b.cod);
    return OpenMDP{"", dom, cod, std::move(body)};
}

OpenMDP trace_o(std::size_t l, const OpenMDP& a) {
    if (l > a.dom.right || l > a.cod.right)
        throw ArityMismatch("trace over " + std::to_string(l) + " rightward wires of " +
                            to_string(a.dom) + " -> " + to_string(a.cod));
    return OpenMDP{"", {a.dom.right - l, a.dom.left}, {a.cod.right - l, a.cod.left},
                   trace_ro(l, a.body)};
}

}  // namespace compmdp
