#include "compmdp/generators.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "compmdp/algebra.hpp"
#include "compmdp/dsl.hpp"
#include "compmdp/error.hpp"
#include "compmdp/random_models.hpp"

namespace compmdp {

DiLevel parse_di(const std::string& s) {
    if (s == "high") return DiLevel::High;
    if (s == "mid") return DiLevel::Mid;
    if (s == "low") return DiLevel::Low;
    throw Error("unknown DI level '" + s + "' (expected high, mid or low)");
}

std::string to_string(DiLevel d) {
    switch (d) {
    case DiLevel::High: return "high";
    case DiLevel::Mid: return "mid";
    case DiLevel::Low: return "low";
    }
    return "high";
}

std::size_t alias_count(DiLevel d, bool wholesale) {
    switch (d) {
    case DiLevel::High: return 1;
    case DiLevel::Mid: return 2;
    case DiLevel::Low: return wholesale ? 4 : 3;
    }
    return 1;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
    if (const char* s = std::getenv("COMPMDP_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end != s && *end == '\0') return v;
    }
    return fallback;
}

std::size_t patrol_positions(const PatrolParams& p) {
    const std::size_t floor = 1 + p.rooms * p.tasks + 2 * (p.rooms - 1) + 2;
    return p.buildings * p.floors * floor;
}

namespace {

// A definition body is literal text interleaved with references to other
// definitions; references resolve to the alias with the same copy index.
struct Piece {
    bool ref = false;
    std::string text;
};

using Body = std::vector<Piece>;

Body lit(std::string s) { return {{false, std::move(s)}}; }
Body ref(std::string s) { return {{true, std::move(s)}}; }

Body operator+(Body a, const Body& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Body join(const std::vector<std::string>& refs, const std::string& sep) {
    Body out;
    for (std::size_t k = 0; k < refs.size(); ++k) {
        if (k) out = out + lit(sep);
        out = out + ref(refs[k]);
    }
    return out;
}

Body parens(Body b) { return lit("(") + b + lit(")"); }

// Sequence of references; a let body needs parentheses around a top-level `;`.
Body seq_body(const std::vector<std::string>& refs) {
    return refs.size() == 1 ? join(refs, "") : parens(join(refs, " ; "));
}

class Emitter {
public:
    explicit Emitter(std::size_t copies) : copies_(copies) {}

    void define(std::string name, Body body) { defs_.push_back({std::move(name), std::move(body)}); }

    // Top-level sequence; the k-th occurrence of a definition uses copy k mod d.
    std::string render(const std::vector<std::string>& top) const {
        std::string out;
        for (const auto& [name, body] : defs_)
            for (std::size_t c = 0; c < copies_; ++c)
                out += "let " + alias(name, c) + " = " + expand(body, c) + ";\n";
        std::map<std::string, std::size_t> seen;
        out += "solve ";
        for (std::size_t k = 0; k < top.size(); ++k) {
            if (k) out += " ; ";
            out += alias(top[k], seen[top[k]]++ % copies_);
        }
        out += " entrance 1 exit 1\n";
        return out;
    }

private:
    static std::string alias(const std::string& name, std::size_t c) {
        return c == 0 ? name : name + "_" + std::to_string(c + 1);
    }

    static std::string expand(const Body& body, std::size_t c) {
        std::string s;
        for (const Piece& p : body) s += p.ref ? alias(p.text, c) : p.text;
        return s;
    }

    std::size_t copies_;
    std::vector<std::pair<std::string, Body>> defs_;
};

// Round-robin choice of child definitions across a whole layer, so every
// child is used as long as there are at least as many slots as children.
class RoundRobin {
public:
    RoundRobin(std::string prefix, std::size_t count) : prefix_(std::move(prefix)), count_(count) {}
    std::string next() { return prefix_ + std::to_string(k_++ % count_); }

private:
    std::string prefix_;
    std::size_t count_;
    std::size_t k_ = 0;
};

void add_file(GeneratedFiles& files, const std::string& file, RoMDP body, Arity dom, Arity cod,
              const std::string& name) {
    body.canonicalize();
    OpenMDP c = twist_to_o(std::move(body), dom, cod, name);
    require_valid(c.body, name);
    files[file] = print_component(c);
}

double reward(Rng& rng, std::size_t lo, std::size_t hi) {
    return static_cast<double>(pick(rng, lo, hi));
}

void require_sizes(std::initializer_list<std::size_t> sizes) {
    for (std::size_t s : sizes)
        if (s == 0) throw Error("generator sizes must be at least 1");
}

}  // namespace

GeneratedFiles generate_patrol(const PatrolParams& p) {
    require_sizes({p.tasks, p.rooms, p.floors, p.buildings, p.variants});
    Rng rng(p.seed);
    GeneratedFiles files;
    Emitter em(alias_count(p.di));

    const std::size_t room_variants = std::min<std::size_t>(3, p.rooms);
    const std::size_t floor_variants = std::min<std::size_t>(2, p.floors);
    const std::size_t building_variants = std::max<std::size_t>(1, p.buildings / 3);
    const std::size_t task_variants = std::min(p.variants, room_variants * p.tasks);

    for (std::size_t k = 0; k < task_variants; ++k) {
        RoMDP t(1, 1, {"go"});
        t.add_position("q", reward(rng, 1, 9));
        t.add_edge(0, 0, Target::position(0), 0.2);
        t.add_edge(0, 0, Target::exit(1), 0.8);
        t.entry[0] = Target::position(0);
        std::string name = "task" + std::to_string(k);
        add_file(files, name + ".omdp", std::move(t), {1, 0}, {1, 0}, name);
        em.define("Task" + std::to_string(k), lit("load \"" + name + ".omdp\""));
    }

    // Corridor pieces. Leftward wires carry walkers back to the previous junction.
    {
        RoMDP s(2, 1, {"go"});
        s.add_position("s", 0.0);
        s.add_edge(0, 0, Target::exit(1), 1.0);
        s.entry = {Target::position(0), Target::position(0)};
        add_file(files, "start.omdp", std::move(s), {1, 0}, {1, 1}, "start");

        RoMDP j(2, 2, {"back", "fwd"});
        j.add_position("j", 0.0);
        j.add_position("f", 0.0);
        j.add_edge(0, 1, Target::position(1), 1.0);
        j.add_edge(0, 0, Target::exit(2), 0.4);
        j.add_edge(0, 0, Target::position(1), 0.6);
        j.add_edge(1, 1, Target::exit(1), 1.0);
        j.entry = {Target::position(0), Target::position(0)};
        add_file(files, "junction.omdp", std::move(j), {1, 1}, {1, 1}, "junction");

        RoMDP e(1, 2, {"again", "leave"});
        e.add_position("e", 0.0);
        e.add_position("g", 0.0);
        e.add_edge(0, 1, Target::position(1), 1.0);
        e.add_edge(0, 0, Target::exit(2), 0.5);
        e.add_edge(0, 0, Target::position(1), 0.5);
        e.add_edge(1, 1, Target::exit(1), 1.0);
        e.entry = {Target::position(0)};
        add_file(files, "end.omdp", std::move(e), {1, 1}, {1, 0}, "end");

        RoMDP b(1, 1, {"go"});
        b.entry = {Target::exit(1)};
        add_file(files, "back.omdp", std::move(b), {0, 1}, {0, 1}, "back");

        em.define("Start", lit("load \"start.omdp\""));
        em.define("Junction", lit("load \"junction.omdp\""));
        em.define("End", lit("load \"end.omdp\""));
        em.define("Back", lit("load \"back.omdp\""));
    }

    RoundRobin tasks("Task", task_variants);
    for (std::size_t k = 0; k < room_variants; ++k) {
        std::vector<std::string> seq;
        for (std::size_t t = 0; t < p.tasks; ++t) seq.push_back(tasks.next());
        Body body = p.freeze_rooms ? lit("freeze(") + join(seq, " ; ") + lit(")") : seq_body(seq);
        em.define("Room" + std::to_string(k), body);
    }

    RoundRobin rooms("Room", room_variants);
    for (std::size_t k = 0; k < floor_variants; ++k) {
        Body body = ref("Start");
        for (std::size_t r = 0; r < p.rooms; ++r) {
            if (r) body = body + lit(" ; ") + ref("Junction");
            body = body + lit(" ; (") + ref(rooms.next()) + lit(" (+) ") + ref("Back") + lit(")");
        }
        body = body + lit(" ; ") + ref("End");
        em.define("Floor" + std::to_string(k), parens(body));
    }

    RoundRobin floors("Floor", floor_variants);
    for (std::size_t k = 0; k < building_variants; ++k) {
        std::vector<std::string> seq;
        for (std::size_t f = 0; f < p.floors; ++f) seq.push_back(floors.next());
        em.define("Building" + std::to_string(k), seq_body(seq));
    }

    RoundRobin buildings("Building", building_variants);
    std::vector<std::string> top;
    for (std::size_t b = 0; b < p.buildings; ++b) top.push_back(buildings.next());
    files["patrol.diag"] = em.render(top);
    return files;
}

GeneratedFiles generate_wholesale(const WholesaleParams& p) {
    require_sizes({p.length, p.items, p.dispatches, p.pipelines});
    Rng rng(p.seed);
    GeneratedFiles files;
    Emitter em(alias_count(p.di, true));

    const std::size_t dispatch_variants = std::min<std::size_t>(4, p.dispatches);
    const std::size_t pipeline_variants = std::max<std::size_t>(1, p.pipelines / 4);
    const std::size_t item_variants = std::min(p.items, 2 * dispatch_variants);

    for (std::size_t k = 0; k < item_variants; ++k) {
        RoMDP it(1, 1, {"hold", "ship"});
        for (std::size_t q = 0; q < p.length; ++q) it.add_position("q" + std::to_string(q), reward(rng, 1, 9));
        for (std::size_t q = 0; q < p.length; ++q) {
            const bool last = q + 1 == p.length;
            const Target next = last ? Target::exit(1) : Target::position(q + 1);
            const double ship = 0.05 * static_cast<double>(pick(rng, 14, 19));
            it.add_edge(q, 1, next, ship);
            it.add_edge(q, 1, Target::position(q), 1.0 - ship);
            if (last) continue;
            const double hold = 0.05 * static_cast<double>(pick(rng, 4, 12));
            it.add_edge(q, 0, Target::position(q), hold);
            it.add_edge(q, 0, Target::position(q + 1), 1.0 - hold);
            if (q > 0 && pick(rng, 0, 1)) {
                // Returned goods go back one stage.
                it.row(q, 0).back().prob -= 0.1;
                it.add_edge(q, 0, Target::position(q - 1), 0.1);
            }
        }
        it.entry[0] = Target::position(0);
        std::string name = "item" + std::to_string(k);
        add_file(files, name + ".omdp", std::move(it), {1, 0}, {1, 0}, name);
        em.define("Item" + std::to_string(k), lit("load \"" + name + ".omdp\""));
    }

    {
        RoMDP s(2, 2, {"left", "right"});
        s.add_position("s", 0.0);
        s.add_edge(0, 0, Target::exit(1), 1.0);
        s.add_edge(0, 1, Target::exit(2), 1.0);
        s.entry = {Target::position(0), Target::position(0)};
        add_file(files, "split.omdp", std::move(s), {2, 0}, {2, 0}, "split");

        RoMDP j(2, 2, {"done", "redo"});
        j.add_position("u", 1.0);
        j.add_position("o", 0.0);
        j.add_edge(0, 0, Target::position(1), 1.0);
        j.add_edge(0, 1, Target::exit(1), 0.3);
        j.add_edge(0, 1, Target::position(1), 0.7);
        j.add_edge(1, 0, Target::exit(2), 1.0);
        j.entry = {Target::position(0), Target::position(0)};
        add_file(files, "join.omdp", std::move(j), {2, 0}, {2, 0}, "join");

        em.define("Split", lit("load \"split.omdp\""));
        em.define("Join", lit("load \"join.omdp\""));
    }

    RoundRobin items("Item", item_variants);
    for (std::size_t k = 0; k < dispatch_variants; ++k) {
        Body loop = lit("tr[1](") + ref("Split") + lit(" ; (") + ref(items.next()) + lit(" (+) ") +
                    ref(items.next()) + lit(") ; ") + ref("Join") + lit(")");
        em.define("Dispatch" + std::to_string(k),
                  p.freeze_dispatch ? lit("freeze(") + loop + lit(")") : loop);
    }

    RoundRobin dispatches("Dispatch", dispatch_variants);
    for (std::size_t k = 0; k < pipeline_variants; ++k) {
        std::vector<std::string> seq;
        for (std::size_t d = 0; d < p.dispatches; ++d) seq.push_back(dispatches.next());
        em.define("Pipeline" + std::to_string(k), seq_body(seq));
    }

    RoundRobin pipelines("Pipeline", pipeline_variants);
    std::vector<std::string> top;
    for (std::size_t k = 0; k < p.pipelines; ++k) top.push_back(pipelines.next());
    files["wholesale.diag"] = em.render(top);
    return files;
}

GeneratedFiles generate_packets(const PacketsParams& p) {
    require_sizes({p.steps, p.blocks, p.variants});
    Rng rng(p.seed);
    GeneratedFiles files;
    Emitter em(alias_count(p.di));
    const std::size_t variants = std::min(p.variants, p.blocks);

    {
        RoMDP s(2, 1, {"send"});
        s.add_position("st", 0.0);
        s.add_edge(0, 0, Target::exit(1), 1.0);
        s.entry = {Target::position(0), Target::position(0)};
        add_file(files, "pstart.omdp", std::move(s), {1, 0}, {1, 1}, "pstart");

        RoMDP e(1, 2, {"send"});
        e.entry = {Target::exit(1)};
        add_file(files, "pend.omdp", std::move(e), {1, 1}, {1, 0}, "pend");

        em.define("PStart", lit("load \"pstart.omdp\""));
        em.define("PEnd", lit("load \"pend.omdp\""));
    }

    // One transmission step: a failed send returns the packet to the previous step.
    for (std::size_t v = 0; v < variants; ++v) {
        RoMDP st(2, 2, {"careful", "send"});
        st.add_position("q", reward(rng, 1, 4));
        st.add_position("s", 0.0);
        const double fail = 0.05 * static_cast<double>(pick(rng, 1, 5));
        const double wait = 0.05 * static_cast<double>(pick(rng, 5, 10));
        st.add_edge(0, 1, Target::position(1), 1.0 - fail);
        st.add_edge(0, 1, Target::exit(2), fail);
        st.add_edge(0, 0, Target::position(1), 1.0 - wait);
        st.add_edge(0, 0, Target::position(0), wait);
        st.add_edge(1, 1, Target::exit(1), 1.0);
        st.entry = {Target::position(0), Target::position(0)};
        std::string name = "step" + std::to_string(v);
        add_file(files, name + ".omdp", std::move(st), {1, 1}, {1, 1}, name);
        em.define("Step" + std::to_string(v), lit("load \"" + name + ".omdp\""));
    }

    for (std::size_t v = 0; v < variants; ++v) {
        Body chain = ref("PStart");
        for (std::size_t k = 0; k < p.steps; ++k)
            chain = chain + lit(" ; ") + ref("Step" + std::to_string((v + k % 2) % variants));
        chain = chain + lit(" ; ") + ref("PEnd");
        em.define("Block" + std::to_string(v),
                  p.freeze_blocks ? lit("freeze(") + chain + lit(")") : parens(chain));
    }

    RoundRobin blocks("Block", variants);
    std::vector<std::string> top;
    for (std::size_t k = 0; k < p.blocks; ++k) top.push_back(blocks.next());
    files["packets.diag"] = em.render(top);
    return files;
}

}  // namespace compmdp
