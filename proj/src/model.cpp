#include "compmdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "compmdp/error.hpp"

namespace compmdp {

std::string to_string(const Arity& a) {
    return "(" + std::to_string(a.right) + "," + std::to_string(a.left) + ")";
}

RoMDP::RoMDP(std::size_t m, std::size_t n, std::vector<std::string> action_names)
    : entrances(m), exits(n), actions(std::move(action_names)), entry(m) {}

double RoMDP::row_sum(std::size_t q, std::size_t a) const {
    double s = 0.0;
    for (const Edge& e : row(q, a)) s += e.prob;
    return s;
}

bool RoMDP::enabled(std::size_t q, std::size_t a) const {
    for (const Edge& e : row(q, a))
        if (e.prob > 0.0) return true;
    return false;
}

std::vector<std::size_t> RoMDP::choices(std::size_t q) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < actions.size(); ++a)
        if (enabled(q, a)) out.push_back(a);
    if (out.empty()) out.push_back(0);
    return out;
}

std::size_t RoMDP::add_position(std::string name, double reward) {
    positions.push_back(std::move(name));
    rewards.push_back(reward);
    rows.resize(positions.size() * actions.size());
    return positions.size() - 1;
}

void RoMDP::add_edge(std::size_t q, std::size_t a, Target to, double prob) {
    row(q, a).push_back({to, prob});
}

std::optional<std::size_t> RoMDP::action_index(const std::string& name) const {
    for (std::size_t a = 0; a < actions.size(); ++a)
        if (actions[a] == name) return a;
    return std::nullopt;
}

std::optional<std::size_t> RoMDP::position_index(const std::string& name) const {
    for (std::size_t q = 0; q < positions.size(); ++q)
        if (positions[q] == name) return q;
    return std::nullopt;
}

void RoMDP::canonicalize() {
    for (Row& r : rows) {
        std::sort(r.begin(), r.end(), [](const Edge& x, const Edge& y) { return x.to < y.to; });
        Row merged;
        merged.reserve(r.size());
        for (const Edge& e : r) {
            if (!merged.empty() && merged.back().to == e.to)
                merged.back().prob += e.prob;
            else
                merged.push_back(e);
        }
        std::erase_if(merged, [](const Edge& e) { return e.prob == 0.0; });
        r = std::move(merged);
    }
}

bool ValidationReport::has(const std::string& rule) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.rule == rule; });
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const Violation& v : violations)
        os << v.rule << ": " << v.message << (v.element.empty() ? "" : " [" + v.element + "]")
           << "\n";
    return os.str();
}

namespace {

std::string describe(const RoMDP& a, Target t) {
    switch (t.kind) {
    case Target::Kind::Position:
        return t.index < a.positions.size() ? a.positions[t.index]
                                            : "position#" + std::to_string(t.index);
    case Target::Kind::Exit: return "exit " + std::to_string(t.index);
    default: return "<none>";
    }
}

bool target_in_range(const RoMDP& a, Target t) {
    if (t.is_position()) return t.index < a.positions.size();
    if (t.is_exit()) return t.index >= 1 && t.index <= a.exits;
    return false;
}

}  // namespace

ValidationReport validate(const RoMDP& a) {
    ValidationReport rep;
    auto add = [&](std::string rule, std::string msg, std::string el) {
        rep.violations.push_back({std::move(rule), std::move(msg), std::move(el)});
    };

    if (a.actions.empty()) add("actions", "action set is empty", "");
    {
        std::set<std::string> seen;
        for (const auto& s : a.actions)
            if (!seen.insert(s).second) add("actions", "duplicate action", s);
    }
    if (a.rewards.size() != a.positions.size() ||
        a.rows.size() != a.positions.size() * a.actions.size()) {
        add("shape", "position, reward and row tables disagree in size", "");
        return rep;
    }
    {
        std::set<std::string> seen;
        for (const auto& s : a.positions)
            if (!seen.insert(s).second) add("positions", "duplicate position name", s);
    }
    for (std::size_t q = 0; q < a.positions.size(); ++q) {
        double r = a.rewards[q];
        if (!std::isfinite(r) || r < 0.0)
            add("reward", "reward must be a finite non-negative real", a.positions[q]);
    }

    if (a.entry.size() != a.entrances) {
        add("entry", "entry function has wrong length", "");
    } else {
        for (std::size_t i = 0; i < a.entrances; ++i) {
            Target t = a.entry[i];
            if (t.is_none())
                add("entry", "entrance is not mapped", "entrance " + std::to_string(i + 1));
            else if (!target_in_range(a, t))
                add("entry", "entrance maps out of range", "entrance " + std::to_string(i + 1));
        }
    }

    for (std::size_t q = 0; q < a.positions.size(); ++q) {
        for (std::size_t ac = 0; ac < a.actions.size(); ++ac) {
            const std::string el = a.positions[q] + " " + a.actions[ac];
            double sum = 0.0;
            for (const Edge& e : a.row(q, ac)) {
                if (!target_in_range(a, e.to))
                    add("target", "transition to unknown target " + describe(a, e.to), el);
                if (!(e.prob >= 0.0 && e.prob <= 1.0))
                    add("probability", "probability outside [0,1]", el);
                sum += e.prob;
            }
            if (!(std::fabs(sum) <= kRowSumTolerance || std::fabs(sum - 1.0) <= kRowSumTolerance)) {
                std::ostringstream os;
                os.precision(17);
                os << "row sums to " << sum;
                add("row-sum", os.str(), el);
            }
        }
    }

    // Unique access to exits: one source per exit, and one action per source.
    std::vector<std::string> owner(a.exits + 1);
    auto claim = [&](std::size_t j, const std::string& src) {
        if (j < 1 || j > a.exits) return;
        if (owner[j].empty())
            owner[j] = src;
        else if (owner[j] != src)
            add("unique-exit", "exit " + std::to_string(j) + " reached from both " + owner[j] +
                                   " and " + src,
                "exit " + std::to_string(j));
    };
    for (std::size_t i = 0; i < a.entry.size(); ++i)
        if (a.entry[i].is_exit()) claim(a.entry[i].index, "entrance " + std::to_string(i + 1));
    for (std::size_t q = 0; q < a.positions.size(); ++q) {
        std::map<std::size_t, std::size_t> via;
        for (std::size_t ac = 0; ac < a.actions.size(); ++ac) {
            for (const Edge& e : a.row(q, ac)) {
                if (!e.to.is_exit() || !(e.prob > 0.0)) continue;
                claim(e.to.index, a.positions[q]);
                auto [it, fresh] = via.emplace(e.to.index, ac);
                if (!fresh && it->second != ac)
                    add("unique-exit",
                        "exit " + std::to_string(e.to.index) + " reached from " + a.positions[q] +
                            " by two actions",
                        a.positions[q]);
            }
        }
    }
    return rep;
}

ValidationReport validate(const OpenMDP& a) {
    ValidationReport rep = validate(a.body);
    if (a.body.entrances != a.dom.right + a.cod.left || a.body.exits != a.cod.right + a.dom.left)
        rep.violations.push_back({"arity", "body arity does not match " + to_string(a.dom) +
                                               " -> " + to_string(a.cod),
                                  a.name});
    return rep;
}

void require_valid(const RoMDP& a, const std::string& what) {
    ValidationReport rep = validate(a);
    if (!rep.ok()) throw ValidationError(what + ":\n" + rep.summary());
}

RoMDP normalize_exits(const RoMDP& a) {
    // Collect accessors per exit as (source, action) pairs; entrances use action npos.
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::set<std::pair<std::size_t, std::size_t>>> acc(a.exits + 1);
    for (std::size_t i = 0; i < a.entry.size(); ++i)
        if (a.entry[i].is_exit()) acc[a.entry[i].index].insert({npos - i - 1, npos});
    for (std::size_t q = 0; q < a.positions.size(); ++q)
        for (std::size_t ac = 0; ac < a.actions.size(); ++ac)
            for (const Edge& e : a.row(q, ac))
                if (e.to.is_exit() && e.prob > 0.0) acc[e.to.index].insert({q, ac});

    RoMDP out = a;
    std::set<std::string> names(a.positions.begin(), a.positions.end());
    std::vector<std::optional<std::size_t>> redirect(a.exits + 1);
    for (std::size_t j = 1; j <= a.exits; ++j) {
        if (acc[j].size() <= 1) continue;
        std::string name = "acc_exit" + std::to_string(j);
        while (names.count(name)) name += "_";
        names.insert(name);
        std::size_t q = out.add_position(name, 0.0);
        out.add_edge(q, 0, Target::exit(j), 1.0);
        redirect[j] = q;
    }
    auto remap = [&](Target t) {
        if (t.is_exit() && t.index <= a.exits && redirect[t.index])
            return Target::position(*redirect[t.index]);
        return t;
    };
    for (Target& t : out.entry) t = remap(t);
    for (std::size_t q = 0; q < a.positions.size(); ++q)
        for (std::size_t ac = 0; ac < a.actions.size(); ++ac)
            for (Edge& e : out.row(q, ac)) e.to = remap(e.to);
    out.canonicalize();
    return out;
}

RoMC induced_mc(const RoMDP& a, const Scheduler& tau) {
    if (tau.choice.size() != a.positions.size())
        throw IncompleteScheduler("scheduler covers " + std::to_string(tau.choice.size()) +
                                  " of " + std::to_string(a.positions.size()) + " positions");
    RoMC out(a.entrances, a.exits, {kChainAction});
    out.entry = a.entry;
    for (std::size_t q = 0; q < a.positions.size(); ++q) {
        if (tau.choice[q] >= a.actions.size())
            throw IncompleteScheduler("scheduler picks an unknown action at " + a.positions[q]);
        out.add_position(a.positions[q], a.rewards[q]);
        out.row(q, 0) = a.row(q, tau.choice[q]);
    }
    return out;
}

namespace {

// Invariant summary of a position that any isomorphism must preserve.
std::vector<double> signature(const RoMDP& a, std::size_t q) {
    std::vector<double> sig{a.rewards[q]};
    for (std::size_t ac = 0; ac < a.actions.size(); ++ac) {
        std::vector<double> exits_part, pos_part;
        for (const Edge& e : a.row(q, ac)) {
            if (e.to.is_exit()) {
                exits_part.push_back(static_cast<double>(e.to.index));
                exits_part.push_back(e.prob);
            } else {
                pos_part.push_back(e.prob);
            }
        }
        std::sort(pos_part.begin(), pos_part.end());
        sig.push_back(-1.0);
        sig.insert(sig.end(), exits_part.begin(), exits_part.end());
        sig.push_back(-2.0);
        sig.insert(sig.end(), pos_part.begin(), pos_part.end());
    }
    return sig;
}

Row mapped_row(const Row& r, const std::vector<std::size_t>& eta) {
    Row out;
    out.reserve(r.size());
    for (const Edge& e : r)
        out.push_back({e.to.is_position() ? Target::position(eta[e.to.index]) : e.to, e.prob});
    std::sort(out.begin(), out.end(), [](const Edge& x, const Edge& y) { return x.to < y.to; });
    return out;
}

Row sorted_row(Row r) {
    std::sort(r.begin(), r.end(), [](const Edge& x, const Edge& y) { return x.to < y.to; });
    return r;
}

struct IsoSearch {
    const RoMDP& a;
    const RoMDP& b;
    std::vector<std::vector<std::size_t>> candidates;
    std::vector<std::size_t> eta;
    std::vector<bool> used;
    std::vector<std::size_t> order;
    static constexpr std::size_t unset = static_cast<std::size_t>(-1);

    // Checks edges between q and already-assigned positions.
    bool consistent(std::size_t q) const {
        for (std::size_t ac = 0; ac < a.actions.size(); ++ac) {
            for (const Edge& e : a.row(q, ac)) {
                if (!e.to.is_position() || eta[e.to.index] == unset) continue;
                Target bt = Target::position(eta[e.to.index]);
                bool found = false;
                for (const Edge& f : b.row(eta[q], ac))
                    if (f.to == bt && f.prob == e.prob) found = true;
                if (!found) return false;
            }
        }
        return true;
    }

    bool full_check() const {
        for (std::size_t q = 0; q < a.positions.size(); ++q)
            for (std::size_t ac = 0; ac < a.actions.size(); ++ac)
                if (mapped_row(a.row(q, ac), eta) != sorted_row(b.row(eta[q], ac))) return false;
        return true;
    }

    bool search(std::size_t k) {
        if (k == order.size()) return full_check();
        std::size_t q = order[k];
        if (eta[q] != unset) {
            if (!consistent(q)) return false;
            return search(k + 1);
        }
        for (std::size_t c : candidates[q]) {
            if (used[c]) continue;
            eta[q] = c;
            used[c] = true;
            if (consistent(q) && search(k + 1)) return true;
            used[c] = false;
            eta[q] = unset;
        }
        return false;
    }
};

}  // namespace

std::optional<std::vector<std::size_t>> find_isomorphism(const RoMDP& a, const RoMDP& b) {
    if (a.entrances != b.entrances || a.exits != b.exits || a.actions != b.actions ||
        a.positions.size() != b.positions.size())
        return std::nullopt;
    const std::size_t n = a.positions.size();

    IsoSearch s{a, b, {}, std::vector<std::size_t>(n, IsoSearch::unset), std::vector<bool>(n), {}};

    std::map<std::vector<double>, std::vector<std::size_t>> by_sig;
    for (std::size_t q = 0; q < n; ++q) by_sig[signature(b, q)].push_back(q);
    s.candidates.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
        auto it = by_sig.find(signature(a, q));
        if (it == by_sig.end()) return std::nullopt;
        s.candidates[q] = it->second;
    }

    for (std::size_t i = 0; i < a.entrances; ++i) {
        Target ta = a.entry[i], tb = b.entry[i];
        if (ta.kind != tb.kind) return std::nullopt;
        if (ta.is_exit()) {
            if (ta.index != tb.index) return std::nullopt;
            continue;
        }
        if (s.eta[ta.index] == IsoSearch::unset) {
            if (s.used[tb.index]) return std::nullopt;
            auto& cand = s.candidates[ta.index];
            if (std::find(cand.begin(), cand.end(), tb.index) == cand.end()) return std::nullopt;
            s.eta[ta.index] = tb.index;
            s.used[tb.index] = true;
        } else if (s.eta[ta.index] != tb.index) {
            return std::nullopt;
        }
    }

    // Visit positions breadth-first from the fixed ones so that consistency
    // checks prune early.
    std::vector<bool> seen(n);
    std::vector<std::size_t> queue;
    for (std::size_t q = 0; q < n; ++q)
        if (s.eta[q] != IsoSearch::unset) {
            seen[q] = true;
            queue.push_back(q);
        }
    for (std::size_t root = 0; root <= n; ++root) {
        for (std::size_t h = s.order.size(); h < queue.size(); ++h) {
            std::size_t q = queue[h];
            s.order.push_back(q);
            for (std::size_t ac = 0; ac < a.actions.size(); ++ac)
                for (const Edge& e : a.row(q, ac))
                    if (e.to.is_position() && !seen[e.to.index]) {
                        seen[e.to.index] = true;
                        queue.push_back(e.to.index);
                    }
        }
        if (root < n && !seen[root]) {
            seen[root] = true;
            queue.push_back(root);
        }
    }
    if (!s.search(0)) return std::nullopt;
    return s.eta;
}

bool isomorphic(const RoMDP& a, const RoMDP& b) { return find_isomorphism(a, b).has_value(); }

}  // namespace compmdp
