#include "compmdp/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "compmdp/error.hpp"
#include "compmdp/frozen_solver.hpp"
#include "compmdp/int_construction.hpp"

namespace compmdp {

std::string EvalConfig::fingerprint() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "s%zu:e%.17g:p%d", max_schedulers, prune_epsilon, prune ? 1 : 0);
    return buf;
}

namespace {

using Wiring = std::vector<std::optional<std::size_t>>;

Wiring wiring_of(const RoMDP& a) {
    Wiring w(a.entrances);
    for (std::size_t i = 0; i < a.entrances; ++i)
        if (a.entry[i].is_exit()) w[i] = a.entry[i].index;
    return w;
}

Wiring seq_wiring(const Wiring& f, const Wiring& g) {
    Wiring w(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i]) w[i] = g[*f[i] - 1];
    return w;
}

Wiring sum_wiring(const Wiring& f, std::size_t f_exits, const Wiring& g) {
    Wiring w = f;
    for (const auto& t : g) w.push_back(t ? std::optional<std::size_t>(*t + f_exits) : std::nullopt);
    return w;
}

Wiring trace_wiring(std::size_t l, const Wiring& f) {
    std::vector<std::optional<std::size_t>> resolved(l + 1);
    for (std::size_t k = 1; k <= l; ++k) {
        std::vector<bool> visited(l + 1);
        std::size_t port = k;
        std::optional<std::size_t> t;
        while (true) {
            visited[port] = true;
            t = f[port - 1];
            if (!t || *t > l) break;
            if (visited[*t]) throw WireCycle(*t);
            port = *t;
        }
        resolved[k] = t ? std::optional<std::size_t>(*t - l) : std::nullopt;
    }
    Wiring w(f.size() - l);
    for (std::size_t i = 0; i < w.size(); ++i) {
        auto t = f[l + i];
        if (!t)
            w[i] = std::nullopt;
        else
            w[i] = *t <= l ? resolved[*t] : std::optional<std::size_t>(*t - l);
    }
    return w;
}

// Compares two elements by the order used for pruning: larger aggregate
// first, then lexicographically larger matrices, then smaller tags.
bool prune_before(const SemanticElement& a, const SemanticElement& b) {
    auto sums = [](const SemanticElement& e) {
        double sr = 0.0, sp = 0.0;
        for (double v : e.value.r.data) sr += v;
        for (double v : e.value.p.data) sp += v;
        return std::pair{sr, sp};
    };
    auto [ra, pa] = sums(a);
    auto [rb, pb] = sums(b);
    if (ra != rb) return ra > rb;
    if (pa != pb) return pa > pb;
    if (a.value.p.data != b.value.p.data) return a.value.p.data > b.value.p.data;
    if (a.value.r.data != b.value.r.data) return a.value.r.data > b.value.r.data;
    return compare_tags(a.tag, b.tag) < 0;
}

bool dominated_by(const SemanticElement& e, const SemanticElement& by, double eps) {
    const auto& p = e.value.p.data;
    const auto& r = e.value.r.data;
    const auto& bp = by.value.p.data;
    const auto& br = by.value.r.data;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (bp[k] < p[k] - eps || br[k] < r[k] - eps) return false;
    return true;
}

SemanticArrow prune_impl(SemanticArrow f, double eps, bool keep_duplicates) {
    std::vector<std::size_t> order(f.elements.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return prune_before(f.elements[x], f.elements[y]);
    });
    std::vector<SemanticElement> kept;
    for (std::size_t idx : order) {
        SemanticElement& e = f.elements[idx];
        bool drop = false;
        for (const SemanticElement& k : kept) {
            if (!dominated_by(e, k, eps)) continue;
            if (keep_duplicates && k.value == e.value) continue;
            drop = true;
            break;
        }
        if (!drop) kept.push_back(std::move(e));
    }
    f.elements = std::move(kept);
    return f;
}

SemanticArrow finish(SemanticArrow f, const EvalConfig& cfg, bool keep_duplicates = false) {
    if (!cfg.prune) return f;
    return prune_impl(std::move(f), cfg.prune_epsilon, keep_duplicates);
}

}  // namespace

SemanticArrow prune(SemanticArrow f, double eps) { return prune_impl(std::move(f), eps, false); }

SemanticArrow lift_romdp(const RoMDP& a, const std::string& component, const EvalConfig& cfg) {
    const std::size_t nq = a.num_positions();
    std::vector<std::vector<std::size_t>> choices(nq);
    double count = 1.0;
    for (std::size_t q = 0; q < nq; ++q) {
        choices[q] = a.choices(q);
        count *= static_cast<double>(choices[q].size());
    }
    if (count > static_cast<double>(cfg.max_schedulers)) throw SchedulerExplosion(count, cfg.max_schedulers);
    const std::size_t total = static_cast<std::size_t>(count);

    std::vector<SemanticElement> elems(total);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            Scheduler tau{std::vector<std::size_t>(nq)};
            std::size_t rest = k;
            for (std::size_t q = 0; q < nq; ++q) {
                tau.choice[q] = choices[q][rest % choices[q].size()];
                rest /= choices[q].size();
            }
            elems[k].value = solve_under(a, tau);
            elems[k].tag = make_leaf_tag(component, std::move(tau));
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(total)));
    if (threads <= 1) {
        work(0, total);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (total + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk, e = std::min(total, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }

    SemanticArrow out{a.entrances, a.exits, std::move(elems), wiring_of(a)};
    return finish(std::move(out), cfg);
}

SemanticArrow identity_sem(std::size_t n) {
    SemanticArrow f{n, n, {SemanticElement{identity_mc(n), nullptr}}, Wiring(n)};
    for (std::size_t i = 0; i < n; ++i) f.wiring[i] = i + 1;
    return f;
}

SemanticArrow swap_sem(std::size_t m, std::size_t n) {
    SemanticArrow f{m + n, n + m, {SemanticElement{swap_mc(m, n), nullptr}}, Wiring(m + n)};
    for (std::size_t i = 1; i <= m + n; ++i) f.wiring[i - 1] = i <= m ? i + n : i - m;
    return f;
}

namespace {

SemanticArrow seq_raw(const SemanticArrow& f, const SemanticArrow& g, const EvalConfig& cfg,
                      bool keep_duplicates) {
    if (f.n != g.m)
        throw ArityMismatch("semantic composition of " + std::to_string(f.m) + "->" +
                            std::to_string(f.n) + " with " + std::to_string(g.m) + "->" +
                            std::to_string(g.n));
    SemanticArrow h{f.m, g.n, {}, seq_wiring(f.wiring, g.wiring)};
    h.elements.reserve(f.elements.size() * g.elements.size());
    for (const auto& a : f.elements)
        for (const auto& b : g.elements)
            h.elements.push_back({seq_mc(a.value, b.value), make_seq_tag(a.tag, b.tag)});
    return finish(std::move(h), cfg, keep_duplicates);
}

SemanticArrow sum_raw(const SemanticArrow& f, const SemanticArrow& g, const EvalConfig& cfg,
                      bool keep_duplicates) {
    SemanticArrow h{f.m + g.m, f.n + g.n, {}, sum_wiring(f.wiring, f.n, g.wiring)};
    h.elements.reserve(f.elements.size() * g.elements.size());
    for (const auto& a : f.elements)
        for (const auto& b : g.elements)
            h.elements.push_back({sum_mc(a.value, b.value), make_sum_tag(a.tag, b.tag)});
    return finish(std::move(h), cfg, keep_duplicates);
}

SemanticArrow trace_raw(std::size_t l, const SemanticArrow& f, const EvalConfig& cfg,
                        bool keep_duplicates) {
    if (l > f.m || l > f.n)
        throw ArityMismatch("trace over " + std::to_string(l) + " wires of a " +
                            std::to_string(f.m) + "->" + std::to_string(f.n) + " arrow");
    SemanticArrow h{f.m - l, f.n - l, {}, trace_wiring(l, f.wiring)};
    h.elements.reserve(f.elements.size());
    for (const auto& a : f.elements)
        h.elements.push_back({trace_mc(l, a.value), make_trace_tag(a.tag)});
    return finish(std::move(h), cfg, keep_duplicates);
}

struct SemanticOps {
    using Arrow = SemanticArrow;
    EvalConfig cfg;

    SemanticArrow identity(std::size_t n) const { return identity_sem(n); }
    SemanticArrow swap(std::size_t m, std::size_t n) const { return swap_sem(m, n); }
    SemanticArrow seq(const SemanticArrow& x, const SemanticArrow& y) const {
        return seq_raw(x, y, cfg, true);
    }
    SemanticArrow sum(const SemanticArrow& x, const SemanticArrow& y) const {
        return sum_raw(x, y, cfg, true);
    }
    SemanticArrow trace(std::size_t l, const SemanticArrow& x) const {
        return trace_raw(l, x, cfg, true);
    }
};

static_assert(TracedMonoidalOps<SemanticOps>);

SemanticArrow with_slots(const SemanticArrow& f, std::size_t side) {
    SemanticArrow out = f;
    for (std::size_t k = 0; k < out.elements.size(); ++k) out.elements[k].tag = make_slot_tag(side, k);
    return out;
}

void collect_slots(const Tag& t, std::size_t slot[2]) {
    if (!t) return;
    if (t->kind == TagNode::Kind::Slot) {
        slot[t->slot_side] = t->slot_index;
        return;
    }
    collect_slots(t->left, slot);
    collect_slots(t->right, slot);
}

// Replaces slot placeholders by the operands' real tags.
SemanticArrow retag(SemanticArrow h, const SemanticArrow& f, const SemanticArrow& g, bool is_sum,
                    const EvalConfig& cfg) {
    for (auto& e : h.elements) {
        std::size_t slot[2] = {0, 0};
        collect_slots(e.tag, slot);
        const Tag& a = f.elements[slot[0]].tag;
        const Tag& b = g.elements[slot[1]].tag;
        e.tag = is_sum ? make_sum_tag(a, b) : make_seq_tag(a, b);
    }
    return finish(std::move(h), cfg);
}

}  // namespace

SemanticArrow seq_sem(const SemanticArrow& f, const SemanticArrow& g, const EvalConfig& cfg) {
    return seq_raw(f, g, cfg, false);
}

SemanticArrow sum_sem(const SemanticArrow& f, const SemanticArrow& g, const EvalConfig& cfg) {
    return sum_raw(f, g, cfg, false);
}

SemanticArrow trace_sem(std::size_t l, const SemanticArrow& f, const EvalConfig& cfg) {
    return trace_raw(l, f, cfg, false);
}

SemanticArrow seq_sem_o(const SemanticArrow& f, Arity f_dom, Arity mid, const SemanticArrow& g,
                        Arity g_cod, const EvalConfig& cfg) {
    if (f.m != f_dom.right + mid.left || f.n != mid.right + f_dom.left ||
        g.m != mid.right + g_cod.left || g.n != g_cod.right + mid.left)
        throw ArityMismatch("bidirectional composition with inconsistent arities");
    if (f_dom.left == 0 && mid.left == 0 && g_cod.left == 0) return seq_sem(f, g, cfg);
    SemanticOps ops{cfg};
    SemanticArrow h = int_seq(ops, with_slots(f, 0), f_dom, mid, with_slots(g, 1), g_cod);
    return retag(std::move(h), f, g, false, cfg);
}

SemanticArrow sum_sem_o(const SemanticArrow& f, Arity f_dom, Arity f_cod, const SemanticArrow& g,
                        Arity g_dom, Arity g_cod, const EvalConfig& cfg) {
    if (f_dom.left == 0 && f_cod.left == 0 && g_dom.left == 0 && g_cod.left == 0)
        return sum_sem(f, g, cfg);
    SemanticOps ops{cfg};
    SemanticArrow h = int_sum(ops, with_slots(f, 0), f_dom, f_cod, with_slots(g, 1), g_dom, g_cod);
    return retag(std::move(h), f, g, true, cfg);
}

Optimum extract_optimal(const SemanticArrow& f, std::size_t i, std::size_t j) {
    if (f.elements.empty()) throw EmptyFront("semantic arrow has no elements");
    if (i < 1 || i > f.m || j < 1 || j > f.n)
        throw ArityMismatch("entrance " + std::to_string(i) + " / exit " + std::to_string(j) +
                            " out of range for a " + std::to_string(f.m) + "->" +
                            std::to_string(f.n) + " arrow");
    Optimum best;
    bool have = false;
    for (std::size_t k = 0; k < f.elements.size(); ++k) {
        const auto& e = f.elements[k];
        const double p = e.value.p(i - 1, j - 1), r = e.value.r(i - 1, j - 1);
        bool better = !have || r > best.r || (r == best.r && p > best.p) ||
                      (r == best.r && p == best.p && compare_tags(e.tag, best.tag) < 0);
        if (better) {
            best = Optimum{p, r, e.tag, k};
            have = true;
        }
    }
    return best;
}

namespace {

class Evaluator {
public:
    Evaluator(const Diagram& env, const EvalConfig& cfg, SolveStats* stats)
        : env_(env), cfg_(cfg), stats_(stats), key_suffix_("|" + cfg.fingerprint()) {}

    SemanticArrow eval(const ExprPtr& e) {
        SemanticArrow out = eval_node(e);
        if (stats_) stats_->front_sizes.emplace_back(label(e), out.elements.size());
        return out;
    }

private:
    std::string label(const ExprPtr& e) {
        static const char* names[] = {"prim", "seq", "sum", "trace", "freeze", "wire", "var"};
        std::string s = "#" + std::to_string(counter_++) + " " + names[static_cast<int>(e->kind)];
        if (e->kind == Expr::Kind::Var || e->kind == Expr::Kind::Prim) s += " " + e->name;
        return s;
    }

    void count_solve() {
        if (stats_) ++stats_->component_solves;
    }

    SemanticArrow eval_node(const ExprPtr& e) {
        switch (e->kind) {
        case Expr::Kind::Prim:
            count_solve();
            return lift_romdp(e->component->body, e->component->name, cfg_);
        case Expr::Kind::Var: {
            const std::string key = e->name + key_suffix_;
            if (cfg_.memoization) {
                auto it = memo_.find(key);
                if (it != memo_.end()) {
                    if (stats_) ++stats_->cache_hits;
                    return it->second;
                }
            }
            SemanticArrow v = eval(env_.lookup(e->name));
            if (cfg_.memoization) memo_.emplace(key, v);
            return v;
        }
        case Expr::Kind::Seq: {
            SemanticArrow f = eval(e->left), g = eval(e->right);
            return seq_sem_o(f, e->left->dom, e->left->cod, g, e->right->cod, cfg_);
        }
        case Expr::Kind::Sum: {
            SemanticArrow f = eval(e->left), g = eval(e->right);
            return sum_sem_o(f, e->left->dom, e->left->cod, g, e->right->dom, e->right->cod, cfg_);
        }
        case Expr::Kind::Trace: return trace_sem(e->loops, eval(e->left), cfg_);
        case Expr::Kind::Freeze: {
            if (e->cod.right + e->dom.left != 1)
                throw FrozenMultiExit("frozen block " + to_string(e->dom) + " -> " +
                                      to_string(e->cod) + " does not have a unique exit");
            OpenMDP flat = flatten(env_, e->left);
            FrozenSolution sol = solve_single_exit(flat.body);
            count_solve();
            SemanticArrow out{flat.body.entrances, flat.body.exits, {}, wiring_of(flat.body)};
            out.elements.push_back({sol.value, make_frozen_tag("freeze", sol.scheduler)});
            return out;
        }
        case Expr::Kind::Wire:
            switch (e->wire.kind) {
            case WireSpec::Kind::Identity: return identity_sem(e->wire.a);
            case WireSpec::Kind::Swap: return swap_sem(e->wire.a, e->wire.b);
            case WireSpec::Kind::Unit:
            case WireSpec::Kind::Counit: return identity_sem(e->wire.a + e->wire.b);
            }
        }
        throw Error("unknown diagram node");
    }

    const Diagram& env_;
    EvalConfig cfg_;
    SolveStats* stats_;
    std::string key_suffix_;
    std::unordered_map<std::string, SemanticArrow> memo_;
    std::size_t counter_ = 0;
};

}  // namespace

SemanticArrow solve_diagram(const Diagram& env, const ExprPtr& e, const EvalConfig& cfg,
                            SolveStats* stats) {
    Evaluator ev(env, cfg, stats);
    return ev.eval(e);
}

std::vector<std::pair<std::string, std::string>> witness_assignments(const Diagram& env,
                                                                     const ExprPtr& root,
                                                                     const Tag& root_tag) {
    std::vector<std::pair<std::string, std::string>> out;
    auto expect = [](const Tag& t, TagNode::Kind k) {
        if (!t || t->kind != k) throw Error("scheduler tag does not match the diagram");
    };
    std::function<void(const ExprPtr&, const Tag&, const std::string&)> walk =
        [&](const ExprPtr& e, const Tag& t, const std::string& prefix) {
            switch (e->kind) {
            case Expr::Kind::Prim: {
                expect(t, TagNode::Kind::Leaf);
                const RoMDP& body = e->component->body;
                for (std::size_t q = 0; q < body.num_positions(); ++q)
                    out.emplace_back(prefix + body.positions[q],
                                     body.actions[t->scheduler.choice[q]]);
                break;
            }
            case Expr::Kind::Var: walk(env.lookup(e->name), t, prefix); break;
            case Expr::Kind::Seq:
                expect(t, TagNode::Kind::Seq);
                walk(e->left, t->left, prefix + "L/");
                walk(e->right, t->right, prefix + "R/");
                break;
            case Expr::Kind::Sum:
                expect(t, TagNode::Kind::Sum);
                walk(e->left, t->left, prefix + "L/");
                walk(e->right, t->right, prefix + "R/");
                break;
            case Expr::Kind::Trace:
                expect(t, TagNode::Kind::Trace);
                walk(e->left, t->left, prefix);
                break;
            case Expr::Kind::Freeze: {
                expect(t, TagNode::Kind::Frozen);
                OpenMDP flat = flatten(env, e->left);
                for (std::size_t q = 0; q < flat.body.num_positions(); ++q)
                    out.emplace_back(prefix + flat.body.positions[q],
                                     flat.body.actions[t->scheduler.choice[q]]);
                break;
            }
            case Expr::Kind::Wire: break;
            }
        };
    walk(root, root_tag, "");
    return out;
}

Scheduler witness_scheduler(const RoMDP& flat,
                            const std::vector<std::pair<std::string, std::string>>& assignments) {
    std::unordered_map<std::string, std::string> by_name(assignments.begin(), assignments.end());
    Scheduler tau{std::vector<std::size_t>(flat.num_positions())};
    for (std::size_t q = 0; q < flat.num_positions(); ++q) {
        auto it = by_name.find(flat.positions[q]);
        if (it == by_name.end())
            throw IncompleteScheduler("no action recorded for position " + flat.positions[q]);
        auto a = flat.action_index(it->second);
        if (!a) throw IncompleteScheduler("unknown action " + it->second + " at " + flat.positions[q]);
        tau.choice[q] = *a;
    }
    return tau;
}

}  // namespace compmdp
