#include "compmdp/diagram.hpp"

#include <functional>
#include <set>

#include "compmdp/algebra.hpp"
#include "compmdp/error.hpp"

namespace compmdp {

void Diagram::bind(const std::string& name, ExprPtr e) {
    if (has(name)) throw Error("name '" + name + "' is already bound");
    index_[name] = bindings_.size();
    bindings_.emplace_back(name, std::move(e));
}

ExprPtr Diagram::lookup(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw UnboundName(name);
    return bindings_[it->second].second;
}

namespace {

std::shared_ptr<Expr> node(Expr::Kind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}

std::string describe(const Arity& dom, const Arity& cod) {
    return to_string(dom) + " -> " + to_string(cod);
}

}  // namespace

ExprPtr make_prim(std::string path, std::shared_ptr<const OpenMDP> component) {
    auto e = node(Expr::Kind::Prim);
    e->name = std::move(path);
    e->dom = component->dom;
    e->cod = component->cod;
    e->component = std::move(component);
    return e;
}

ExprPtr make_var(const Diagram& env, const std::string& name) {
    ExprPtr target = env.lookup(name);
    auto e = node(Expr::Kind::Var);
    e->name = name;
    e->dom = target->dom;
    e->cod = target->cod;
    return e;
}

ExprPtr make_seq(ExprPtr a, ExprPtr b) {
    if (a->cod != b->dom)
        throw ArityMismatch("cannot compose " + describe(a->dom, a->cod) + " with " +
                            describe(b->dom, b->cod));
    auto e = node(Expr::Kind::Seq);
    e->dom = a->dom;
    e->cod = b->cod;
    e->left = std::move(a);
    e->right = std::move(b);
    return e;
}

ExprPtr make_sum(ExprPtr a, ExprPtr b) {
    auto e = node(Expr::Kind::Sum);
    e->dom = {a->dom.right + b->dom.right, b->dom.left + a->dom.left};
    e->cod = {a->cod.right + b->cod.right, b->cod.left + a->cod.left};
    e->left = std::move(a);
    e->right = std::move(b);
    return e;
}

ExprPtr make_trace(std::size_t loops, ExprPtr inner) {
    if (loops > inner->dom.right || loops > inner->cod.right)
        throw ArityMismatch("trace over " + std::to_string(loops) + " wires of " +
                            describe(inner->dom, inner->cod));
    auto e = node(Expr::Kind::Trace);
    e->loops = loops;
    e->dom = {inner->dom.right - loops, inner->dom.left};
    e->cod = {inner->cod.right - loops, inner->cod.left};
    e->left = std::move(inner);
    return e;
}

ExprPtr make_freeze(ExprPtr inner) {
    auto e = node(Expr::Kind::Freeze);
    e->dom = inner->dom;
    e->cod = inner->cod;
    e->left = std::move(inner);
    return e;
}

ExprPtr make_wire(WireSpec w) {
    auto e = node(Expr::Kind::Wire);
    e->wire = w;
    switch (w.kind) {
    case WireSpec::Kind::Identity: e->dom = e->cod = {w.a, 0}; break;
    case WireSpec::Kind::Swap:
        e->dom = {w.a + w.b, 0};
        e->cod = {w.b + w.a, 0};
        break;
    case WireSpec::Kind::Unit:
        e->dom = {0, 0};
        e->cod = {w.a + w.b, w.a + w.b};
        break;
    case WireSpec::Kind::Counit:
        e->dom = {w.a + w.b, w.a + w.b};
        e->cod = {0, 0};
        break;
    }
    return e;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    if (a->dom != b->dom || a->cod != b->cod) return false;
    switch (a->kind) {
    case Expr::Kind::Prim: return a->name == b->name;
    case Expr::Kind::Var: return a->name == b->name;
    case Expr::Kind::Wire: return a->wire == b->wire;
    case Expr::Kind::Trace:
        return a->loops == b->loops && structurally_equal(a->left, b->left);
    case Expr::Kind::Freeze: return structurally_equal(a->left, b->left);
    case Expr::Kind::Seq:
    case Expr::Kind::Sum:
        return structurally_equal(a->left, b->left) && structurally_equal(a->right, b->right);
    }
    return false;
}

std::vector<std::string> diagram_actions(const Diagram& env, const ExprPtr& root) {
    std::set<std::string> acts;
    std::set<std::string> seen_vars;
    std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& e) {
        switch (e->kind) {
        case Expr::Kind::Prim: acts.insert(e->component->body.actions.begin(),
                                           e->component->body.actions.end());
            break;
        case Expr::Kind::Var:
            if (seen_vars.insert(e->name).second) walk(env.lookup(e->name));
            break;
        case Expr::Kind::Seq:
        case Expr::Kind::Sum:
            walk(e->left);
            walk(e->right);
            break;
        case Expr::Kind::Trace:
        case Expr::Kind::Freeze: walk(e->left); break;
        case Expr::Kind::Wire: break;
        }
    };
    walk(root);
    if (acts.empty()) return {kDefaultAction};
    return {acts.begin(), acts.end()};
}

OpenMDP flatten(const Diagram& env, const ExprPtr& e) {
    return flatten(env, e, diagram_actions(env, e));
}

OpenMDP flatten(const Diagram& env, const ExprPtr& root, const std::vector<std::string>& actions) {
    std::map<std::string, OpenMDP> memo;
    std::function<OpenMDP(const ExprPtr&)> go = [&](const ExprPtr& e) -> OpenMDP {
        switch (e->kind) {
        case Expr::Kind::Prim: {
            OpenMDP c = *e->component;
            c.body = pad_actions(c.body, actions);
            return c;
        }
        case Expr::Kind::Var: {
            auto it = memo.find(e->name);
            if (it != memo.end()) return it->second;
            OpenMDP v = go(env.lookup(e->name));
            memo.emplace(e->name, v);
            return v;
        }
        case Expr::Kind::Seq: return seq_o(go(e->left), go(e->right));
        case Expr::Kind::Sum: return sum_o(go(e->left), go(e->right));
        case Expr::Kind::Trace: return trace_o(e->loops, go(e->left));
        case Expr::Kind::Freeze: return go(e->left);
        case Expr::Kind::Wire:
            switch (e->wire.kind) {
            case WireSpec::Kind::Identity: return identity_o({e->wire.a, 0}, actions);
            case WireSpec::Kind::Swap:
                return OpenMDP{"", e->dom, e->cod, swap_wire(e->wire.a, e->wire.b, actions)};
            case WireSpec::Kind::Unit: return unit_o({e->wire.a, e->wire.b}, actions);
            case WireSpec::Kind::Counit: return counit_o({e->wire.a, e->wire.b}, actions);
            }
        }
        throw Error("unknown diagram node");
    };
    OpenMDP out = go(root);
    out.name = "flat";
    return out;
}

std::size_t count_positions(const Diagram& env, const ExprPtr& root) {
    std::map<std::string, std::size_t> memo;
    std::function<std::size_t(const ExprPtr&)> go = [&](const ExprPtr& e) -> std::size_t {
        switch (e->kind) {
        case Expr::Kind::Prim: return e->component->body.num_positions();
        case Expr::Kind::Var: {
            auto it = memo.find(e->name);
            if (it != memo.end()) return it->second;
            std::size_t v = go(env.lookup(e->name));
            memo.emplace(e->name, v);
            return v;
        }
        case Expr::Kind::Seq:
        case Expr::Kind::Sum: return go(e->left) + go(e->right);
        case Expr::Kind::Trace:
        case Expr::Kind::Freeze: return go(e->left);
        case Expr::Kind::Wire: return 0;
        }
        return 0;
    };
    return go(root);
}

}  // namespace compmdp
