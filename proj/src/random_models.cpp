#include "compmdp/random_models.hpp"

#include <string>

#include "compmdp/algebra.hpp"
#include "compmdp/error.hpp"
#include "compmdp/termination.hpp"

namespace compmdp {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

bool coin(Rng& rng, double p) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

namespace {

// Splits 16 sixteenths over k targets, each receiving at least one.
std::vector<double> dyadic_weights(Rng& rng, std::size_t k) {
    std::vector<std::size_t> units(k, 1);
    for (std::size_t left = 16 - k; left > 0; --left) ++units[pick(rng, 0, k - 1)];
    std::vector<double> w;
    for (std::size_t u : units) w.push_back(static_cast<double>(u) / 16.0);
    return w;
}

}  // namespace

RoMDP random_romdp(Rng& rng, std::size_t m, std::size_t n, const ModelParams& params) {
    std::vector<std::string> actions =
        params.single_action ? std::vector<std::string>{"a"} : std::vector<std::string>{"a", "b"};
    RoMDP a(m, n, actions);
    std::size_t nq = pick(rng, params.min_positions, params.max_positions);
    if (nq == 0 && m > n) nq = 1;
    for (std::size_t q = 0; q < nq; ++q)
        a.add_position("q" + std::to_string(q), static_cast<double>(pick(rng, 256, 5120)) / 1024.0);

    const std::size_t na = actions.size();
    std::vector<std::vector<bool>> on(nq, std::vector<bool>(na, false));
    for (std::size_t q = 0; q < nq; ++q) {
        on[q][0] = true;
        for (std::size_t ac = 1; ac < na; ++ac) on[q][ac] = coin(rng, params.second_action);
    }

    // Every exit gets at most one accessor: an entrance or a (position, action).
    std::vector<std::vector<std::vector<std::size_t>>> owned(nq,
                                                             std::vector<std::vector<std::size_t>>(na));
    std::vector<bool> entrance_done(m, false);
    std::vector<std::size_t> free_exits;
    for (std::size_t j = 1; j <= n; ++j) {
        std::vector<std::size_t> free_entrances;
        for (std::size_t i = 0; i < m; ++i)
            if (!entrance_done[i]) free_entrances.push_back(i);
        if (!free_entrances.empty() && (nq == 0 || coin(rng, params.direct_entry))) {
            std::size_t i = free_entrances[pick(rng, 0, free_entrances.size() - 1)];
            a.entry[i] = Target::exit(j);
            entrance_done[i] = true;
            continue;
        }
        if (nq == 0 || coin(rng, 0.1)) continue;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t q = 0; q < nq; ++q)
            for (std::size_t ac = 0; ac < na; ++ac)
                if (on[q][ac]) pairs.emplace_back(q, ac);
        auto [q, ac] = pairs[pick(rng, 0, pairs.size() - 1)];
        owned[q][ac].push_back(j);
    }
    for (std::size_t i = 0; i < m; ++i)
        if (!entrance_done[i]) a.entry[i] = Target::position(pick(rng, 0, nq - 1));

    for (std::size_t q = 0; q < nq; ++q) {
        const bool last = q + 1 == nq;
        for (std::size_t ac = 0; ac < na; ++ac) {
            if (!on[q][ac]) continue;
            std::vector<Target> targets;
            for (std::size_t j : owned[q][ac]) targets.push_back(Target::exit(j));
            if (!last) targets.push_back(Target::position(q + 1));
            // The last position may only act through exits it owns.
            if (targets.empty()) continue;
            if (coin(rng, params.back_edge)) targets.push_back(Target::position(pick(rng, 0, q)));
            if (coin(rng, 0.3)) targets.push_back(Target::position(pick(rng, 0, nq - 1)));
            std::vector<double> w = dyadic_weights(rng, targets.size());
            for (std::size_t k = 0; k < targets.size(); ++k) a.add_edge(q, ac, targets[k], w[k]);
        }
    }
    a.canonicalize();
    require_valid(a, "random model");
    return a;
}

RoMC random_romc(Rng& rng, std::size_t m, std::size_t n, ModelParams params) {
    params.single_action = true;
    return random_romdp(rng, m, n, params);
}

OpenMDP random_omdp(Rng& rng, Arity dom, Arity cod, const ModelParams& params) {
    return twist_to_o(random_romdp(rng, dom.right + cod.left, cod.right + dom.left, params), dom,
                      cod);
}

double scheduler_count(const RoMDP& a) {
    double c = 1.0;
    for (std::size_t q = 0; q < a.num_positions(); ++q)
        c *= static_cast<double>(a.choices(q).size());
    return c;
}

namespace {

class DiagramBuilder {
public:
    DiagramBuilder(Rng& rng, const DiagramParams& p) : rng_(rng), p_(p) {}

    Diagram build(Arity dom) {
        env_.main = gen(0, dom);
        return std::move(env_);
    }

private:
    Arity random_cod() {
        Arity c{pick(rng_, 0, p_.max_ports), 0};
        if (p_.bidirectional && coin(rng_, 0.5)) c.left = pick(rng_, 0, p_.max_ports - 1);
        if (c.total() == 0) c.right = 1;
        return c;
    }

    ExprPtr component(Arity dom, Arity cod) {
        std::string name = "C" + std::to_string(components_++);
        auto c = std::make_shared<OpenMDP>(random_omdp(rng_, dom, cod, p_.model));
        c->name = name;
        env_.bind(name, make_prim(name + ".omdp", c));
        return make_var(env_, name);
    }

    ExprPtr wire(Arity dom) {
        if (dom.left == 0 && dom.right >= 2 && coin(rng_, 0.5)) {
            std::size_t a = pick(rng_, 1, dom.right - 1);
            return make_wire({WireSpec::Kind::Swap, a, dom.right - a});
        }
        if (dom.left == 0) return make_wire({WireSpec::Kind::Identity, dom.right, 0});
        if (dom.left == dom.right) {
            std::size_t a = pick(rng_, 0, dom.right);
            return make_wire({WireSpec::Kind::Counit, a, dom.right - a});
        }
        return nullptr;
    }

    ExprPtr leaf(Arity dom) {
        if (coin(rng_, p_.reuse)) {
            std::vector<std::string> fits;
            for (const auto& [name, e] : env_.bindings())
                if (e->dom == dom) fits.push_back(name);
            if (!fits.empty()) return make_var(env_, fits[pick(rng_, 0, fits.size() - 1)]);
        }
        if (coin(rng_, 0.2)) {
            if (p_.bidirectional && dom.total() == 0 && coin(rng_, 0.5)) {
                std::size_t a = pick(rng_, 0, 1), b = pick(rng_, 0, 1);
                if (a + b > 0) return make_wire({WireSpec::Kind::Unit, a, b});
            }
            if (ExprPtr w = wire(dom)) return w;
        }
        return component(dom, random_cod());
    }

    ExprPtr gen(std::size_t depth, Arity dom) {
        const double leaf_prob = depth >= p_.max_depth ? 1.0 : 0.1 + 0.2 * static_cast<double>(depth);
        if (coin(rng_, leaf_prob)) return leaf(dom);
        ExprPtr e;
        const std::size_t kind = pick(rng_, 0, p_.allow_trace ? 9 : 6);
        if (kind < 4) {
            ExprPtr a = gen(depth + 1, dom);
            e = make_seq(a, gen(depth + 1, a->cod));
        } else if (kind < 7) {
            std::size_t mr = pick(rng_, 0, dom.right), kl = pick(rng_, 0, dom.left);
            ExprPtr a = gen(depth + 1, {mr, dom.left - kl});
            e = make_sum(a, gen(depth + 1, {dom.right - mr, kl}));
        } else {
            std::size_t l = pick(rng_, 1, 2);
            ExprPtr inner = gen(depth + 1, {dom.right + l, dom.left});
            if (inner->cod.right < l) {
                Arity cod{l + pick(rng_, 0, 1), inner->cod.left};
                inner = make_seq(inner, component(inner->cod, cod));
            }
            e = make_trace(l, inner);
        }
        if (coin(rng_, 0.15)) {
            std::string name = "D" + std::to_string(composites_++);
            env_.bind(name, e);
            return make_var(env_, name);
        }
        return e;
    }

    Rng& rng_;
    const DiagramParams& p_;
    Diagram env_;
    std::size_t components_ = 0;
    std::size_t composites_ = 0;
};

bool acceptable(const Diagram& d, const DiagramParams& p) {
    if (count_positions(d, d.main) > p.max_positions) return false;
    OpenMDP flat;
    try {
        flat = flatten(d, d.main);
    } catch (const WireCycle&) {
        return false;
    }
    if (scheduler_count(flat.body) > p.max_schedulers) return false;
    return check_termination(flat.body).certified;
}

}  // namespace

Diagram random_diagram(Rng& rng, Arity dom, const DiagramParams& params) {
    for (;;) {
        Diagram d = DiagramBuilder(rng, params).build(dom);
        if (acceptable(d, params)) return d;
    }
}

Diagram random_diagram(Rng& rng, const DiagramParams& params) {
    for (;;) {
        Arity dom{pick(rng, 1, params.max_ports), 0};
        if (params.bidirectional && coin(rng, 0.5)) dom.left = pick(rng, 0, params.max_ports - 1);
        Diagram d = DiagramBuilder(rng, params).build(dom);
        if (acceptable(d, params)) return d;
    }
}

}  // namespace compmdp
