#include "compmdp/selftest.hpp"

#include <cmath>
#include <functional>
#include <utility>

#include "compmdp/algebra.hpp"
#include "compmdp/error.hpp"
#include "compmdp/int_construction.hpp"
#include "compmdp/random_models.hpp"

namespace compmdp {

namespace {

double distance(const SemanticArrowMC& a, const SemanticArrowMC& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.m; ++i)
        for (std::size_t j = 0; j < a.n; ++j) {
            d = std::max(d, std::fabs(a.p(i, j) - b.p(i, j)));
            d = std::max(d, std::fabs(a.r(i, j) - b.r(i, j)));
        }
    return d;
}

bool dominates(const SemanticArrowMC& g, const SemanticArrowMC& e, double tol) {
    for (std::size_t i = 0; i < e.m; ++i)
        for (std::size_t j = 0; j < e.n; ++j)
            if (g.p(i, j) < e.p(i, j) - tol || g.r(i, j) < e.r(i, j) - tol) return false;
    return true;
}

bool covered(const SemanticArrow& f, const SemanticArrow& g, double tol, std::string* why,
             const char* side) {
    for (std::size_t k = 0; k < f.elements.size(); ++k) {
        const auto& e = f.elements[k].value;
        bool ok = false;
        for (const auto& x : g.elements)
            if (distance(e, x.value) <= tol) ok = true;
        if (ok) continue;
        bool other = false, own = false;
        for (const auto& x : g.elements)
            if (dominates(x.value, e, tol)) other = true;
        for (std::size_t l = 0; l < f.elements.size(); ++l)
            if (l != k && dominates(f.elements[l].value, e, tol)) own = true;
        if (other && own) continue;
        if (why) *why = std::string(side) + " element " + std::to_string(k) + " has no counterpart";
        return false;
    }
    return true;
}

}  // namespace

bool fronts_equivalent(const SemanticArrow& f, const SemanticArrow& g, double tol,
                       std::string* why) {
    if (f.m != g.m || f.n != g.n) {
        if (why)
            *why = "arity " + std::to_string(f.m) + "->" + std::to_string(f.n) + " vs " +
                   std::to_string(g.m) + "->" + std::to_string(g.n);
        return false;
    }
    return covered(f, g, tol, why, "left") && covered(g, f, tol, why, "right");
}

namespace {

const std::vector<std::string> kActions{"a", "b"};

struct StructOps {
    using Arrow = RoMDP;
    RoMDP identity(std::size_t n) const { return identity_wire(n, kActions); }
    RoMDP swap(std::size_t m, std::size_t n) const { return swap_wire(m, n, kActions); }
    RoMDP seq(const RoMDP& a, const RoMDP& b) const { return seq_ro(a, b); }
    RoMDP sum(const RoMDP& a, const RoMDP& b) const { return sum_ro(a, b); }
    RoMDP trace(std::size_t l, const RoMDP& a) const { return trace_ro(l, a); }
};

struct SemOps {
    using Arrow = SemanticArrow;
    EvalConfig cfg;
    SemanticArrow identity(std::size_t n) const { return identity_sem(n); }
    SemanticArrow swap(std::size_t m, std::size_t n) const { return swap_sem(m, n); }
    SemanticArrow seq(const SemanticArrow& a, const SemanticArrow& b) const {
        return seq_sem(a, b, cfg);
    }
    SemanticArrow sum(const SemanticArrow& a, const SemanticArrow& b) const {
        return sum_sem(a, b, cfg);
    }
    SemanticArrow trace(std::size_t l, const SemanticArrow& a) const { return trace_sem(l, a, cfg); }
};

// Bidirectional arrows carry their types explicitly on the semantic side.
struct SemO {
    SemanticArrow a;
    Arity dom, cod;
};

struct BiStructOps {
    OpenMDP identity(Arity x) const { return identity_o(x, kActions); }
    OpenMDP unit(Arity x) const { return unit_o(x, kActions); }
    OpenMDP counit(Arity x) const { return counit_o(x, kActions); }
    OpenMDP seq(const OpenMDP& a, const OpenMDP& b) const { return seq_o(a, b); }
    OpenMDP sum(const OpenMDP& a, const OpenMDP& b) const { return sum_o(a, b); }
};

struct BiSemOps {
    EvalConfig cfg;
    SemO identity(Arity x) const { return {identity_sem(x.total()), x, x}; }
    SemO unit(Arity x) const {
        const std::size_t t = x.total();
        return {identity_sem(t), {0, 0}, {t, t}};
    }
    SemO counit(Arity x) const {
        const std::size_t t = x.total();
        return {identity_sem(t), {t, t}, {0, 0}};
    }
    SemO seq(const SemO& f, const SemO& g) const {
        if (f.cod != g.dom) throw ArityMismatch("bidirectional composition");
        return {seq_sem_o(f.a, f.dom, f.cod, g.a, g.cod, cfg), f.dom, g.cod};
    }
    SemO sum(const SemO& f, const SemO& g) const {
        return {sum_sem_o(f.a, f.dom, f.cod, g.a, g.dom, g.cod, cfg), int_sum_dom(f.dom, g.dom),
                int_sum_cod(f.cod, g.cod)};
    }
};

// Leaves are drawn per instance; `k` holds the integer parameters of the law.
struct Instance {
    std::vector<RoMDP> leaves;
    std::vector<OpenMDP> oleaves;
    std::vector<std::size_t> k;
};

using StructLaw = std::function<std::pair<RoMDP, RoMDP>(const StructOps&, const std::vector<RoMDP>&,
                                                        const std::vector<std::size_t>&)>;
using SemLaw = std::function<std::pair<SemanticArrow, SemanticArrow>(
    const SemOps&, const std::vector<SemanticArrow>&, const std::vector<std::size_t>&)>;
using BiStructLaw = std::function<std::pair<OpenMDP, OpenMDP>(
    const BiStructOps&, const std::vector<OpenMDP>&, const std::vector<std::size_t>&)>;
using BiSemLaw = std::function<std::pair<SemO, SemO>(const BiSemOps&, const std::vector<SemO>&,
                                                     const std::vector<std::size_t>&)>;

struct Law {
    std::string name;
    bool wire_only = false;
    std::function<Instance(Rng&)> draw;
    StructLaw structural;
    SemLaw semantic;
    BiStructLaw bi_structural;
    BiSemLaw bi_semantic;
};

// One generic body serves both the structural and the semantic instantiation.
template <class Body>
Law law(std::string name, bool wire_only, std::function<Instance(Rng&)> draw, Body body) {
    Law l{std::move(name), wire_only, std::move(draw), {}, {}, {}, {}};
    l.structural = [body](const StructOps& o, const std::vector<RoMDP>& x,
                          const std::vector<std::size_t>& k) { return body(o, x, k); };
    l.semantic = [body](const SemOps& o, const std::vector<SemanticArrow>& x,
                        const std::vector<std::size_t>& k) { return body(o, x, k); };
    return l;
}

template <class Body>
Law bilaw(std::string name, std::function<Instance(Rng&)> draw, Body body) {
    Law l{std::move(name), false, std::move(draw), {}, {}, {}, {}};
    l.bi_structural = [body](const BiStructOps& o, const std::vector<OpenMDP>& x,
                             const std::vector<std::size_t>& k) { return body(o, x, k); };
    l.bi_semantic = [body](const BiSemOps& o, const std::vector<SemO>& x,
                           const std::vector<std::size_t>& k) { return body(o, x, k); };
    return l;
}

const ModelParams kLeafParams{0, 2};

RoMDP leaf(Rng& rng, std::size_t m, std::size_t n) { return random_romdp(rng, m, n, kLeafParams); }
std::size_t port(Rng& rng) { return pick(rng, 0, 2); }
Arity bi_port(Rng& rng) { return {pick(rng, 0, 2), pick(rng, 0, 1)}; }
OpenMDP bi_leaf(Rng& rng, Arity dom, Arity cod) { return random_omdp(rng, dom, cod, kLeafParams); }

std::vector<Law> rightward_laws() {
    std::vector<Law> laws;
    auto wires = [](std::size_t count) {
        return [count](Rng& rng) {
            Instance in;
            for (std::size_t i = 0; i < count; ++i) in.k.push_back(pick(rng, 0, 3));
            return in;
        };
    };

    laws.push_back(law(";-Unit", false,
                       [](Rng& rng) {
                           std::size_t m = port(rng), n = port(rng);
                           return Instance{{leaf(rng, m, n)}, {}, {m, n}};
                       },
                       [](const auto& o, const auto& x, const auto& k) {
                           return std::pair{o.seq(o.seq(o.identity(k[0]), x[0]), o.identity(k[1])),
                                            x[0]};
                       }));
    laws.push_back(law(";-Assoc", false,
                       [](Rng& rng) {
                           std::size_t a = port(rng), b = port(rng), c = port(rng), d = port(rng);
                           return Instance{{leaf(rng, a, b), leaf(rng, b, c), leaf(rng, c, d)}, {}, {}};
                       },
                       [](const auto& o, const auto& x, const auto&) {
                           return std::pair{o.seq(x[0], o.seq(x[1], x[2])),
                                            o.seq(o.seq(x[0], x[1]), x[2])};
                       }));
    laws.push_back(law("(+)-Assoc", false,
                       [](Rng& rng) {
                           Instance in;
                           for (int i = 0; i < 3; ++i) in.leaves.push_back(leaf(rng, port(rng), port(rng)));
                           return in;
                       },
                       [](const auto& o, const auto& x, const auto&) {
                           return std::pair{o.sum(o.sum(x[0], x[1]), x[2]),
                                            o.sum(x[0], o.sum(x[1], x[2]))};
                       }));
    laws.push_back(law("(+)-Unit", false,
                       [](Rng& rng) { return Instance{{leaf(rng, port(rng), port(rng))}, {}, {}}; },
                       [](const auto& o, const auto& x, const auto&) {
                           return std::pair{o.sum(o.identity(0), o.sum(x[0], o.identity(0))), x[0]};
                       }));
    laws.push_back(law("Bifunc1", true, wires(2), [](const auto& o, const auto&, const auto& k) {
        return std::pair{o.sum(o.identity(k[0]), o.identity(k[1])), o.identity(k[0] + k[1])};
    }));
    laws.push_back(law("Bifunc2", false,
                       [](Rng& rng) {
                           std::size_t a = port(rng), b = port(rng), c = port(rng);
                           std::size_t d = port(rng), e = port(rng), f = port(rng);
                           return Instance{
                               {leaf(rng, a, b), leaf(rng, d, e), leaf(rng, b, c), leaf(rng, e, f)},
                               {},
                               {}};
                       },
                       [](const auto& o, const auto& x, const auto&) {
                           return std::pair{o.seq(o.sum(x[0], x[1]), o.sum(x[2], x[3])),
                                            o.sum(o.seq(x[0], x[2]), o.seq(x[1], x[3]))};
                       }));
    laws.push_back(law("Swap1", true, wires(1), [](const auto& o, const auto&, const auto& k) {
        return std::pair{o.swap(k[0], 0), o.identity(k[0])};
    }));
    laws.push_back(law("Swap2", true, wires(3), [](const auto& o, const auto&, const auto& k) {
        const std::size_t l = k[0], m = k[1], n = k[2];
        return std::pair{o.swap(l, m + n), o.seq(o.sum(o.swap(l, m), o.identity(n)),
                                                 o.sum(o.identity(m), o.swap(l, n)))};
    }));
    laws.push_back(law("Swap3", true, wires(2), [](const auto& o, const auto&, const auto& k) {
        return std::pair{o.seq(o.swap(k[0], k[1]), o.swap(k[1], k[0])), o.identity(k[0] + k[1])};
    }));
    laws.push_back(law("Swap-Naturality", false,
                       [](Rng& rng) {
                           std::size_t a = port(rng), b = port(rng), c = port(rng), d = port(rng);
                           return Instance{{leaf(rng, a, b), leaf(rng, c, d)}, {}, {a, b, c, d}};
                       },
                       [](const auto& o, const auto& x, const auto& k) {
                           return std::pair{o.seq(o.sum(x[0], x[1]), o.swap(k[1], k[3])),
                                            o.seq(o.swap(k[0], k[2]), o.sum(x[1], x[0]))};
                       }));
    laws.push_back(law("Vanishing1", true, wires(1), [](const auto& o, const auto&, const auto& k) {
        return std::pair{o.trace(0, o.identity(k[0])), o.identity(k[0])};
    }));
    laws.push_back(law("Vanishing2", false,
                       [](Rng& rng) {
                           std::size_t a = pick(rng, 1, 2), b = pick(rng, 1, 2);
                           std::size_t m = port(rng), n = port(rng);
                           return Instance{{leaf(rng, a + b + m, a + b + n)}, {}, {a, b}};
                       },
                       [](const auto& o, const auto& x, const auto& k) {
                           return std::pair{o.trace(k[0] + k[1], x[0]),
                                            o.trace(k[0], o.trace(k[1], x[0]))};
                       }));
    laws.push_back(law("Superposing", false,
                       [](Rng& rng) {
                           std::size_t l = pick(rng, 1, 2);
                           return Instance{{leaf(rng, l + port(rng), l + port(rng)),
                                            leaf(rng, port(rng), port(rng))},
                                           {},
                                           {l}};
                       },
                       [](const auto& o, const auto& x, const auto& k) {
                           return std::pair{o.sum(o.trace(k[0], x[0]), x[1]),
                                            o.trace(k[0], o.sum(x[0], x[1]))};
                       }));
    laws.push_back(law("Yanking", true, wires(1), [](const auto& o, const auto&, const auto& k) {
        return std::pair{o.trace(k[0], o.swap(k[0], k[0])), o.identity(k[0])};
    }));
    laws.push_back(law("Naturality1", false,
                       [](Rng& rng) {
                           std::size_t l = pick(rng, 1, 2), m = port(rng), n = port(rng), p = port(rng);
                           return Instance{{leaf(rng, l + m, l + n), leaf(rng, p, m)}, {}, {l}};
                       },
                       [](const auto& o, const auto& x, const auto& k) {
                           return std::pair{o.trace(k[0], o.seq(o.sum(o.identity(k[0]), x[1]), x[0])),
                                            o.seq(x[1], o.trace(k[0], x[0]))};
                       }));
    laws.push_back(law("Naturality2", false,
                       [](Rng& rng) {
                           std::size_t l = pick(rng, 1, 2), m = port(rng), n = port(rng), p = port(rng);
                           return Instance{{leaf(rng, l + m, l + n), leaf(rng, n, p)}, {}, {l}};
                       },
                       [](const auto& o, const auto& x, const auto& k) {
                           return std::pair{o.trace(k[0], o.seq(x[0], o.sum(o.identity(k[0]), x[1]))),
                                            o.seq(o.trace(k[0], x[0]), x[1])};
                       }));
    laws.push_back(law("Dinaturality", false,
                       [](Rng& rng) {
                           std::size_t u = pick(rng, 1, 2), v = pick(rng, 1, 2);
                           std::size_t m = port(rng), n = port(rng);
                           return Instance{{leaf(rng, u + m, v + n), leaf(rng, v, u)}, {}, {u, v, m, n}};
                       },
                       [](const auto& o, const auto& x, const auto& k) {
                           return std::pair{
                               o.trace(k[0], o.seq(x[0], o.sum(x[1], o.identity(k[3])))),
                               o.trace(k[1], o.seq(o.sum(x[1], o.identity(k[2])), x[0]))};
                       }));
    return laws;
}

std::vector<Law> bidirectional_laws() {
    std::vector<Law> laws;
    laws.push_back(bilaw("Int ;-Unit",
                         [](Rng& rng) {
                             Arity a = bi_port(rng), b = bi_port(rng);
                             return Instance{{}, {bi_leaf(rng, a, b)}, {}};
                         },
                         [](const auto& o, const auto& x, const auto&) {
                             return std::pair{o.seq(o.seq(o.identity(x[0].dom), x[0]),
                                                    o.identity(x[0].cod)),
                                              x[0]};
                         }));
    laws.push_back(bilaw("Int ;-Assoc",
                         [](Rng& rng) {
                             Arity a = bi_port(rng), b = bi_port(rng), c = bi_port(rng),
                                   d = bi_port(rng);
                             return Instance{
                                 {}, {bi_leaf(rng, a, b), bi_leaf(rng, b, c), bi_leaf(rng, c, d)}, {}};
                         },
                         [](const auto& o, const auto& x, const auto&) {
                             return std::pair{o.seq(x[0], o.seq(x[1], x[2])),
                                              o.seq(o.seq(x[0], x[1]), x[2])};
                         }));
    laws.push_back(bilaw("Int (+)-Assoc",
                         [](Rng& rng) {
                             Instance in;
                             for (int i = 0; i < 3; ++i)
                                 in.oleaves.push_back(bi_leaf(rng, bi_port(rng), bi_port(rng)));
                             return in;
                         },
                         [](const auto& o, const auto& x, const auto&) {
                             return std::pair{o.sum(o.sum(x[0], x[1]), x[2]),
                                              o.sum(x[0], o.sum(x[1], x[2]))};
                         }));
    laws.push_back(bilaw("Int Bifunc2",
                         [](Rng& rng) {
                             Arity a = bi_port(rng), b = bi_port(rng), c = bi_port(rng);
                             Arity d = bi_port(rng), e = bi_port(rng), f = bi_port(rng);
                             return Instance{{},
                                             {bi_leaf(rng, a, b), bi_leaf(rng, d, e), bi_leaf(rng, b, c),
                                              bi_leaf(rng, e, f)},
                                             {}};
                         },
                         [](const auto& o, const auto& x, const auto&) {
                             return std::pair{o.seq(o.sum(x[0], x[1]), o.sum(x[2], x[3])),
                                              o.sum(o.seq(x[0], x[2]), o.seq(x[1], x[3]))};
                         }));
    laws.push_back(bilaw("Int Snake",
                         [](Rng& rng) {
                             return Instance{{}, {}, {pick(rng, 1, 3), pick(rng, 0, 1)}};
                         },
                         [](const auto& o, const auto&, const auto& k) {
                             Arity x{k[0], 0};
                             return std::pair{o.seq(o.sum(o.unit(x), o.identity(x)),
                                                    o.sum(o.identity(x), o.counit(x))),
                                              o.identity(x)};
                         }));
    laws.push_back(bilaw("Int Snake-Component",
                         [](Rng& rng) {
                             std::size_t t = pick(rng, 1, 2);
                             return Instance{{}, {bi_leaf(rng, bi_port(rng), {t, 0})}, {t}};
                         },
                         [](const auto& o, const auto& x, const auto& k) {
                             Arity y{k[0], 0};
                             auto snake = o.seq(o.sum(o.unit(y), o.identity(y)),
                                                o.sum(o.identity(y), o.counit(y)));
                             return std::pair{o.seq(x[0], snake), x[0]};
                         }));
    return laws;
}

SemanticArrow lift(const RoMDP& a, std::size_t k, const EvalConfig& cfg) {
    return lift_romdp(a, "x" + std::to_string(k), cfg);
}

void record(AxiomReport& rep, bool structural_ok, bool semantic_ok, const std::string& why,
            std::size_t instance) {
    if (!structural_ok) ++rep.structural_failures;
    if (!semantic_ok) ++rep.semantic_failures;
    if ((!structural_ok || !semantic_ok) && rep.first_failure.empty())
        rep.first_failure = "instance " + std::to_string(instance) + ": " +
                            (!structural_ok ? "not isomorphic" : "fronts differ (" + why + ")");
}

}  // namespace

std::vector<AxiomReport> run_axiom_suite(const SelftestConfig& cfg) {
    EvalConfig ecfg;
    StructOps so;
    SemOps sem{ecfg};
    BiStructOps bso;
    BiSemOps bsem{ecfg};
    std::vector<Law> laws = rightward_laws();
    if (cfg.bidirectional)
        for (Law& l : bidirectional_laws()) laws.push_back(std::move(l));

    std::vector<AxiomReport> out;
    for (std::size_t li = 0; li < laws.size(); ++li) {
        const Law& law = laws[li];
        AxiomReport rep;
        rep.name = law.name;
        rep.wire_only = law.wire_only;
        Rng rng(cfg.seed * 1000003u + li);
        while (rep.instances < cfg.instances) {
            Instance in = law.draw(rng);
            try {
                bool iso = true, same = true;
                std::string why;
                if (law.structural) {
                    auto [lhs, rhs] = law.structural(so, in.leaves, in.k);
                    std::vector<SemanticArrow> sl;
                    for (std::size_t k = 0; k < in.leaves.size(); ++k)
                        sl.push_back(lift(in.leaves[k], k, ecfg));
                    auto [sl_lhs, sl_rhs] = law.semantic(sem, sl, in.k);
                    iso = isomorphic(lhs, rhs);
                    same = fronts_equivalent(sl_lhs, sl_rhs, cfg.tolerance, &why);
                } else {
                    auto [lhs, rhs] = law.bi_structural(bso, in.oleaves, in.k);
                    std::vector<SemO> sl;
                    for (std::size_t k = 0; k < in.oleaves.size(); ++k)
                        sl.push_back({lift(in.oleaves[k].body, k, ecfg), in.oleaves[k].dom,
                                      in.oleaves[k].cod});
                    auto [sl_lhs, sl_rhs] = law.bi_semantic(bsem, sl, in.k);
                    iso = lhs.dom == rhs.dom && lhs.cod == rhs.cod && isomorphic(lhs.body, rhs.body);
                    same = sl_lhs.dom == sl_rhs.dom && sl_lhs.cod == sl_rhs.cod &&
                           fronts_equivalent(sl_lhs.a, sl_rhs.a, cfg.tolerance, &why);
                }
                if (!cfg.structural_everywhere && !law.wire_only) iso = true;
                record(rep, iso, same, why, rep.instances);
                ++rep.instances;
            } catch (const WireCycle&) {
                ++rep.redrawn;
            }
        }
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace compmdp
