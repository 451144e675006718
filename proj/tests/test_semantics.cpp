#include <doctest.h>

#include <cmath>
#include <memory>

#include "compmdp/algebra.hpp"
#include "compmdp/error.hpp"
#include "compmdp/random_models.hpp"
#include "compmdp/selftest.hpp"
#include "compmdp/semantics.hpp"
#include "support/builders.hpp"
#include "support/oracle.hpp"

using namespace compmdp;

namespace {

OpenMDP rightward(const RoMDP& a, const std::string& name = "c") {
    OpenMDP o = twist_to_o(a, {a.entrances, 0}, {a.exits, 0});
    o.name = name;
    return o;
}

ExprPtr prim(const std::string& name, const RoMDP& a) {
    return make_prim(name, std::make_shared<const OpenMDP>(rightward(a, name)));
}

// q with reward 1: alpha leaves at once, beta loops with probability 1/2.
// Exit 1 is reached by both actions, so this is not a valid component.
RoMDP two_action_loop() {
    RoMDP a(1, 1, {"alpha", "beta"});
    a.add_position("q", 1);
    a.add_edge(0, 0, Target::exit(1), 1.0);
    a.add_edge(0, 1, Target::position(0), 0.5);
    a.add_edge(0, 1, Target::exit(1), 0.5);
    a.entry[0] = Target::position(0);
    return a;
}

SemanticElement element(double p, double r, Tag tag = nullptr) {
    SemanticArrowMC v(1, 1);
    v.p(0, 0) = p;
    v.r(0, 0) = r;
    return {v, tag};
}

SemanticArrow front(std::vector<SemanticElement> e) { return SemanticArrow{1, 1, std::move(e), {{}}}; }

EvalConfig no_prune() {
    EvalConfig c;
    c.prune = false;
    return c;
}

}  // namespace

TEST_CASE("lifting enumerates memoryless schedulers") {
    RoMDP a = two_action_loop();
    SemanticArrow all = lift_romdp(a, "loop", no_prune());
    REQUIRE(all.elements.size() == 2);
    CHECK(all.elements[0].value.r(0, 0) == doctest::Approx(1.0));
    CHECK(all.elements[1].value.p(0, 0) == doctest::Approx(1.0));
    CHECK(all.elements[1].value.r(0, 0) == doctest::Approx(2.0));

    // Pruning keeps beta only, which dominates alpha.
    SemanticArrow pruned = lift_romdp(a, "loop", EvalConfig{});
    REQUIRE(pruned.elements.size() == 1);
    CHECK(pruned.elements[0].tag->scheduler.choice == std::vector<std::size_t>{1});

    // Same values after restoring unique exit access.
    SemanticArrow norm = lift_romdp(normalize_exits(a), "loop", EvalConfig{});
    REQUIRE(norm.elements.size() == 1);
    CHECK(norm.elements[0].value.r(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("pruning drops dominated elements and duplicates") {
    Tag t1 = make_leaf_tag("x", Scheduler{{0}});
    Tag t2 = make_leaf_tag("x", Scheduler{{1}});
    SemanticArrow f = front({element(0.5, 1.0, t1), element(0.4, 2.0, t1), element(0.3, 0.5, t1)});
    CHECK(prune(f).elements.size() == 2);

    SemanticArrow dup = front({element(0.5, 1.0, t2), element(0.5, 1.0, t1)});
    SemanticArrow d = prune(dup);
    REQUIRE(d.elements.size() == 1);
    CHECK(compare_tags(d.elements[0].tag, t1) == 0);

    SemanticArrow near = front({element(0.5, 1.0, t1), element(0.5 + 1e-11, 1.0 - 1e-11, t2)});
    CHECK(prune(near).elements.size() == 2);
    CHECK(prune(near, 1e-9).elements.size() == 1);
}

TEST_CASE("extraction maximizes reward, then probability, then the smaller tag") {
    Tag t1 = make_leaf_tag("x", Scheduler{{0}});
    Tag t2 = make_leaf_tag("x", Scheduler{{1}});
    SemanticArrow f = front({element(0.5, 2.0, t1), element(0.9, 2.0, t2), element(1.0, 1.0, t1)});
    Optimum o = extract_optimal(f, 1, 1);
    CHECK(o.p == 0.9);
    CHECK(o.r == 2.0);
    CHECK(o.index == 1);

    SemanticArrow tie = front({element(0.5, 2.0, t2), element(0.5, 2.0, t1)});
    CHECK(extract_optimal(tie, 1, 1).index == 1);

    CHECK_THROWS_AS(extract_optimal(front({}), 1, 1), EmptyFront);
    CHECK_THROWS_AS(extract_optimal(f, 2, 1), ArityMismatch);
}

TEST_CASE("too many schedulers is an error") {
    EvalConfig cfg;
    cfg.max_schedulers = 1;
    CHECK_THROWS_AS(lift_romdp(two_action_loop(), "x", cfg), SchedulerExplosion);
    CHECK_NOTHROW(lift_romdp(fixtures::task(), "x", cfg));
}

TEST_CASE("memoization solves each binding once") {
    Diagram env;
    env.bind("T", prim("task", fixtures::task()));
    ExprPtr t = make_var(env, "T");
    SolveStats stats;
    SemanticArrow f = solve_diagram(env, make_seq(t, t), EvalConfig{}, &stats);
    CHECK(stats.component_solves == 1);
    CHECK(stats.cache_hits == 1);
    CHECK(extract_optimal(f, 1, 1).r == doctest::Approx(10.0));

    EvalConfig off;
    off.memoization = false;
    SolveStats s2;
    solve_diagram(env, make_seq(t, t), off, &s2);
    CHECK(s2.component_solves == 2);
    CHECK(s2.cache_hits == 0);

    // Distinct names are solved separately even when their content is equal.
    env.bind("U", prim("task", fixtures::task()));
    env.bind("V", prim("task", fixtures::task()));
    SolveStats s3;
    solve_diagram(env, make_seq(make_seq(t, make_var(env, "U")), make_var(env, "V")), EvalConfig{},
                  &s3);
    CHECK(s3.component_solves == 3);
    CHECK(s3.cache_hits == 0);
}

TEST_CASE("freezing a single-exit block keeps the optimal value") {
    Diagram env;
    env.bind("L", prim("loop", normalize_exits(two_action_loop())));
    env.bind("T", prim("task", fixtures::task()));
    ExprPtr body = make_seq(make_var(env, "L"), make_var(env, "T"));
    Optimum open = extract_optimal(solve_diagram(env, body, EvalConfig{}), 1, 1);
    SemanticArrow frozen = solve_diagram(env, make_freeze(body), EvalConfig{});
    REQUIRE(frozen.elements.size() == 1);
    Optimum fz = extract_optimal(frozen, 1, 1);
    CHECK(fz.r == doctest::Approx(open.r).epsilon(1e-12));
    CHECK(fz.r == doctest::Approx(7.0).epsilon(1e-12));

    ExprPtr two = make_sum(make_var(env, "T"), make_var(env, "T"));
    CHECK_THROWS_AS(solve_diagram(env, make_freeze(two), EvalConfig{}), FrozenMultiExit);
}

TEST_CASE("frozen random blocks match the compositional optimum") {
    Rng rng(61);
    DiagramParams dp;
    dp.max_depth = 3;
    std::size_t tried = 0, uniform = 0;
    while (tried < 300) {
        Diagram d = random_diagram(rng, Arity{pick(rng, 1, 2), 0}, dp);
        if (d.main->cod.right != 1) continue;
        ++tried;
        SemanticArrow open = solve_diagram(d, d.main, EvalConfig{});
        SemanticArrow frozen = solve_diagram(d, make_freeze(d.main), EvalConfig{});
        RoMDP flat = flatten(d, d.main).body;

        // Does one scheduler attain the optimum from every entrance?
        auto best = oracle::brute_force(flat);
        bool exists = false;
        oracle::for_each_scheduler(flat, [&](const std::vector<std::size_t>& ch) {
            oracle::Values v = oracle::solve_with(flat, ch);
            bool all = true;
            for (std::size_t i = 0; i < flat.entrances; ++i) all = all && v.r[i] >= best[i].r - 1e-9;
            exists = exists || all;
        });
        uniform += exists;
        for (std::size_t i = 1; i <= open.m; ++i) {
            const double fz = extract_optimal(frozen, i, 1).r, op = extract_optimal(open, i, 1).r;
            CHECK(fz <= op + 1e-9 * (1 + op));
            if (exists) CHECK(fz == doctest::Approx(op).epsilon(1e-9));
        }
    }
    CHECK(uniform > 250);
}

TEST_CASE("a single scheduler cannot always be optimal from every entrance") {
    // Entrance 1 collects 100 before s, entrance 2 starts at s. From s, "safe"
    // goes straight to the last position and "risky" adds a bonus of 10 but
    // loses half the mass.
    RoMDP a(2, 1, {"risky", "safe"});
    a.add_position("pre", 100);
    a.add_position("s", 0);
    a.add_position("bonus", 10);
    a.add_position("one", 1);
    a.add_position("lost", 0);
    a.add_edge(0, 1, Target::position(1), 1.0);
    a.add_edge(1, 0, Target::position(2), 0.5);
    a.add_edge(1, 0, Target::position(4), 0.5);
    a.add_edge(1, 1, Target::position(3), 1.0);
    a.add_edge(2, 1, Target::position(3), 1.0);
    a.add_edge(3, 1, Target::exit(1), 1.0);
    a.entry = {Target::position(0), Target::position(1)};
    a.canonicalize();
    REQUIRE(validate(a).ok());

    Diagram env;
    env.bind("A", prim("a", a));
    SemanticArrow open = solve_diagram(env, make_var(env, "A"), EvalConfig{});
    CHECK(extract_optimal(open, 1, 1).r == doctest::Approx(101.0));
    CHECK(extract_optimal(open, 2, 1).r == doctest::Approx(5.5));
    SemanticArrow frozen = solve_diagram(env, make_freeze(make_var(env, "A")), EvalConfig{});
    const double r1 = extract_optimal(frozen, 1, 1).r, r2 = extract_optimal(frozen, 2, 1).r;
    CHECK(((r1 == doctest::Approx(101.0) && r2 == doctest::Approx(1.0)) ||
           (r1 == doctest::Approx(55.5) && r2 == doctest::Approx(5.5))));
}

TEST_CASE("witness schedulers reproduce the reported value") {
    Rng rng(67);
    for (int it = 0; it < 50; ++it) {
        DiagramParams dp;
        dp.bidirectional = it % 2 == 1;
        Diagram d = random_diagram(rng, dp);
        SemanticArrow f = solve_diagram(d, d.main, EvalConfig{});
        OpenMDP flat = flatten(d, d.main);
        for (std::size_t i = 1; i <= f.m; ++i)
            for (std::size_t j = 1; j <= f.n; ++j) {
                Optimum o = extract_optimal(f, i, j);
                Scheduler tau = witness_scheduler(flat.body, witness_assignments(d, d.main, o.tag));
                SemanticArrowMC v = solve_under(flat.body, tau);
                CHECK(v.p(i - 1, j - 1) == doctest::Approx(o.p).epsilon(1e-9));
                CHECK(v.r(i - 1, j - 1) == doctest::Approx(o.r).epsilon(1e-9));
            }
    }
}

TEST_CASE("results do not depend on the thread count") {
    Rng rng(71);
    for (int it = 0; it < 20; ++it) {
        Diagram d = random_diagram(rng);
        EvalConfig one, four;
        four.threads = 4;
        SemanticArrow a = solve_diagram(d, d.main, one), b = solve_diagram(d, d.main, four);
        REQUIRE(a.elements.size() == b.elements.size());
        for (std::size_t k = 0; k < a.elements.size(); ++k) {
            CHECK(a.elements[k].value == b.elements[k].value);
            CHECK(to_string(a.elements[k].tag) == to_string(b.elements[k].tag));
        }
    }
}

TEST_CASE("solving a diagram equals lifting its flattening") {
    for (bool bidirectional : {false, true}) {
        Rng rng(bidirectional ? 79 : 73);
        DiagramParams dp;
        dp.bidirectional = bidirectional;
        for (int it = 0; it < 100; ++it) {
            Diagram d = random_diagram(rng, dp);
            SemanticArrow comp = solve_diagram(d, d.main, EvalConfig{});
            SemanticArrow mono = lift_romdp(flatten(d, d.main).body, "flat", EvalConfig{});
            std::string why;
            CHECK_MESSAGE(fronts_equivalent(comp, mono, 1e-9, &why), why);
        }
    }
}

TEST_CASE("pruning never changes the optimum") {
    Rng rng(83);
    DiagramParams dp;
    dp.bidirectional = true;
    for (int it = 0; it < 100; ++it) {
        Diagram d = random_diagram(rng, dp);
        SemanticArrow on = solve_diagram(d, d.main, EvalConfig{});
        SemanticArrow off = solve_diagram(d, d.main, no_prune());
        CHECK(on.elements.size() <= off.elements.size());
        for (std::size_t i = 1; i <= on.m; ++i)
            for (std::size_t j = 1; j <= on.n; ++j) {
                Optimum a = extract_optimal(on, i, j), b = extract_optimal(off, i, j);
                CHECK(std::fabs(a.p - b.p) <= 1e-12);
                CHECK(std::fabs(a.r - b.r) <= 1e-12);
            }
    }
}

TEST_CASE("compositional optimum matches brute force on the flattening") {
    Rng rng(89);
    for (int it = 0; it < 60; ++it) {
        Diagram d = random_diagram(rng);
        SemanticArrow f = solve_diagram(d, d.main, EvalConfig{});
        RoMDP flat = flatten(d, d.main).body;
        auto best = oracle::brute_force(flat);
        for (std::size_t i = 1; i <= f.m; ++i)
            for (std::size_t j = 1; j <= f.n; ++j) {
                Optimum o = extract_optimal(f, i, j);
                CHECK(oracle::matches_optimum(best[(i - 1) * f.n + j - 1], o.p, o.r, 1e-9));
            }
    }
}
