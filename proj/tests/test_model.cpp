#include <doctest.h>

#include "compmdp/error.hpp"
#include "compmdp/model.hpp"
#include "compmdp/random_models.hpp"
#include "compmdp/termination.hpp"
#include "support/builders.hpp"
#include "support/oracle.hpp"

using namespace compmdp;

TEST_CASE("the task component is valid") {
    CHECK(validate(fixtures::task()).ok());
}

TEST_CASE("validation reports each broken rule") {
    SUBCASE("row summing to 0.9") {
        RoMDP a = fixtures::task();
        a.row(0, 0)[0].prob = 0.1;
        ValidationReport rep = validate(a);
        CHECK(rep.has("row-sum"));
        CHECK_THROWS_AS(require_valid(a, "task"), ValidationError);
    }
    SUBCASE("negative reward") {
        RoMDP a = fixtures::task(-1.0);
        CHECK(validate(a).has("reward"));
    }
    SUBCASE("unmapped entrance") {
        RoMDP a = fixtures::task();
        a.entry[0] = Target{};
        CHECK(validate(a).has("entry"));
    }
    SUBCASE("transition to a missing exit") {
        RoMDP a = fixtures::task();
        a.row(0, 0)[1].to = Target::exit(2);
        CHECK(validate(a).has("target"));
    }
    SUBCASE("probability out of range") {
        RoMDP a = fixtures::task();
        a.row(0, 0) = {{Target::position(0), -0.5}, {Target::exit(1), 1.5}};
        CHECK(validate(a).has("probability"));
    }
    SUBCASE("exit reached from two positions") {
        RoMDP a(1, 1, {"go"});
        a.add_position("x", 0);
        a.add_position("y", 0);
        a.add_edge(0, 0, Target::position(1), 0.5);
        a.add_edge(0, 0, Target::exit(1), 0.5);
        a.add_edge(1, 0, Target::exit(1), 1.0);
        a.entry[0] = Target::position(0);
        CHECK(validate(a).has("unique-exit"));
    }
    SUBCASE("exit reached from one position by two actions") {
        RoMDP a(1, 1, {"alpha", "beta"});
        a.add_position("q", 1);
        a.add_edge(0, 0, Target::exit(1), 1.0);
        a.add_edge(0, 1, Target::position(0), 0.5);
        a.add_edge(0, 1, Target::exit(1), 0.5);
        a.entry[0] = Target::position(0);
        CHECK(validate(a).has("unique-exit"));
    }
    SUBCASE("exit reached from an entrance and a position") {
        RoMDP a(2, 1, {"go"});
        a.add_position("q", 1);
        a.add_edge(0, 0, Target::exit(1), 1.0);
        a.entry = {Target::position(0), Target::exit(1)};
        CHECK(validate(a).has("unique-exit"));
    }
    SUBCASE("duplicate names") {
        RoMDP a(1, 1, {"go", "go"});
        a.add_position("q", 0);
        a.add_position("q", 0);
        a.entry[0] = Target::exit(1);
        ValidationReport rep = validate(a);
        CHECK(rep.has("actions"));
        CHECK(rep.has("positions"));
    }
    SUBCASE("open arity must match the body") {
        OpenMDP o{"t", {1, 1}, {1, 0}, fixtures::task()};
        CHECK(validate(o).has("arity"));
    }
}

TEST_CASE("canonical rows are sorted, merged and free of zeros") {
    RoMDP a(1, 1, {"go"});
    a.add_position("q", 0);
    a.add_edge(0, 0, Target::exit(1), 0.25);
    a.add_edge(0, 0, Target::position(0), 0.5);
    a.add_edge(0, 0, Target::exit(1), 0.25);
    a.add_edge(0, 0, Target::position(0), 0.0);
    a.canonicalize();
    REQUIRE(a.row(0, 0).size() == 2);
    CHECK(a.row(0, 0)[0].to == Target::position(0));
    CHECK(a.row(0, 0)[1].prob == doctest::Approx(0.5));
}

TEST_CASE("normalize_exits restores unique access without changing values") {
    RoMDP a(1, 1, {"alpha", "beta"});
    a.add_position("q", 1);
    a.add_edge(0, 0, Target::exit(1), 1.0);
    a.add_edge(0, 1, Target::position(0), 0.5);
    a.add_edge(0, 1, Target::exit(1), 0.5);
    a.entry[0] = Target::position(0);
    RoMDP n = normalize_exits(a);
    CHECK(validate(n).ok());
    CHECK(n.num_positions() == 2);
    CHECK(n.positions[1] == "acc_exit1");
    // Both schedulers keep their reachability and reward.
    for (std::size_t act = 0; act < 2; ++act) {
        auto before = oracle::solve_with(a, {act});
        auto after = oracle::solve_with(n, {act, 0});
        CHECK(after.P(0, 0) == doctest::Approx(before.P(0, 0)).epsilon(1e-12));
        CHECK(after.R(0, 0) == doctest::Approx(before.R(0, 0)).epsilon(1e-12));
    }
    CHECK(normalize_exits(fixtures::task()) == fixtures::task());
}

TEST_CASE("induced chains fix one action per position") {
    RoMDP a(1, 1, {"alpha", "beta"});
    a.add_position("q", 1);
    a.add_edge(0, 0, Target::exit(1), 1.0);
    a.add_edge(0, 1, Target::position(0), 0.5);
    a.add_edge(0, 1, Target::position(0), 0.5);
    a.entry[0] = Target::position(0);
    RoMC c = induced_mc(a, Scheduler{{0}});
    CHECK(c.is_chain());
    CHECK(c.actions[0] == kChainAction);
    CHECK(c.row(0, 0) == a.row(0, 0));
    CHECK_THROWS_AS(induced_mc(a, Scheduler{{}}), IncompleteScheduler);
    CHECK_THROWS_AS(induced_mc(a, Scheduler{{7}}), IncompleteScheduler);
}

TEST_CASE("scheduler choices only range over enabled actions") {
    RoMDP a(1, 1, {"a", "b"});
    a.add_position("q", 0);
    a.add_position("d", 0);
    a.add_edge(0, 1, Target::exit(1), 1.0);
    a.entry[0] = Target::position(0);
    CHECK(a.choices(0) == std::vector<std::size_t>{1});
    CHECK(a.choices(1) == std::vector<std::size_t>{0});
}

TEST_CASE("isomorphism ignores names and position order") {
    Rng rng(11);
    for (int it = 0; it < 200; ++it) {
        RoMDP a = random_romdp(rng, pick(rng, 0, 2), pick(rng, 0, 2), ModelParams{0, 4});
        // Reverse the position order and rename.
        const std::size_t nq = a.num_positions();
        RoMDP b(a.entrances, a.exits, a.actions);
        for (std::size_t q = 0; q < nq; ++q) b.add_position("z" + std::to_string(q), a.rewards[nq - 1 - q]);
        auto flip = [&](Target t) { return t.is_position() ? Target::position(nq - 1 - t.index) : t; };
        for (std::size_t q = 0; q < nq; ++q)
            for (std::size_t ac = 0; ac < a.num_actions(); ++ac)
                for (const Edge& e : a.row(nq - 1 - q, ac)) b.add_edge(q, ac, flip(e.to), e.prob);
        for (std::size_t i = 0; i < a.entrances; ++i) b.entry[i] = flip(a.entry[i]);
        b.canonicalize();
        REQUIRE(isomorphic(a, b));
        if (nq > 0) {
            RoMDP c = b;
            c.rewards[0] += 1.0;
            CHECK_FALSE(isomorphic(a, c));
        }
    }
}

TEST_CASE("random models are valid and terminating per component") {
    Rng rng(3);
    for (int it = 0; it < 500; ++it) {
        RoMDP a = random_romdp(rng, pick(rng, 0, 3), pick(rng, 0, 3), ModelParams{0, 6});
        CHECK(validate(a).ok());
        CHECK(check_termination(a).certified);
    }
}
