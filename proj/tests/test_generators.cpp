#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "compmdp/diagram.hpp"
#include "compmdp/generators.hpp"
#include "compmdp/semantics.hpp"
#include "compmdp/termination.hpp"
#include "support/files.hpp"

using namespace compmdp;

namespace {

std::size_t count_lets(const GeneratedFiles& files) {
    std::size_t n = 0;
    for (const auto& [name, text] : files) {
        if (looks_like_component(text)) continue;
        for (std::size_t at = text.find("let "); at != std::string::npos; at = text.find("let ", at + 1))
            if (at == 0 || text[at - 1] == '\n') ++n;
    }
    return n;
}

struct Run {
    Optimum opt;
    SolveStats stats;
};

Run solve(const GeneratedFiles& files) {
    Diagram d = fixtures::parse_generated(files);
    Run run;
    SemanticArrow f = solve_diagram(d, d.main, EvalConfig{}, &run.stats);
    run.opt = extract_optimal(f, d.entrance.value_or(1), d.exit.value_or(1));
    return run;
}

}  // namespace

TEST_CASE("patrol position counts") {
    PatrolParams p;
    p.tasks = 2;
    p.rooms = 2;
    p.floors = 1;
    p.buildings = 1;
    Diagram d = fixtures::parse_generated(generate_patrol(p));
    CHECK(count_positions(d, d.main) == 9);
    CHECK(flatten(d, d.main).body.num_positions() == 9);
    CHECK(patrol_positions(p) == 9);

    for (std::size_t t : {1, 3})
        for (std::size_t r : {1, 2, 4})
            for (std::size_t f : {1, 2})
                for (std::size_t b : {1, 3}) {
                    PatrolParams q{t, r, f, b};
                    Diagram e = fixtures::parse_generated(generate_patrol(q));
                    CHECK(count_positions(e, e.main) == patrol_positions(q));
                    CHECK(flatten(e, e.main).body.num_positions() == patrol_positions(q));
                }
}

TEST_CASE("generated components are valid and terminating") {
    std::vector<GeneratedFiles> all{generate_patrol({}), generate_wholesale({}), generate_packets({10, 4})};
    for (const auto& files : all)
        for (const auto& [name, text] : files)
            if (looks_like_component(text)) {
                OpenMDP c = parse_component(text);
                CHECK_MESSAGE(check_termination(c.body).certified, name);
            }
}

TEST_CASE("generation is deterministic in the seed") {
    PatrolParams p;
    CHECK(generate_patrol(p) == generate_patrol(p));
    PatrolParams other = p;
    other.seed = 2;
    CHECK(generate_patrol(p) != generate_patrol(other));
    WholesaleParams w;
    CHECK(generate_wholesale(w) == generate_wholesale(w));
    PacketsParams k{10, 5};
    CHECK(generate_packets(k) == generate_packets(k));

    setenv("COMPMDP_SEED", "42", 1);
    CHECK(seed_from_env(7) == 42);
    unsetenv("COMPMDP_SEED");
    CHECK(seed_from_env(7) == 7);
}

TEST_CASE("alias duplication multiplies bindings and solves") {
    PatrolParams p{3, 3, 3, 3};
    std::vector<Run> runs;
    std::vector<std::size_t> lets;
    for (DiLevel di : {DiLevel::High, DiLevel::Mid, DiLevel::Low}) {
        p.di = di;
        GeneratedFiles files = generate_patrol(p);
        lets.push_back(count_lets(files));
        runs.push_back(solve(files));
    }
    CHECK(lets[1] == 2 * lets[0]);
    CHECK(lets[2] == 3 * lets[0]);
    CHECK(runs[1].stats.component_solves == 2 * runs[0].stats.component_solves);
    CHECK(runs[2].stats.component_solves == 3 * runs[0].stats.component_solves);
    for (const Run& r : runs) {
        CHECK(std::fabs(r.opt.p - runs[0].opt.p) <= 1e-12);
        CHECK(std::fabs(r.opt.r - runs[0].opt.r) <= 1e-12 * runs[0].opt.r);
    }

    WholesaleParams w;
    w.di = DiLevel::High;
    Run high = solve(generate_wholesale(w));
    w.di = DiLevel::Low;
    Run low = solve(generate_wholesale(w));
    CHECK(alias_count(DiLevel::Low, true) == 4);
    CHECK(low.stats.component_solves == 4 * high.stats.component_solves);
    CHECK(low.opt.r == doctest::Approx(high.opt.r).epsilon(1e-12));
}

TEST_CASE("freezing generated blocks keeps the optimum") {
    PacketsParams k{20, 10};
    Run open = solve(generate_packets(k));
    k.freeze_blocks = true;
    Run frozen = solve(generate_packets(k));
    CHECK(frozen.opt.p == doctest::Approx(open.opt.p).epsilon(1e-9));
    CHECK(frozen.opt.r == doctest::Approx(open.opt.r).epsilon(1e-9));

    WholesaleParams w;
    Run wopen = solve(generate_wholesale(w));
    w.freeze_dispatch = true;
    Run wfrozen = solve(generate_wholesale(w));
    CHECK(wfrozen.opt.r == doctest::Approx(wopen.opt.r).epsilon(1e-9));

    PatrolParams p;
    Run popen = solve(generate_patrol(p));
    p.freeze_rooms = true;
    Run pfrozen = solve(generate_patrol(p));
    CHECK(pfrozen.opt.r == doctest::Approx(popen.opt.r).epsilon(1e-9));
}
