#include <doctest.h>

#include "compmdp/selftest.hpp"

using namespace compmdp;

TEST_CASE("every law holds on random instances") {
    for (std::uint64_t seed : {1, 2, 3}) {
        SelftestConfig cfg;
        cfg.seed = seed;
        cfg.instances = 100;
        auto reports = run_axiom_suite(cfg);
        CHECK(reports.size() == 23);
        for (const AxiomReport& r : reports) {
            CHECK_MESSAGE(r.ok(), r.name << ": " << r.first_failure);
            CHECK_MESSAGE(r.instances == 100, r.name);
        }
    }
}

TEST_CASE("wire-only laws are marked") {
    std::size_t wire_only = 0;
    for (const AxiomReport& r : run_axiom_suite(SelftestConfig{1, 5}))
        if (r.wire_only) ++wire_only;
    CHECK(wire_only == 6);
}

TEST_CASE("front equivalence tolerates rounding only") {
    auto one = [](double p, double r) {
        SemanticArrowMC v(1, 1);
        v.p(0, 0) = p;
        v.r(0, 0) = r;
        return SemanticArrow{1, 1, {{v, nullptr}}, {{}}};
    };
    CHECK(fronts_equivalent(one(0.5, 1.0), one(0.5, 1.0 + 1e-12), 1e-9));
    std::string why;
    CHECK_FALSE(fronts_equivalent(one(0.5, 1.0), one(0.5, 1.1), 1e-9, &why));
    CHECK_FALSE(why.empty());
    SemanticArrow two = one(0.5, 1.0);
    two.elements.push_back(one(0.5, 1.0 - 1e-11).elements[0]);
    CHECK(fronts_equivalent(two, one(0.5, 1.0), 1e-9));
}
