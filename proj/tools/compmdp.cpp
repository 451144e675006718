// Command-line front end.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "compmdp/algebra.hpp"
#include "compmdp/diagram.hpp"
#include "compmdp/dsl.hpp"
#include "compmdp/error.hpp"
#include "compmdp/generators.hpp"
#include "compmdp/prism.hpp"
#include "compmdp/selftest.hpp"
#include "compmdp/semantics.hpp"
#include "compmdp/termination.hpp"

namespace fs = std::filesystem;
using namespace compmdp;

namespace {

// A component file is treated as the diagram consisting of that component.
Diagram load(const std::string& file) {
    const std::string text = read_file(file);
    const fs::path base = fs::path(file).parent_path();
    if (looks_like_component(text)) {
        auto c = std::make_shared<const OpenMDP>(parse_component(text));
        Diagram d;
        const std::string name = c->name.empty() ? "main" : c->name;
        d.bind(name, make_prim(fs::path(file).filename().string(), c));
        d.main = make_var(d, name);
        return d;
    }
    return parse_diagram(text, file_loader(base));
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

struct SolveArgs {
    std::string file;
    std::size_t entrance = 0, exit = 0;
    std::size_t max_schedulers = EvalConfig{}.max_schedulers;
    double prune_eps = 0.0;
    bool no_prune = false, no_memo = false, bench = false;
    unsigned threads = 1;
    std::string stats, scheduler_out;
};

int cmd_solve(const SolveArgs& a) {
    Diagram d = load(a.file);
    EvalConfig cfg;
    cfg.max_schedulers = a.max_schedulers;
    cfg.prune_epsilon = a.prune_eps;
    cfg.prune = !a.no_prune;
    cfg.memoization = !a.no_memo;
    cfg.threads = a.threads;
    const std::size_t i = a.entrance ? a.entrance : d.entrance.value_or(1);
    const std::size_t j = a.exit ? a.exit : d.exit.value_or(1);

    SolveStats stats;
    SemanticArrow front;
    const int runs = a.bench ? 5 : 1;
    double total = 0.0;
    for (int k = 0; k < runs; ++k) {
        stats = SolveStats{};
        auto t0 = std::chrono::steady_clock::now();
        front = solve_diagram(d, d.main, cfg, &stats);
        total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    const double wall = total / runs;
    Optimum best = extract_optimal(front, i, j);
    std::printf("p=%s r=%s\n", fixed(best.p).c_str(), fixed(best.r).c_str());
    if (a.bench) std::printf("wall=%s s (mean of %d runs)\n", format_real(wall).c_str(), runs);

    if (!a.stats.empty()) {
        nlohmann::ordered_json js;
        js["entrance"] = i;
        js["exit"] = j;
        js["p"] = best.p;
        js["r"] = best.r;
        js["componentSolves"] = stats.component_solves;
        js["cacheHits"] = stats.cache_hits;
        js["frontSize"] = front.elements.size();
        nlohmann::ordered_json sizes = nlohmann::ordered_json::object();
        for (const auto& [label, n] : stats.front_sizes) sizes[label] = n;
        js["frontSizes"] = sizes;
        js["wallTime"] = wall;
        write_text(a.stats, js.dump(2) + "\n");
    }
    if (!a.scheduler_out.empty()) {
        std::string out;
        for (const auto& [pos, act] : witness_assignments(d, d.main, best.tag))
            out += pos + " " + act + "\n";
        write_text(a.scheduler_out, out);
    }
    return 0;
}

int cmd_check(const std::string& file, bool termination) {
    Diagram d = load(file);
    std::size_t components = 0;
    for (const auto& [name, e] : d.bindings())
        if (e->kind == Expr::Kind::Prim) ++components;
    std::printf("valid: %zu component%s, top-level %s -> %s\n", components,
                components == 1 ? "" : "s", to_string(d.main->dom).c_str(),
                to_string(d.main->cod).c_str());
    if (!termination) return 0;
    OpenMDP flat = flatten(d, d.main);
    TerminationReport rep = check_termination(flat.body);
    if (rep.certified) {
        std::printf("terminating: under every memoryless scheduler all %zu positions are left almost surely\n",
                    flat.body.num_positions());
    } else {
        std::printf("WARNING: termination not certified; a scheduler can stay forever in:");
        for (const auto& q : rep.trapped) std::printf(" %s", q.c_str());
        std::printf("\nWARNING: memoryless optimality is not guaranteed for this model\n");
    }
    if (!rep.dead_ends.empty()) {
        std::printf("dead ends (mass is lost):");
        for (const auto& q : rep.dead_ends) std::printf(" %s", q.c_str());
        std::printf("\n");
    }
    return 0;
}

struct GenArgs {
    std::string family, out = ".", di = "high", fz = "none";
    std::uint64_t seed = 1;
    PatrolParams patrol;
    WholesaleParams wholesale;
    PacketsParams packets;
};

int cmd_gen(GenArgs a) {
    const DiLevel di = parse_di(a.di);
    if (a.fz != "none" && a.fz != "int") throw Error("--fz expects none or int");
    const bool fz = a.fz == "int";
    const std::uint64_t seed = seed_from_env(a.seed);
    GeneratedFiles files;
    if (a.family == "patrol") {
        a.patrol.di = di;
        a.patrol.freeze_rooms = fz;
        a.patrol.seed = seed;
        files = generate_patrol(a.patrol);
    } else if (a.family == "wholesale") {
        a.wholesale.di = di;
        a.wholesale.freeze_dispatch = fz;
        a.wholesale.seed = seed;
        files = generate_wholesale(a.wholesale);
    } else if (a.family == "packets") {
        a.packets.di = di;
        a.packets.freeze_blocks = fz;
        a.packets.seed = seed;
        files = generate_packets(a.packets);
    } else {
        throw Error("unknown family '" + a.family + "' (expected patrol, wholesale or packets)");
    }
    for (const auto& [name, text] : files) write_text(fs::path(a.out) / name, text);
    std::printf("wrote %zu files to %s\n", files.size(), a.out.c_str());
    return 0;
}

int cmd_flatten(const std::string& file, const std::string& out, const std::string& format,
                std::size_t entrance) {
    Diagram d = load(file);
    OpenMDP flat = flatten(d, d.main);
    flat.name = "flat";
    std::string text;
    if (format == "native")
        text = print_component(flat);
    else if (format == "prism")
        text = export_prism(flat.body, entrance ? entrance : d.entrance.value_or(1));
    else
        throw Error("unknown format '" + format + "' (expected native or prism)");
    if (out.empty() || out == "-")
        std::fputs(text.c_str(), stdout);
    else
        write_text(out, text);
    return 0;
}

int cmd_selftest(std::uint64_t seed, std::size_t instances) {
    SelftestConfig cfg;
    cfg.seed = seed_from_env(seed);
    cfg.instances = instances;
    bool ok = true;
    for (const AxiomReport& r : run_axiom_suite(cfg)) {
        std::printf("%-4s %-20s %zu instances%s", r.ok() ? "ok" : "FAIL", r.name.c_str(),
                    r.instances, r.wire_only ? " (wires only)" : "");
        if (!r.ok()) std::printf("  %s", r.first_failure.c_str());
        std::printf("\n");
        ok = ok && r.ok();
    }
    return ok ? 0 : 1;
}

int report(const char* kind, const std::exception& e, int code) {
    std::fprintf(stderr, "error: %s: %s\n", kind, e.what());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compositional model checker for string diagrams of open MDPs"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Optimal reachability and expected reward of a diagram");
    solve->add_option("file", sa.file, "Diagram or component file")->required();
    solve->add_option("-i,--entrance", sa.entrance, "Entrance (1-based); defaults to the file's");
    solve->add_option("-j,--exit", sa.exit, "Exit (1-based); defaults to the file's");
    solve->add_option("--max-schedulers", sa.max_schedulers, "Scheduler cap per component");
    solve->add_option("--prune-eps", sa.prune_eps, "Dominance slack for pruning");
    solve->add_flag("--no-prune", sa.no_prune, "Keep dominated scheduler behaviours");
    solve->add_flag("--no-memo", sa.no_memo, "Re-solve repeated bindings");
    solve->add_option("--threads", sa.threads, "Worker threads for component lifting");
    solve->add_option("--stats", sa.stats, "Write JSON statistics");
    solve->add_option("--scheduler-out", sa.scheduler_out, "Write the optimal scheduler");
    solve->add_flag("--bench", sa.bench, "Report the mean wall time of five runs");

    std::string check_file;
    bool termination = false;
    auto* check = app.add_subcommand("check", "Validate components and check termination");
    check->add_option("file", check_file, "Diagram or component file")->required();
    check->add_flag("--termination", termination, "Check almost-sure termination of the flattened model");

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "Generate a benchmark family");
    gen->add_option("family", ga.family, "patrol, wholesale or packets")->required();
    gen->add_option("-o,--out", ga.out, "Output directory");
    gen->add_option("--di", ga.di, "Degree of identification: high, mid or low");
    gen->add_option("--fz", ga.fz, "Freeze the lowest composite layer: none or int");
    gen->add_option("--seed", ga.seed, "Generator seed (COMPMDP_SEED overrides)");
    gen->add_option("--tasks", ga.patrol.tasks, "patrol: tasks per room");
    gen->add_option("--rooms", ga.patrol.rooms, "patrol: rooms per floor");
    gen->add_option("--floors", ga.patrol.floors, "patrol: floors per building");
    gen->add_option("--buildings", ga.patrol.buildings, "patrol: buildings");
    gen->add_option("--task-variants", ga.patrol.variants, "patrol: distinct tasks");
    gen->add_option("--length", ga.wholesale.length, "wholesale: stages per item");
    gen->add_option("--items", ga.wholesale.items, "wholesale: distinct items");
    gen->add_option("--dispatches", ga.wholesale.dispatches, "wholesale: dispatches per pipeline");
    gen->add_option("--pipelines", ga.wholesale.pipelines, "wholesale: pipelines");
    gen->add_option("--steps", ga.packets.steps, "packets: steps per block");
    gen->add_option("--blocks", ga.packets.blocks, "packets: blocks");
    gen->add_option("--variants", ga.packets.variants, "packets: distinct blocks");

    std::string flat_file, flat_out, format = "native";
    std::size_t flat_entrance = 0;
    auto* flat = app.add_subcommand("flatten", "Write the monolithic model of a diagram");
    flat->add_option("file", flat_file, "Diagram or component file")->required();
    flat->add_option("-o,--out", flat_out, "Output file (stdout when omitted)");
    flat->add_option("--format", format, "native or prism");
    flat->add_option("--entrance", flat_entrance, "Initial entrance for the prism export");

    std::uint64_t st_seed = 1;
    std::size_t st_instances = 100;
    auto* self = app.add_subcommand("selftest", "Check the algebraic laws on random instances");
    self->add_option("--seed", st_seed, "Seed (COMPMDP_SEED overrides)");
    self->add_option("--instances", st_instances, "Instances per law");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return cmd_solve(sa);
        if (*check) return cmd_check(check_file, termination);
        if (*gen) return cmd_gen(ga);
        if (*flat) return cmd_flatten(flat_file, flat_out, format, flat_entrance);
        if (*self) return cmd_selftest(st_seed, st_instances);
    } catch (const SyntaxError& e) {
        return report("syntax", e, 2);
    } catch (const ValidationError& e) {
        return report("validation", e, 2);
    } catch (const UnboundName& e) {
        return report("unbound name", e, 2);
    } catch (const ArityMismatch& e) {
        return report("arity mismatch", e, 3);
    } catch (const WireCycle& e) {
        return report("wire cycle", e, 3);
    } catch (const SchedulerExplosion& e) {
        return report("scheduler explosion", e, 4);
    } catch (const FrozenMultiExit& e) {
        return report("frozen block", e, 4);
    } catch (const std::exception& e) {
        return report("error", e, 1);
    }
    return 0;
}
