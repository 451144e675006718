#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "compmdp/dsl.hpp"

namespace fs = std::filesystem;

namespace {

const char* kTask = R"(mdp task {
  arity 1 -> 1
  actions [go]
  positions { q reward 4 }
  entry 1 -> q
  trans q go { q: 0.2, exit 1: 0.8 }
}
)";

// Two actions; "stay" closes a loop that never reaches the exit.
const char* kTrap = R"(mdp trap {
  arity 1 -> 1
  actions [leave, stay]
  positions { q reward 1 }
  entry 1 -> q
  trans q leave { exit 1: 1 }
  trans q stay { q: 1 }
}
)";

const char* kTwoExits = R"(mdp split {
  arity 1 -> 2
  actions [go]
  positions { q reward 1 }
  entry 1 -> q
  trans q go { exit 1: 0.5, exit 2: 0.5 }
}
)";

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

class Workdir {
public:
    Workdir() : dir_(fs::temp_directory_path() / ("compmdp_cli_" + std::to_string(getpid()))) {
        fs::create_directories(dir_);
        write("task.mdp", kTask);
        write("trap.mdp", kTrap);
        write("split.mdp", kTwoExits);
    }
    ~Workdir() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }

    fs::path path(const std::string& name) const { return dir_ / name; }

    void write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name) << text;
    }

    std::string read(const std::string& name) const { return compmdp::read_file(dir_ / name); }

    Result run(const std::string& args) const {
        const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
        std::string cmd = "cd '" + dir_.string() + "' && '" COMPMDP_CLI "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
        int status = std::system(cmd.c_str());
        Result r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = compmdp::read_file(out);
        r.err = compmdp::read_file(err);
        return r;
    }

private:
    fs::path dir_;
};

}  // namespace

TEST_CASE("solve prints the optimal pair") {
    Workdir w;
    Result r = w.run("solve task.mdp");
    CHECK(r.code == 0);
    CHECK(r.out == "p=1.000000000000 r=5.000000000000\n");

    w.write("tt.diag", "let T = load \"task.mdp\";\nsolve T ; T entrance 1 exit 1\n");
    r = w.run("solve tt.diag --stats stats.json --scheduler-out sched.txt");
    CHECK(r.code == 0);
    CHECK(r.out == "p=1.000000000000 r=10.000000000000\n");
    auto js = nlohmann::json::parse(w.read("stats.json"));
    CHECK(js["componentSolves"] == 1);
    CHECK(js["cacheHits"] == 1);
    CHECK(js["p"].get<double>() == doctest::Approx(1.0));
    CHECK(js["r"].get<double>() == doctest::Approx(10.0));
    CHECK(js["frontSize"] == 1);
    CHECK(js.contains("frontSizes"));
    CHECK(js.contains("wallTime"));
    CHECK(w.read("sched.txt") == "L/q go\nR/q go\n");

    r = w.run("solve tt.diag --no-memo --stats stats.json");
    CHECK(nlohmann::json::parse(w.read("stats.json"))["componentSolves"] == 2);

    w.write("id.diag", "solve id[1]\n");
    r = w.run("solve id.diag");
    CHECK(r.out == "p=1.000000000000 r=0.000000000000\n");

    r = w.run("solve split.mdp -j 2");
    CHECK(r.out == "p=0.500000000000 r=0.500000000000\n");
}

TEST_CASE("exit codes follow the error kind") {
    Workdir w;
    w.write("bad_syntax.diag", "let T = load \"task.mdp\";\nT (+)\n");
    CHECK(w.run("solve bad_syntax.diag").code == 2);

    std::string bad = kTask;
    bad.replace(bad.find("0.2"), 3, "0.1");
    w.write("bad_row.mdp", bad);
    Result r = w.run("solve bad_row.mdp");
    CHECK(r.code == 2);
    CHECK(r.err.find("row") != std::string::npos);

    w.write("unbound.diag", "T ; T\n");
    CHECK(w.run("solve unbound.diag").code == 2);

    w.write("arity.diag", "let T = load \"task.mdp\";\nT ; id[2]\n");
    CHECK(w.run("solve arity.diag").code == 3);
    CHECK(w.run("solve task.mdp -i 2").code == 3);

    w.write("cycle.diag", "tr[1](id[1])\n");
    CHECK(w.run("solve cycle.diag").code == 3);

    CHECK(w.run("solve trap.mdp --max-schedulers 1").code == 4);

    w.write("multi.diag", "let S = load \"split.mdp\";\nfreeze(S)\n");
    r = w.run("solve multi.diag");
    CHECK(r.code == 4);
    CHECK(r.err.find("unique exit") != std::string::npos);

    CHECK(w.run("solve missing.mdp").code == 1);
}

TEST_CASE("flatten writes native and prism models") {
    Workdir w;
    w.write("tt.diag", "let T = load \"task.mdp\";\nT ; T\n");
    Result r = w.run("flatten tt.diag -o flat.mdp");
    CHECK(r.code == 0);
    compmdp::OpenMDP flat = compmdp::parse_component(w.read("flat.mdp"));
    CHECK(flat.name == "flat");
    CHECK(flat.body.num_positions() == 2);
    CHECK(w.run("solve flat.mdp").out == "p=1.000000000000 r=10.000000000000\n");

    r = w.run("flatten tt.diag --format prism");
    CHECK(r.code == 0);
    CHECK(r.out.find("\nmdp\n") != std::string::npos);
    CHECK(r.out.find("endmodule") != std::string::npos);
    CHECK(r.out.find("rewards \"reward\"") != std::string::npos);
    CHECK(r.out.find("label \"exit_1\"") != std::string::npos);

    CHECK(w.run("flatten tt.diag --format dot").code == 1);
}

TEST_CASE("check reports termination") {
    Workdir w;
    Result r = w.run("check task.mdp --termination");
    CHECK(r.code == 0);
    CHECK(r.out.find("valid: 1 component, top-level (1,0) -> (1,0)") == 0);
    CHECK(r.out.find("terminating:") != std::string::npos);

    r = w.run("check trap.mdp --termination");
    CHECK(r.code == 0);
    CHECK(r.out.find("WARNING") != std::string::npos);
    CHECK(r.out.find(" q") != std::string::npos);

    w.write("wires.diag", "id[2] ; swap[1,1]\n");
    r = w.run("check wires.diag --termination");
    CHECK(r.code == 0);
    CHECK(r.out.find("valid: 0 components") == 0);
    CHECK(r.out.find("all 0 positions") != std::string::npos);
}

TEST_CASE("gen writes a solvable family") {
    Workdir w;
    Result r = w.run("gen patrol -o pat --di mid --tasks 2 --rooms 2 --floors 1 --buildings 1");
    CHECK(r.code == 0);
    CHECK(fs::exists(w.path("pat/patrol.diag")));
    r = w.run("solve pat/patrol.diag --stats s.json");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("p=1.000000000000 r=", 0) == 0);

    const std::string first = w.read("pat/patrol.diag");
    CHECK(w.run("gen patrol -o pat2 --di mid --tasks 2 --rooms 2 --floors 1 --buildings 1").code == 0);
    CHECK(w.read("pat2/patrol.diag") == first);

    r = w.run("gen packets -o pk --fz int --steps 5 --blocks 3");
    CHECK(r.code == 0);
    CHECK(w.read("pk/packets.diag").find("freeze(") != std::string::npos);
    CHECK(w.run("gen nothing -o x").code == 1);
}

TEST_CASE("selftest passes") {
    Workdir w;
    Result r = w.run("selftest --instances 10");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("Dinaturality") != std::string::npos);
}
