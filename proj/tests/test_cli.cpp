#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

std::string bin() {
    const char* b = std::getenv("GLV_BIN");
    return b ? b : "build/glv";
}

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    RunResult r;
    std::string cmd = bin() + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
    REQUIRE(f.good());
}

}  // namespace

TEST_CASE("decide exit codes and verdicts") {
    auto valid = run("decide \"=> A -> A\"");
    CHECK(valid.code == 0);
    CHECK(valid.out.find("verdict: valid") != std::string::npos);

    auto invalid = run("decide \"=> A\"");
    CHECK(invalid.code == 1);
    CHECK(invalid.out.find("verdict: invalid") != std::string::npos);
    CHECK(invalid.out.find("countermodel:") != std::string::npos);

    CHECK(run("decide \"=> A ->\"").code == 2);
    // quantified input belongs to prove
    CHECK(run("decide \"=> exists x. P(x)\"").code == 2);
}

TEST_CASE("prove writes a checkable proof") {
    std::string goal = "\"=> exists x. (A(x) -> forall y. A(y))\"";
    auto r = run("prove --n 2 " + goal + " -o /tmp/glv_cli_proof.json");
    CHECK(r.code == 0);
    CHECK(r.out.find("verdict: proved") != std::string::npos);

    auto ok = run("check /tmp/glv_cli_proof.json");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("verdict: accepted") != std::string::npos);

    // tampering must be caught
    nlohmann::json j;
    {
        std::ifstream f("/tmp/glv_cli_proof.json");
        f >> j;
    }
    j["nodes"][0]["conclusion"] = "A => B";
    write_file("/tmp/glv_cli_tampered.json", j.dump());
    CHECK(run("check /tmp/glv_cli_tampered.json").code == 1);

    write_file("/tmp/glv_cli_garbage.json", "not json at all");
    CHECK(run("check /tmp/glv_cli_garbage.json").code == 2);
}

TEST_CASE("prove reports exhaustion") {
    auto r = run("prove --n 1 --max-k 0 \"=> exists x. P(x)\"");
    CHECK(r.code == 3);
    CHECK(r.out.find("verdict: exhausted") != std::string::npos);
}

TEST_CASE("countermodel search") {
    auto prop = run("countermodel \"=> A * ~A\"");
    CHECK(prop.code == 1);
    CHECK(prop.out.find("verdict: refuted") != std::string::npos);

    auto fo = run("countermodel \"=> exists x. P(x)\"");
    CHECK(fo.code == 1);
    CHECK(fo.out.find("structure:") != std::string::npos);

    CHECK(run("countermodel \"=> A -> A\"").code == 3);
}

TEST_CASE("skolemize prints the removal tree") {
    auto r = run("skolemize \"=> exists x. (A(x) -> forall y. A(y))\"");
    CHECK(r.code == 0);
    CHECK(r.out.find("level 0") != std::string::npos);
    CHECK(r.out.find("right-exists") != std::string::npos);
    CHECK(r.out.find("x#1") != std::string::npos);
}

TEST_CASE("eval against a model file") {
    write_file("/tmp/glv_cli_model.txt", "A = 1/2\n");
    auto holds = run("eval --model /tmp/glv_cli_model.txt \"A => A\"");
    CHECK(holds.code == 0);
    CHECK(holds.out.find("verdict: holds") != std::string::npos);

    write_file("/tmp/glv_cli_model2.txt", "A = 1\n");
    auto fails = run("eval --model /tmp/glv_cli_model2.txt \"=> A\"");
    CHECK(fails.code == 1);
    CHECK(fails.out.find("value: 1") != std::string::npos);
}

TEST_CASE("json output mode emits json") {
    auto r = run("--format json decide \"=> A -> A\"");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("verdict") == "valid");
}

TEST_CASE("runs are deterministic") {
    auto a = run("prove --n 2 \"=> exists x. (A(x) -> forall y. A(y))\"");
    auto b = run("prove --n 2 \"=> exists x. (A(x) -> forall y. A(y))\"");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}
