#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using Catch::Matchers::WithinAbs;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    static int counter = 0;
    const std::string out_path = "cli_out_" + std::to_string(++counter) + ".txt";
    const std::string err_path = "cli_err_" + std::to_string(counter) + ".txt";
    const std::string cmd =
        std::string(GRV_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::string fixture(const std::string& name) { return std::string(GRV_DATA_DIR) + "/" + name; }

std::vector<std::string> nonempty_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("analyze reports the maximally entangled pair state", "[cli]") {
    const RunResult r = run("analyze --input " + fixture("ghz_amplitudes.json"));
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["type"] == "T2b");
    CHECK(doc["p_max_source"] == "analytic");
    CHECK_THAT(doc["p_max"].get<double>(), WithinAbs(0.5, 1e-12));
    CHECK_THAT(doc["g"].get<double>(), WithinAbs(0.7071067811865476, 1e-12));
    CHECK(doc["numeric"]["converged"] == true);
    CHECK_THAT(doc["numeric"]["value"].get<double>(), WithinAbs(0.5, 1e-10));
}

TEST_CASE("analyze reports the symmetric three-term state", "[cli]") {
    const RunResult r = run("analyze --input " + fixture("w_amplitudes.json"));
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["type"] == "T3a");
    CHECK_THAT(doc["p_max"].get<double>(), WithinAbs(4.0 / 9.0, 1e-9));
    CHECK_THAT(doc["g"].get<double>(), WithinAbs(std::sqrt(5.0) / 3.0, 1e-12));
}

TEST_CASE("analyze falls back to the maximizer when no formula exists", "[cli]") {
    const RunResult r = run("analyze --input " + fixture("generic_acin.json"));
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["type"] == "GENERIC");
    CHECK(doc["analytic"]["available"] == false);
    CHECK(doc["analytic"]["reason"] == "unavailable: not presented");
    CHECK(doc["p_max_source"] == "numeric");
    CHECK(doc["numeric"]["converged"] == true);
}

TEST_CASE("analyze handles the four-term and two-qubit kinds", "[cli]") {
    // Equal parameters standard-form to the maximally entangled class and pick
    // up its closed form; a generic profile stays on the candidate-table path.
    const RunResult w = run("analyze --input " + fixture("wlike_half.json"));
    REQUIRE(w.exit_code == 0);
    const nlohmann::json wd = nlohmann::json::parse(w.out);
    CHECK(wd["type"] == "T2b");
    CHECK_THAT(wd["p_max"].get<double>(), WithinAbs(0.5, 1e-9));
    CHECK(wd["analytic"]["formula"] == "generalized-ghz");

    const RunResult g = run("analyze --input " + fixture("wlike_generic.json"));
    REQUIRE(g.exit_code == 0);
    const nlohmann::json gd = nlohmann::json::parse(g.out);
    CHECK(gd["type"] == "WLIKE");
    CHECK(gd["analytic"]["formula"] == "Q");
    REQUIRE(gd["analytic"]["candidates"].size() == 3);
    CHECK(gd["analytic"]["candidates"][0]["note"] == "matches numeric maximizer");
    CHECK(gd["p_max_source"] == "analytic");
    CHECK(std::abs(gd["p_max"].get<double>() - gd["numeric"]["value"].get<double>()) < 1e-6);

    const RunResult b = run("analyze --input " + fixture("bell_two_qubit.json"));
    REQUIRE(b.exit_code == 0);
    const nlohmann::json bd = nlohmann::json::parse(b.out);
    REQUIRE(bd["two_qubit"].is_object());
    CHECK_THAT(bd["two_qubit"]["j"].get<double>(), WithinAbs(0.25, 1e-12));
    CHECK_THAT(bd["two_qubit"]["p_max"].get<double>(), WithinAbs(0.5, 1e-12));
    CHECK_THAT(bd["two_qubit"]["schmidt"][0].get<double>(),
               WithinAbs(1.0 / std::sqrt(2.0), 1e-12));
}

TEST_CASE("analyze renders text when asked", "[cli]") {
    const RunResult r =
        run("analyze --input " + fixture("ghz_amplitudes.json") + " --format text");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("type:") != std::string::npos);
    CHECK(r.out.find("T2b") != std::string::npos);
    CHECK(r.out.find("p_max:") != std::string::npos);
    CHECK(r.out.find("converged = yes") != std::string::npos);
}

TEST_CASE("analyze processes JSON-lines input one report per line", "[cli]") {
    const RunResult r = run("analyze --input " + fixture("states_mixed.jsonl"));
    REQUIRE(r.exit_code == 0);
    const auto lines = nonempty_lines(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(nlohmann::json::parse(lines[0])["input"]["kind"] == "acin");
    CHECK(nlohmann::json::parse(lines[1])["input"]["kind"] == "wlike");
    CHECK(nlohmann::json::parse(lines[2])["input"]["kind"] == "two_qubit");
}

TEST_CASE("invalid inputs exit with the usage code", "[cli]") {
    CHECK(run("").exit_code == 2);
    CHECK(run("analyze").exit_code == 2);
    CHECK(run("analyze --input no_such_file.json").exit_code == 2);
    CHECK(run("analyze --input " + fixture("not_json.json")).exit_code == 2);
    CHECK(run("analyze --input " + fixture("bad_norm.json")).exit_code == 2);
    CHECK(run("analyze --input " + fixture("two_kinds.json")).exit_code == 2);
    CHECK(run("random qutrit").exit_code == 2);
    CHECK(run("verify --suite no-such-suite").exit_code == 2);
}

TEST_CASE("a starved optimizer exits with the convergence code", "[cli]") {
    const RunResult r =
        run("analyze --input " + fixture("w_amplitudes.json") + " --max-iters 1");
    CHECK(r.exit_code == 3);
    // The report is still emitted in full.
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["numeric"]["converged"] == false);
}

TEST_CASE("random generation is reproducible and consumable", "[cli]") {
    const RunResult a = run("random haar3 --n 100 --seed 9");
    const RunResult b = run("random haar3 --n 100 --seed 9");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(nonempty_lines(a.out).size() == 100);

    const RunResult c = run("random haar3 --n 100 --seed 10");
    CHECK(a.out != c.out);

    const RunResult w = run("random wlike-uniform --n 50 --seed 3");
    REQUIRE(w.exit_code == 0);
    for (const auto& line : nonempty_lines(w.out)) {
        const nlohmann::json doc = nlohmann::json::parse(line);
        REQUIRE(doc.contains("wlike"));
        const double a2 = doc["wlike"]["a"].get<double>(), b2 = doc["wlike"]["b"].get<double>(),
                     c2 = doc["wlike"]["c"].get<double>(), q2 = doc["wlike"]["q"].get<double>();
        CHECK_THAT(a2 * a2 + b2 * b2 + c2 * c2 + q2 * q2, WithinAbs(1.0, 1e-12));
    }

    const RunResult g = run("random ghz --n 1");
    REQUIRE(g.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(nonempty_lines(g.out)[0]);
    CHECK(doc.contains("acin"));
}

TEST_CASE("random output files feed straight back into analyze", "[cli]") {
    const std::string path = "cli_random_roundtrip.jsonl";
    const RunResult gen = run("random acin-uniform --n 3 --seed 11 --out " + path);
    REQUIRE(gen.exit_code == 0);
    const RunResult an = run("analyze --input " + path + " --restarts 8");
    std::remove(path.c_str());
    REQUIRE(an.exit_code == 0);
    const auto lines = nonempty_lines(an.out);
    REQUIRE(lines.size() == 3);
    for (const auto& line : lines) {
        const nlohmann::json doc = nlohmann::json::parse(line);
        CHECK(doc["numeric"]["converged"] == true);
        CHECK(doc["g"].is_number());
    }
}

TEST_CASE("verification suites run from the command line", "[cli]") {
    const RunResult q = run("verify --suite quartic --n 20");
    REQUIRE(q.exit_code == 0);
    const nlohmann::json qd = nlohmann::json::parse(q.out);
    CHECK(qd["suite"] == "quartic");
    CHECK(qd["pass"] == true);
    CHECK(qd["n"] == 20);

    const RunResult rel = run("verify --suite relations --n 15 --seed 5");
    REQUIRE(rel.exit_code == 0);
    CHECK(nlohmann::json::parse(rel.out)["pass"] == true);
}
