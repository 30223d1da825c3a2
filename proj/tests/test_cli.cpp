#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "intent/corpus.hpp"
#include "intent/scenario.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const fs::path& work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "intentcheck_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    fs::path out_path = work_dir() / ("out" + std::to_string(counter) + ".txt");
    fs::path err_path = work_dir() / ("err" + std::to_string(counter) + ".txt");
    ++counter;

    std::string command = env_prefix + (env_prefix.empty() ? "" : " ") + "\"" INTENTCHECK_BIN
                          "\" " + args + " > \"" + out_path.string() + "\" 2> \"" +
                          err_path.string() + "\"";
    int raw = std::system(command.c_str());

    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = read_all(out_path);
    r.err = read_all(err_path);
    return r;
}

std::string corpus_file(const std::string& name) {
    return (fs::path(INTENT_CORPUS_DIR) / (name + ".intent")).string();
}

}  // namespace

TEST_CASE("validate reports a clean scenario and full capacity") {
    RunResult r = run_cli("validate " + corpus_file("unreliable_bomb"));
    CHECK(r.code == 0);
    CHECK(r.out.find("scenario: valid") != std::string::npos);
    CHECK(r.out.find("capacity: 10/10") != std::string::npos);
}

TEST_CASE("validate lists the capacity gaps of a choiceless agent") {
    RunResult r = run_cli("validate " + corpus_file("cowardly_jackal_cornered"));
    CHECK(r.code == 0);
    CHECK(r.out.find("capacity: 9/10") != std::string::npos);
    CHECK(r.out.find("missing chosen actions") != std::string::npos);
}

TEST_CASE("validate rejects a cyclic model with the non-dag code") {
    fs::path bad = work_dir() / "cyclic.intent";
    std::ofstream(bad) << "format: 1\n"
                          "\n"
                          "model:\n"
                          "  action Plant {yes, no}\n"
                          "  var Explode (Plant, Echo) {\n"
                          "    (yes, yes) -> yes\n"
                          "    (yes, no) -> no\n"
                          "    (no, yes) -> no\n"
                          "    (no, no) -> no\n"
                          "  }\n"
                          "  var Echo (Explode) {\n"
                          "    (yes) -> yes\n"
                          "    (no) -> no\n"
                          "  }\n"
                          "\n"
                          "performed: (Plant: yes)\n";
    RunResult r = run_cli("validate \"" + bad.string() + "\"");
    CHECK(r.code == 1);
    CHECK(r.err.find("non-dag") != std::string::npos);
}

TEST_CASE("validate rejects a missing file") {
    RunResult r = run_cli("validate " + (work_dir() / "nowhere.intent").string());
    CHECK(r.code == 1);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("eval renders the frozen explanation byte for byte") {
    RunResult r = run_cli("eval " + corpus_file("unreliable_bomb") +
                          " --query oblique --result Death=yes");
    CHECK(r.code == 0);
    std::string golden =
        read_all(fs::path(INTENT_CORPUS_DIR) / "unreliable_bomb.oblique_death.explain.txt");
    REQUIRE_FALSE(golden.empty());
    CHECK(r.out == golden);
}

TEST_CASE("eval json output is byte stable across runs") {
    std::string args = "eval " + corpus_file("unreliable_bomb") +
                       " --query oblique --result Death=yes --json";
    RunResult first = run_cli(args);
    RunResult second = run_cli(args);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
    CHECK(first.out.find("\"definition\"") != std::string::npos);
}

TEST_CASE("tau overrides rewrite the probability clauses") {
    std::string base = "eval " + corpus_file("unreliable_bomb") +
                       " --query oblique --result Death=yes";

    RunResult strict = run_cli(base + " --tau 1.0");
    CHECK(strict.code == 0);
    CHECK(strict.out.find("HOLDS") != std::string::npos);
    CHECK(strict.out.find("tau=1 ") != std::string::npos);

    RunResult loose = run_cli(base + " --tau 0.2");
    CHECK(loose.code == 0);
    CHECK(loose.out.find("HOLDS") != std::string::npos);
    CHECK(loose.out.find("meets tau 0.2") != std::string::npos);
}

TEST_CASE("a tiny context cap aborts with the infeasible exit code") {
    RunResult r = run_cli("eval " + corpus_file("unreliable_bomb"),
                          "INTENT_CONTEXT_CAP=1");
    CHECK(r.code == 2);
    CHECK(r.err.find("cap") != std::string::npos);
}

TEST_CASE("corpus self-check matches every shipped scenario") {
    RunResult r = run_cli("corpus");
    CHECK(r.code == 0);
    std::string n = std::to_string(intent::corpus().size());
    CHECK(r.out.find(n + "/" + n + " scenarios match") != std::string::npos);
}

TEST_CASE("bad query flags exit with the invalid-input code") {
    std::string file = corpus_file("unreliable_bomb");

    RunResult unknown = run_cli("eval " + file + " --query clairvoyance --result Death=yes");
    CHECK(unknown.code == 1);

    RunResult malformed = run_cli("eval " + file + " --query oblique --result Deathyes");
    CHECK(malformed.code == 1);

    RunResult dangling = run_cli("eval " + file + " --query oblique");
    CHECK(dangling.code == 1);
}

TEST_CASE("json scenario input evaluates identically to the text form") {
    intent::ParseResult parsed =
        intent::parse_scenario(read_all(corpus_file("unreliable_bomb")));
    REQUIRE(std::holds_alternative<intent::Scenario>(parsed));
    fs::path json_file = work_dir() / "unreliable_bomb.json";
    std::ofstream(json_file) << intent::scenario_to_json(std::get<intent::Scenario>(parsed));

    std::string tail = " --query oblique --result Death=yes --json";
    RunResult text = run_cli("eval " + corpus_file("unreliable_bomb") + tail);
    RunResult tree = run_cli("eval \"" + json_file.string() + "\"" + tail);
    CHECK(text.code == 0);
    CHECK(tree.code == 0);
    CHECK(text.out == tree.out);
}

TEST_CASE("a verdict that does not hold still exits zero") {
    RunResult r = run_cli("eval " + corpus_file("dud_bomb") +
                          " --query moral_responsibility --result Death=yes");
    CHECK(r.code == 0);
    CHECK(r.out.find("DOES NOT HOLD") != std::string::npos);
}
