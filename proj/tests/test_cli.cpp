#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(OCTWITT_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("witt table over GF(3)") {
    Run r = run("witt table --ring 'GF(3)' --eps +1 --json");
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["status"] == "ok");
    CHECK(j["result"]["structure"] == json::array({4}));
}

TEST_CASE("invalid input exits 2") {
    CHECK(run("octagon check --ring Z/4 --alpha 2 --beta 2").code == 2);
    CHECK(run("form diag --ring Z/5 --form 1,5").code == 2);
    CHECK(run("form diag --ring Z/5 --eps 2 --form 1").code == 2);
    CHECK(run("octagon finer --ring Z/3 --alpha 2 --beta 2 --gamma 2 --part i").code == 2);
    CHECK(run("no-such-verb").code == 2);
    Run r = run("octagon check --ring Z/4 --alpha 2 --beta 2 --json");
    json j = json::parse(r.out);
    CHECK(j["error"]["code"] == "InvalidModulus");
}

TEST_CASE("jacobson over F_9 / F_3") {
    Run r = run("jacobson --ring 'GF(3)' --alpha 2 --form 1 --json");
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["result"]["isotropic"] == false);
    CHECK(j["result"]["isotropy_equiv"] == true);
}

TEST_CASE("octagon check prints 8 exact nodes") {
    Run r = run("octagon check --ring Z/9 --alpha 2 --beta 5 --eps +1");
    CHECK(r.code == 0);
    int exact = 0;
    for (size_t pos = 0; (pos = r.out.find(", exact", pos)) != std::string::npos; ++pos) ++exact;
    CHECK(exact == 8);
}

TEST_CASE("JSON report feeds back through --in") {
    Run first = run("sequence five --ring Z/9 --alpha 5 --json");
    REQUIRE(first.code == 0);
    const std::string path = "cli_roundtrip.json";
    std::ofstream(path) << first.out;
    Run second = run("sequence five --in " + path + " --json");
    CHECK(second.code == 0);
    json a = json::parse(first.out), b = json::parse(second.out);
    CHECK(a["input"] == b["input"]);
    CHECK(a["result"] == b["result"]);
    std::remove(path.c_str());
}

TEST_CASE("finer sampling is reproducible") {
    Run a = run("octagon finer --ring Z/3 --alpha 2 --beta 2 --part iii --samples 8 --seed 4 --json");
    Run b = run("octagon finer --ring Z/3 --alpha 2 --beta 2 --part iii --samples 8 --seed 4 --json");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("single forms") {
    CHECK(run("form isometric --ring Z/3 --form 1,1 --form2 2,2").out == "isometric\n");
    json d = json::parse(run("form disc --ring Z/5 --form 1,2 --json").out);
    CHECK(d["result"]["trivial"] == false);
    json w = json::parse(run("form witt --ring Z/5 --form 1,2,1,1 --json").out);
    CHECK(w["result"]["hyperbolic_rank"] == 1);
    CHECK(run("form hyp --ring 'Z/3 x GF(5)' --alpha 2 --beta 2 --eps -1 --rank 2").code == 0);
}

}  // TEST_SUITE
